//! Exact joint distributions and the information quantities built on them.
//!
//! Probabilities are exact rationals; entropies are evaluated in bits in a
//! floating scalar `F`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::code::NetworkCode;
use crate::gf2::BitVector;
use crate::net::{EdgeId, NodeId, SourceId};
use crate::scalar::ratio_to_real;
use crate::{rational, Error, Rational, RealScalar, Result};

/// Largest number of free message bits `induced_distribution` will enumerate.
pub const MAX_ENUMERATED_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Variable {
    pub name: String,
    pub alphabet: u64,
}

impl Variable {
    pub fn new(name: impl Into<String>, alphabet: u64) -> Self {
        Variable { name: name.into(), alphabet }
    }
}

/// A joint law over named finite variables. Outcomes with probability zero
/// are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionTable {
    variables: Vec<Variable>,
    probs: BTreeMap<Vec<u64>, Rational>,
}

impl DistributionTable {
    pub fn new(variables: Vec<Variable>, probs: BTreeMap<Vec<u64>, Rational>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for v in &variables {
            if v.alphabet == 0 {
                return Err(Error::InvalidDistribution(format!("variable {} has an empty alphabet", v.name)));
            }
            if !names.insert(v.name.as_str()) {
                return Err(Error::InvalidDistribution(format!("duplicate variable {}", v.name)));
            }
        }
        let mut total = Rational::zero();
        for (outcome, p) in &probs {
            if outcome.len() != variables.len() {
                return Err(Error::InvalidDistribution(format!(
                    "outcome {outcome:?} has {} values for {} variables",
                    outcome.len(),
                    variables.len()
                )));
            }
            if let Some((v, x)) = variables.iter().zip(outcome).find(|(v, &x)| x >= v.alphabet) {
                return Err(Error::InvalidDistribution(format!("value {x} outside the alphabet of {}", v.name)));
            }
            if *p < Rational::zero() {
                return Err(Error::InvalidDistribution(format!("negative probability at {outcome:?}")));
            }
            total += p;
        }
        if total != Rational::one() {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {}", rational::format(&total))));
        }
        let probs = probs.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(DistributionTable { variables, probs })
    }

    /// Normalizes nonnegative integer weights.
    pub fn from_weights(variables: Vec<Variable>, weights: impl IntoIterator<Item = (Vec<u64>, u64)>) -> Result<Self> {
        let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for (outcome, w) in weights {
            *counts.entry(outcome).or_default() += w;
        }
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("all weights are zero".into()));
        }
        let total = to_i64(total)?;
        let probs = counts
            .into_iter()
            .map(|(o, w)| Ok((o, Rational::new(to_i64(w)?, total))))
            .collect::<Result<_>>()?;
        Self::new(variables, probs)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn probabilities(&self) -> &BTreeMap<Vec<u64>, Rational> {
        &self.probs
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::InvalidDistribution(format!("no variable named {name}")))
    }

    fn indices<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.index_of(n.as_ref())).collect()
    }

    fn marginal_at(&self, idx: &[usize]) -> BTreeMap<Vec<u64>, Rational> {
        let mut out: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
        for (outcome, p) in &self.probs {
            let key = idx.iter().map(|&i| outcome[i]).collect();
            *out.entry(key).or_insert_with(Rational::zero) += p;
        }
        out
    }

    pub fn marginal<S: AsRef<str>>(&self, vars: &[S]) -> Result<DistributionTable> {
        let idx = self.indices(vars)?;
        let variables = idx.iter().map(|&i| self.variables[i].clone()).collect();
        Ok(DistributionTable { variables, probs: self.marginal_at(&idx) })
    }

    /// The law conditioned on the given variables taking the given values.
    /// The conditioning variables stay in the table as constants.
    pub fn condition_on<S: AsRef<str>>(&self, fixed: &[(S, u64)]) -> Result<DistributionTable> {
        let idx: Vec<(usize, u64)> = fixed.iter().map(|(n, x)| Ok((self.index_of(n.as_ref())?, *x))).collect::<Result<_>>()?;
        let kept: BTreeMap<Vec<u64>, Rational> = self
            .probs
            .iter()
            .filter(|(o, _)| idx.iter().all(|&(i, x)| o[i] == x))
            .map(|(o, p)| (o.clone(), *p))
            .collect();
        let mass: Rational = kept.values().sum();
        if mass.is_zero() {
            return Err(Error::InvalidDistribution("conditioning event has probability zero".into()));
        }
        let probs = kept.into_iter().map(|(o, p)| (o, p / mass)).collect();
        Ok(DistributionTable { variables: self.variables.clone(), probs })
    }

    /// Entropy in bits of the marginal on `vars` (zero for no variables).
    pub fn entropy<F: RealScalar, S: AsRef<str>>(&self, vars: &[S]) -> Result<F> {
        let idx = self.indices(vars)?;
        Ok(entropy_of(self.marginal_at(&idx).values()))
    }

    pub fn conditional_entropy<F: RealScalar, S: AsRef<str>>(&self, a: &[S], b: &[S]) -> Result<F> {
        disjoint(&[a, b])?;
        let ab = union(&[a, b]);
        Ok(clamp(self.entropy::<F, _>(&ab)? - self.entropy::<F, _>(b)?))
    }

    pub fn mutual_information<F: RealScalar, S: AsRef<str>>(&self, a: &[S], b: &[S]) -> Result<F> {
        disjoint(&[a, b])?;
        let ab = union(&[a, b]);
        Ok(clamp(self.entropy::<F, _>(a)? + self.entropy::<F, _>(b)? - self.entropy::<F, _>(&ab)?))
    }

    /// `I(A; B | C) = H(AC) + H(BC) - H(ABC) - H(C)`.
    pub fn conditional_mutual_information<F: RealScalar, S: AsRef<str>>(&self, a: &[S], b: &[S], c: &[S]) -> Result<F> {
        disjoint(&[a, b, c])?;
        let ac = union(&[a, c]);
        let bc = union(&[b, c]);
        let abc = union(&[a, b, c]);
        let value = self.entropy::<F, _>(&ac)? + self.entropy::<F, _>(&bc)?
            - self.entropy::<F, _>(&abc)?
            - self.entropy::<F, _>(c)?;
        Ok(clamp(value))
    }

    /// Exact test that the given groups of variables are mutually independent.
    pub fn independent<S: AsRef<str>>(&self, groups: &[Vec<S>]) -> Result<bool> {
        let idx: Vec<Vec<usize>> = groups.iter().map(|g| self.indices(g)).collect::<Result<_>>()?;
        let all: Vec<usize> = idx.iter().flatten().copied().collect();
        let marginals: Vec<BTreeMap<Vec<u64>, Rational>> = idx.iter().map(|g| self.marginal_at(g)).collect();
        let joint = self.marginal_at(&all);
        let expected_support: usize = marginals.iter().map(|m| m.len()).product();
        if joint.len() != expected_support {
            return Ok(false);
        }
        Ok(joint.iter().all(|(outcome, p)| {
            let mut at = 0;
            let product = idx.iter().zip(&marginals).fold(Rational::one(), |acc, (g, m)| {
                let key = outcome[at..at + g.len()].to_vec();
                at += g.len();
                acc * m[&key]
            });
            product == *p
        }))
    }

    /// CSV with a header of `name|alphabet` cells followed by `p`; one row
    /// per outcome with positive probability.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = self.variables.iter().map(|v| format!("{}|{}", v.name, v.alphabet)).collect();
        header.push("p".into());
        w.write_record(&header).map_err(csv_error)?;
        for (outcome, p) in &self.probs {
            let mut row: Vec<String> = outcome.iter().map(u64::to_string).collect();
            row.push(rational::format(p));
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush().map_err(|e| Error::parse("csv", e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers().map_err(csv_error)?.clone();
        let cells: Vec<&str> = header.iter().collect();
        if cells.last() != Some(&"p") {
            return Err(Error::parse("header", "last column must be p"));
        }
        let variables = cells[..cells.len() - 1]
            .iter()
            .enumerate()
            .map(|(i, cell)| {
                let (name, alphabet) =
                    cell.rsplit_once('|').ok_or_else(|| Error::parse(format!("header[{i}]"), "expected name|alphabet"))?;
                let alphabet = alphabet.parse().map_err(|_| Error::parse(format!("header[{i}]"), "alphabet is not an integer"))?;
                Ok(Variable::new(name, alphabet))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut probs = BTreeMap::new();
        for (line, record) in r.records().enumerate() {
            let record = record.map_err(csv_error)?;
            let path = format!("row[{line}]");
            if record.len() != variables.len() + 1 {
                return Err(Error::parse(path, "wrong number of columns"));
            }
            let outcome = record
                .iter()
                .take(variables.len())
                .map(|x| x.parse::<u64>().map_err(|_| Error::parse(path.clone(), format!("value {x:?} is not an integer"))))
                .collect::<Result<Vec<_>>>()?;
            let p = rational::parse_at(&record[variables.len()], &format!("{path}.p"))?;
            if probs.insert(outcome, p).is_some() {
                return Err(Error::parse(path, "duplicate outcome"));
            }
        }
        Self::new(variables, probs)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        Self::read_csv(text.as_bytes())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::parse("csv", e.to_string())
}

fn to_i64(x: u64) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::SizeLimit(format!("weight {x} too large")))
}

fn entropy_of<'a, F: RealScalar>(probs: impl Iterator<Item = &'a Rational>) -> F {
    probs
        .filter(|p| !p.is_zero())
        .map(|p| {
            let x: F = ratio_to_real(p);
            -x * x.log2()
        })
        .fold(F::zero(), |a, b| a + b)
}

fn clamp<F: RealScalar>(x: F) -> F {
    if x < F::zero() {
        F::zero()
    } else {
        x
    }
}

fn disjoint<S: AsRef<str>>(groups: &[&[S]]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for name in groups.iter().flat_map(|g| g.iter()) {
        if !seen.insert(name.as_ref()) {
            return Err(Error::InvalidDistribution(format!("variable {} appears in two arguments", name.as_ref())));
        }
    }
    Ok(())
}

fn union<'a, S: AsRef<str>>(groups: &[&'a [S]]) -> Vec<&'a str> {
    groups.iter().flat_map(|g| g.iter().map(|s| s.as_ref())).collect()
}

/// `h(p) = -p log p - (1-p) log(1-p)` in bits, with `h(0) = h(1) = 0`.
pub fn binary_entropy<F: RealScalar>(p: F) -> Result<F> {
    if !(p >= F::zero() && p <= F::one()) {
        return Err(Error::InvalidDistribution(format!("probability {p:?} outside [0, 1]")));
    }
    let term = |x: F| if x > F::zero() { -x * x.log2() } else { F::zero() };
    Ok(term(p) + term(F::one() - p))
}

/// Fano's bound on `H(M | M-hat)`: `h(p) + p * bits`.
pub fn fano_upper_bound<F: RealScalar>(p_err: F, message_bits: F) -> Result<F> {
    if message_bits.is_nan() || message_bits < F::zero() {
        return Err(Error::InvalidDistribution(format!("negative message size {message_bits:?}")));
    }
    Ok(binary_entropy(p_err)? + p_err * message_bits)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TerminalBoundReport<F> {
    pub entropy_removed: F,
    pub with_link: F,
    pub without_link: F,
    #[serde(with = "rational::text")]
    pub n_delta: Rational,
    pub slack: F,
    pub pass: bool,
}

/// For a message `m` and the inputs `w1, rest` of a terminal, with
/// `H(W1) <= n delta`: checks `I(M; rest) >= I(M; W1, rest) - n delta`.
pub fn terminal_node_bound_check<F: RealScalar, S: AsRef<str>>(
    d: &DistributionTable,
    message: &str,
    removed: &str,
    rest: &[S],
    n_delta: Rational,
    tol: F,
) -> Result<TerminalBoundReport<F>> {
    let nd: F = ratio_to_real(&n_delta);
    let removed_entropy = d.entropy::<F, _>(&[removed])?;
    if removed_entropy > nd + tol {
        return Err(Error::InvalidDistribution(format!(
            "H({removed}) = {removed_entropy:?} exceeds n*delta = {}",
            rational::format(&n_delta)
        )));
    }
    let rest: Vec<&str> = rest.iter().map(|s| s.as_ref()).collect();
    let mut all = vec![removed];
    all.extend(&rest);
    let with_link = d.mutual_information::<F, _>(&[message], &all)?;
    let without_link = d.mutual_information::<F, _>(&[message], &rest)?;
    let slack = without_link - (with_link - nd);
    Ok(TerminalBoundReport {
        entropy_removed: removed_entropy,
        with_link,
        without_link,
        n_delta,
        slack,
        pass: slack >= -tol,
    })
}

/// A random variable of a running code.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Selector {
    Message(SourceId),
    Edge(EdgeId),
    Reconstruction(NodeId, SourceId),
}

impl Selector {
    pub fn name(&self) -> String {
        match self {
            Selector::Message(s) => message_var(s),
            Selector::Edge(e) => edge_var(e),
            Selector::Reconstruction(v, s) => reconstruction_var(v, s),
        }
    }
}

pub fn message_var(s: &str) -> String {
    format!("M:{s}")
}

pub fn edge_var(e: &str) -> String {
    format!("W:{e}")
}

pub fn reconstruction_var(v: &str, s: &str) -> String {
    format!("Mhat:{v}:{s}")
}

/// The joint law of the selected variables when every source not in `fixed`
/// is uniform and independent and the sources in `fixed` take the given
/// messages. Enumerates `2^bits` message tuples on `workers` threads; the
/// table does not depend on the worker count.
pub fn induced_distribution(
    code: &dyn NetworkCode,
    selection: &[Selector],
    fixed: &BTreeMap<SourceId, BitVector>,
    workers: usize,
) -> Result<DistributionTable> {
    let dims = code.dimensions();
    let mut variables = Vec::with_capacity(selection.len());
    for sel in selection {
        let width = match sel {
            Selector::Message(s) => *dims.source_bits.get(s).ok_or_else(|| Error::UnknownSource(s.clone()))?,
            Selector::Edge(e) => *dims.edge_bits.get(e).ok_or_else(|| Error::UnknownEdge(e.clone()))?,
            Selector::Reconstruction(v, s) => {
                if !code.demand().demanded_at(v).contains(s) {
                    return Err(Error::InvalidDemand(format!("node {v} does not demand source {s}")));
                }
                dims.source_bits[s]
            }
        };
        if width > 63 {
            return Err(Error::SizeLimit(format!("{} has {width} bits", sel.name())));
        }
        variables.push(Variable::new(sel.name(), 1u64 << width));
    }
    for (s, m) in fixed {
        match dims.source_bits.get(s) {
            Some(&w) if w == m.len() => {}
            Some(&w) => return Err(Error::Dimension(format!("fixed message for {s} has {} bits, expected {w}", m.len()))),
            None => return Err(Error::UnknownSource(s.clone())),
        }
    }
    let free: Vec<(SourceId, usize)> =
        dims.source_bits.iter().filter(|(s, _)| !fixed.contains_key(*s)).map(|(s, &w)| (s.clone(), w)).collect();
    let bits: usize = free.iter().map(|(_, w)| w).sum();
    if bits > MAX_ENUMERATED_BITS {
        return Err(Error::SizeLimit(format!("{bits} free message bits exceeds {MAX_ENUMERATED_BITS}")));
    }
    let total = 1u64 << bits;
    let count_range = |lo: u64, hi: u64| -> Result<BTreeMap<Vec<u64>, u64>> {
        let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for index in lo..hi {
            let mut messages = fixed.clone();
            let mut at = 0;
            let word = BitVector::from_u64(index, bits);
            for (s, w) in &free {
                messages.insert(s.clone(), word.slice(at, *w));
                at += w;
            }
            let trace = code.run(&messages)?;
            let outcome = selection
                .iter()
                .map(|sel| match sel {
                    Selector::Message(s) => messages[s].to_u64(),
                    Selector::Edge(e) => trace.edges[e].to_u64(),
                    Selector::Reconstruction(v, s) => trace.reconstructions[&(v.clone(), s.clone())].to_u64(),
                })
                .collect();
            *counts.entry(outcome).or_default() += 1;
        }
        Ok(counts)
    };
    let workers = workers.max(1) as u64;
    let chunk = total.div_ceil(workers);
    let parts: Vec<Result<BTreeMap<Vec<u64>, u64>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = (w * chunk).min(total);
                let hi = ((w + 1) * chunk).min(total);
                scope.spawn(move || count_range(lo, hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for part in parts {
        for (o, c) in part? {
            *counts.entry(o).or_default() += c;
        }
    }
    DistributionTable::from_weights(variables, counts)
}

/// All messages of a code's sources set to zero, for the given sources.
pub fn zero_messages<'a>(code: &dyn NetworkCode, sources: impl IntoIterator<Item = &'a SourceId>) -> BTreeMap<SourceId, BitVector> {
    let dims = code.dimensions();
    sources.into_iter().map(|s| (s.clone(), BitVector::zeros(dims.source_bits[s]))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn bits(name: &str, k: u32) -> Variable {
        Variable::new(name, 1 << k)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn entropy_examples() {
        let uniform = DistributionTable::from_weights(vec![bits("x", 2)], (0..4).map(|x| (vec![x], 1))).unwrap();
        assert!(close(uniform.entropy::<f64, _>(&["x"]).unwrap(), 2.0));
        let point = DistributionTable::from_weights(vec![bits("x", 2)], [(vec![3], 5)]).unwrap();
        assert_eq!(point.entropy::<f64, _>(&["x"]).unwrap(), 0.0);
        let skew = DistributionTable::from_weights(vec![bits("x", 2)], [(vec![0], 2), (vec![1], 1), (vec![2], 1)]).unwrap();
        assert!(close(skew.entropy::<f64, _>(&["x"]).unwrap(), 1.5));
        assert!(close(skew.entropy::<f32, _>(&["x"]).unwrap() as f64, 1.5));
    }

    #[test]
    fn validation() {
        let half = Rational::new(1, 2);
        let bad_sum = BTreeMap::from([(vec![0], half)]);
        assert!(DistributionTable::new(vec![bits("x", 1)], bad_sum).is_err());
        let bad_value = BTreeMap::from([(vec![2], Rational::one())]);
        assert!(DistributionTable::new(vec![bits("x", 1)], bad_value).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let indep =
            DistributionTable::from_weights(vec![bits("a", 1), bits("b", 1)], (0..4).map(|x| (vec![x & 1, x >> 1], 1))).unwrap();
        assert!(close(indep.mutual_information::<f64, _>(&["a"], &["b"]).unwrap(), 0.0));
        assert!(indep.independent(&[vec!["a"], vec!["b"]]).unwrap());
        let copy = DistributionTable::from_weights(vec![bits("a", 1), bits("b", 1)], [(vec![0, 0], 1), (vec![1, 1], 1)]).unwrap();
        assert!(close(copy.mutual_information::<f64, _>(&["a"], &["b"]).unwrap(), 1.0));
        assert!(!copy.independent(&[vec!["a"], vec!["b"]]).unwrap());
        assert!(copy.mutual_information::<f64, _>(&["a"], &["a"]).is_err());
    }

    #[test]
    fn markov_chain_has_zero_conditional_information() {
        // A uniform bit, B = A through a flip with prob 1/4, C = B through a flip with prob 1/4.
        let mut w = Vec::new();
        for a in 0..2u64 {
            for b in 0..2u64 {
                for c in 0..2u64 {
                    let wb = if a == b { 3 } else { 1 };
                    let wc = if b == c { 3 } else { 1 };
                    w.push((vec![a, b, c], wb * wc));
                }
            }
        }
        let d = DistributionTable::from_weights(vec![bits("a", 1), bits("b", 1), bits("c", 1)], w).unwrap();
        let i = d.conditional_mutual_information::<f64, _>(&["a"], &["c"], &["b"]).unwrap();
        assert!(i.abs() < 1e-12);
        assert!(d.mutual_information::<f64, _>(&["a"], &["c"]).unwrap() > 0.0);
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5f64).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0f64).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0f64).unwrap(), 0.0);
        let expected = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!(close(binary_entropy(0.25f64).unwrap(), expected));
        assert!((binary_entropy(0.25f64).unwrap() - 0.811_278_124_459_132_9).abs() < 1e-12);
        assert!(binary_entropy(1.5f64).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn fano_examples() {
        assert_eq!(fano_upper_bound(0.0f64, 3.0).unwrap(), 0.0);
        assert_eq!(fano_upper_bound(0.5f64, 2.0).unwrap(), 2.0);
        assert!(fano_upper_bound(-0.1f64, 2.0).is_err());
    }

    #[test]
    fn terminal_bound_examples() {
        // M two uniform bits, W1 = first bit, W2 = second bit.
        let d = DistributionTable::from_weights(
            vec![bits("m", 2), bits("w1", 1), bits("w2", 1)],
            (0..4).map(|m| (vec![m, m & 1, m >> 1], 1)),
        )
        .unwrap();
        let report = terminal_node_bound_check(&d, "m", "w1", &["w2"], Rational::one(), 1e-9f64).unwrap();
        assert!(report.pass);
        assert!(close(report.slack, 0.0));
        assert!(terminal_node_bound_check(&d, "m", "w1", &["w2"], Rational::new(1, 2), 1e-9f64).is_err());

        let constant =
            DistributionTable::from_weights(vec![bits("m", 1), bits("w1", 1), bits("w2", 1)], (0..2).map(|m| (vec![m, 0, m], 1)))
                .unwrap();
        let report = terminal_node_bound_check(&constant, "m", "w1", &["w2"], Rational::one(), 1e-9f64).unwrap();
        assert!(close(report.slack, 1.0));
    }

    #[test]
    fn csv_round_trip() {
        let d = DistributionTable::from_weights(vec![bits("M:1", 1), bits("W:e", 2)], [(vec![0, 3], 1), (vec![1, 2], 3)]).unwrap();
        let text = d.to_csv();
        assert!(text.starts_with("M:1|2,W:e|4,p\n"));
        assert_eq!(DistributionTable::from_csv(&text).unwrap(), d);
        assert!(DistributionTable::from_csv("x|2,p\n0,3/0\n").is_err());
    }

    #[test]
    fn relay_identity_is_diagonal() {
        let code = fixtures::relay_chain_code();
        let sel = [Selector::Message("1".into()), Selector::Reconstruction("v2".into(), "1".into())];
        let d = induced_distribution(&code, &sel, &BTreeMap::new(), 1).unwrap();
        assert_eq!(d.probabilities().len(), 2);
        assert!(d.probabilities().iter().all(|(o, p)| o[0] == o[1] && *p == Rational::new(1, 2)));
    }

    #[test]
    fn xor_edge_is_deterministic() {
        let code = fixtures::butterfly_xor_code();
        let sel = [Selector::Message("1".into()), Selector::Message("2".into()), Selector::Edge("cd".into())];
        for workers in [1, 3] {
            let d = induced_distribution(&code, &sel, &BTreeMap::new(), workers).unwrap();
            assert_eq!(d.probabilities().len(), 4);
            assert!(d.probabilities().keys().all(|o| o[2] == o[0] ^ o[1]));
            let h = d.conditional_entropy::<f64, _>(&["W:cd"], &["M:1", "M:2"]).unwrap();
            assert_eq!(h, 0.0);
        }
    }

    #[test]
    fn fixed_sources_are_constant() {
        let code = fixtures::butterfly_xor_code();
        let fixed = zero_messages(&code, [&"2".to_string()]);
        let sel = [Selector::Message("2".into()), Selector::Edge("cd".into())];
        let d = induced_distribution(&code, &sel, &fixed, 2).unwrap();
        assert_eq!(d.entropy::<f64, _>(&["M:2"]).unwrap(), 0.0);
        assert!(close(d.entropy::<f64, _>(&["W:cd"]).unwrap(), 1.0));
    }
}
