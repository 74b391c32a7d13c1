//! Rate regions given by subset-sum inequalities, the multiple-access and
//! deterministic-broadcast regions of a fixed distribution, and the outer
//! bound for networks split by a relay node.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cutset::{cutset_region, nonempty_subsets};
use crate::info::{message_var, DistributionTable, Variable};
use crate::net::{DemandSpec, Network, SourceId};
use crate::{rational, Error, ExactRegion, Rational, Real, RealRegion, Result, Scalar};

/// Largest dimension for which every subset inequality is materialized.
pub const MAX_DIMENSION: usize = 16;

/// `sum_{i in subset} (r_i - offset_i) <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inequality<T> {
    pub subset: Vec<usize>,
    pub bound: T,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion<T> {
    coordinates: Vec<SourceId>,
    inequalities: Vec<Inequality<T>>,
    offset: Vec<T>,
}

impl<T: Scalar> RateRegion<T> {
    pub fn new(coordinates: Vec<SourceId>, inequalities: Vec<Inequality<T>>, offset: Vec<T>) -> Result<Self> {
        let k = coordinates.len();
        if offset.len() != k {
            return Err(Error::Dimension(format!("offset has {} entries for dimension {k}", offset.len())));
        }
        for q in &inequalities {
            if q.bound < T::zero() {
                return Err(Error::InvalidDistribution(format!("negative bound in {}", q.label)));
            }
            if let Some(i) = q.subset.iter().find(|&&i| i >= k) {
                return Err(Error::Dimension(format!("coordinate {i} out of range in {}", q.label)));
            }
        }
        Ok(RateRegion { coordinates, inequalities, offset })
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[SourceId] {
        &self.coordinates
    }

    pub fn inequalities(&self) -> &[Inequality<T>] {
        &self.inequalities
    }

    pub fn offset(&self) -> &[T] {
        &self.offset
    }

    /// `bound - sum_{subset}(r - offset)` for every inequality.
    pub fn margins(&self, r: &[T]) -> Result<Vec<T>> {
        self.check_dimension(r.len())?;
        Ok(self
            .inequalities
            .iter()
            .map(|q| q.subset.iter().fold(q.bound, |acc, &i| acc - (r[i] - self.offset[i])))
            .collect())
    }

    /// Linear membership with slack `tol`; no clamping of `r - offset`.
    pub fn contains(&self, r: &[T], tol: T) -> Result<bool> {
        Ok(self.margins(r)?.into_iter().all(|m| m >= -tol))
    }

    /// Adds `delta` to every offset coordinate.
    pub fn shift(&self, delta: T) -> RateRegion<T> {
        RateRegion { offset: self.offset.iter().map(|&o| o + delta).collect(), ..self.clone() }
    }

    /// Both inequality lists; offsets must agree.
    pub fn intersect(&self, other: &RateRegion<T>) -> Result<RateRegion<T>> {
        if self.coordinates != other.coordinates {
            return Err(Error::Dimension(format!("coordinates {:?} and {:?} differ", self.coordinates, other.coordinates)));
        }
        if self.offset != other.offset {
            return Err(Error::Dimension("cannot intersect regions with different offsets".into()));
        }
        let mut inequalities = self.inequalities.clone();
        inequalities.extend(other.inequalities.iter().cloned());
        Ok(RateRegion { inequalities, ..self.clone() })
    }

    fn check_dimension(&self, len: usize) -> Result<()> {
        if len != self.dimension() {
            return Err(Error::Dimension(format!("{len} coordinates for a region of dimension {}", self.dimension())));
        }
        Ok(())
    }
}

/// Scalars that have a JSON form inside region documents.
pub trait RegionScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(value: &Value, path: &str) -> Result<Self>;
}

impl RegionScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(rational::format(self))
    }

    fn from_json(value: &Value, path: &str) -> Result<Self> {
        match value {
            Value::String(s) => rational::parse_at(s, path),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or_default())),
            _ => Err(Error::parse(path, "expected a rational string")),
        }
    }
}

impl RegionScalar for Real {
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }

    fn from_json(value: &Value, path: &str) -> Result<Self> {
        value.as_f64().ok_or_else(|| Error::parse(path, "expected a number"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityDoc {
    pub subset: Vec<SourceId>,
    pub bound: Value,
    pub label: String,
}

/// JSON form: subsets are written as coordinate names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionDoc {
    pub dimension: usize,
    pub coordinates: Vec<SourceId>,
    pub offset: Vec<Value>,
    pub inequalities: Vec<InequalityDoc>,
}

impl<T: RegionScalar> RateRegion<T> {
    pub fn to_doc(&self) -> RegionDoc {
        RegionDoc {
            dimension: self.dimension(),
            coordinates: self.coordinates.clone(),
            offset: self.offset.iter().map(RegionScalar::to_json).collect(),
            inequalities: self
                .inequalities
                .iter()
                .map(|q| InequalityDoc {
                    subset: q.subset.iter().map(|&i| self.coordinates[i].clone()).collect(),
                    bound: q.bound.to_json(),
                    label: q.label.clone(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &RegionDoc) -> Result<Self> {
        if doc.dimension != doc.coordinates.len() {
            return Err(Error::parse("dimension", format!("{} coordinates listed", doc.coordinates.len())));
        }
        let index: BTreeMap<&str, usize> = doc.coordinates.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let offset = doc
            .offset
            .iter()
            .enumerate()
            .map(|(i, v)| T::from_json(v, &format!("offset[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let inequalities = doc
            .inequalities
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let subset = q
                    .subset
                    .iter()
                    .map(|c| index.get(c.as_str()).copied().ok_or_else(|| Error::parse(format!("inequalities[{i}].subset"), format!("unknown coordinate {c}"))))
                    .collect::<Result<Vec<_>>>()?;
                let bound = T::from_json(&q.bound, &format!("inequalities[{i}].bound"))?;
                Ok(Inequality { subset, bound, label: q.label.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        RateRegion::new(doc.coordinates.clone(), inequalities, offset)
    }
}

fn subset_label(prefix: &str, names: &[&SourceId]) -> String {
    format!("{prefix}{{{}}}", names.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","))
}

fn check_k(k: usize) -> Result<()> {
    if k > MAX_DIMENSION {
        return Err(Error::SizeLimit(format!("dimension {k} exceeds {MAX_DIMENSION}")));
    }
    Ok(())
}

/// `sum_{s in A} r_s <= I(M_A; W | M_{A^c})` for every nonempty `A`, at the
/// given distribution. Message variables are named `M:<source>`; `observed`
/// lists the variables making up the receiver's observation `W`.
pub fn mac_region_from_code<S: AsRef<str>>(d: &DistributionTable, sources: &[SourceId], observed: &[S]) -> Result<RealRegion> {
    check_k(sources.len())?;
    let names: Vec<String> = sources.iter().map(|s| message_var(s)).collect();
    let groups: Vec<Vec<&str>> = names.iter().map(|n| vec![n.as_str()]).collect();
    if !d.independent(&groups)? {
        return Err(Error::InvalidDistribution("messages are not independent".into()));
    }
    let w: Vec<&str> = observed.iter().map(|s| s.as_ref()).collect();
    let idx: Vec<usize> = (0..sources.len()).collect();
    let mut inequalities = Vec::new();
    for subset in nonempty_subsets(&idx) {
        let a: Vec<&str> = subset.iter().map(|&i| names[i].as_str()).collect();
        let rest: Vec<&str> = idx.iter().filter(|i| !subset.contains(i)).map(|&i| names[i].as_str()).collect();
        let bound = d.conditional_mutual_information::<Real, _>(&a, &w, &rest)?;
        let members: Vec<&SourceId> = subset.iter().map(|&i| &sources[i]).collect();
        inequalities.push(Inequality { subset: subset.into_iter().collect(), bound, label: subset_label("mac ", &members) });
    }
    RateRegion::new(sources.to_vec(), inequalities, vec![0.0; sources.len()])
}

/// `(I(M_1; W), ..., I(M_k; W))`.
pub fn r_mac_vector<S: AsRef<str>>(d: &DistributionTable, sources: &[SourceId], observed: &[S]) -> Result<Vec<Real>> {
    sources.iter().map(|s| d.mutual_information::<Real, _>(&[message_var(s).as_str()], &observed.iter().map(|o| o.as_ref()).collect::<Vec<_>>())).collect()
}

/// One sender, `k` receivers; receiver `s` sees `functions[s][x]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeterministicBC {
    pub receivers: Vec<SourceId>,
    pub input_size: u64,
    pub functions: Vec<Vec<u64>>,
    #[serde(with = "rational::text_vec")]
    pub input_distribution: Vec<Rational>,
}

impl DeterministicBC {
    pub fn new(receivers: Vec<SourceId>, functions: Vec<Vec<u64>>, input_distribution: Vec<Rational>) -> Result<Self> {
        let input_size = input_distribution.len() as u64;
        if receivers.len() != functions.len() {
            return Err(Error::Dimension(format!("{} receivers, {} functions", receivers.len(), functions.len())));
        }
        if let Some((s, _)) = receivers.iter().zip(&functions).find(|(_, f)| f.len() as u64 != input_size) {
            return Err(Error::Dimension(format!("function of receiver {s} is not defined on all {input_size} inputs")));
        }
        if input_distribution.iter().any(|p| *p < Rational::zero()) || input_distribution.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidDistribution("input distribution must be nonnegative and sum to 1".into()));
        }
        Ok(DeterministicBC { receivers, input_size, functions, input_distribution })
    }

    pub fn with_distribution(&self, p: Vec<Rational>) -> Result<Self> {
        DeterministicBC::new(self.receivers.clone(), self.functions.clone(), p)
    }

    /// Joint law of the outputs, one variable per receiver.
    pub fn output_distribution(&self) -> Result<DistributionTable> {
        let variables = self
            .receivers
            .iter()
            .zip(&self.functions)
            .map(|(s, f)| Variable::new(format!("Y:{s}"), f.iter().max().map_or(1, |m| m + 1)))
            .collect();
        let mut probs: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
        for (x, p) in self.input_distribution.iter().enumerate() {
            let y = self.functions.iter().map(|f| f[x]).collect();
            *probs.entry(y).or_insert_with(Rational::zero) += p;
        }
        DistributionTable::new(variables, probs)
    }
}

/// `sum_{s in A} r_s <= H(Y_A)` for every nonempty `A`, at the channel's
/// input distribution.
pub fn dbc_region(bc: &DeterministicBC) -> Result<RealRegion> {
    let k = bc.receivers.len();
    check_k(k)?;
    let d = bc.output_distribution()?;
    let names: Vec<String> = bc.receivers.iter().map(|s| format!("Y:{s}")).collect();
    let idx: Vec<usize> = (0..k).collect();
    let mut inequalities = Vec::new();
    for subset in nonempty_subsets(&idx) {
        let vars: Vec<&str> = subset.iter().map(|&i| names[i].as_str()).collect();
        let bound = d.entropy::<Real, _>(&vars)?;
        let members: Vec<&SourceId> = subset.iter().map(|&i| &bc.receivers[i]).collect();
        inequalities.push(Inequality { subset: subset.into_iter().collect(), bound, label: subset_label("H(Y) ", &members) });
    }
    RateRegion::new(bc.receivers.clone(), inequalities, vec![0.0; k])
}

/// Whether `r` lies in the region of `bc` for at least one candidate input
/// distribution; returns the first such candidate.
pub fn dbc_contains_any(bc: &DeterministicBC, candidates: &[Vec<Rational>], r: &[Real], tol: Real) -> Result<Option<usize>> {
    for (i, p) in candidates.iter().enumerate() {
        if dbc_region(&bc.with_distribution(p.clone())?)?.contains(r, tol)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Every distribution on `size` points with probabilities in `{0, 1/q, ..., 1}`.
pub fn grid_distributions(size: usize, q: i64) -> Vec<Vec<Rational>> {
    fn fill(rest: i64, slots: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=rest {
            prefix.push(x);
            fill(rest - x, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    if size == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    fill(q, size, &mut Vec::new(), &mut out);
    out.into_iter().map(|w| w.into_iter().map(|x| Rational::new(x, q)).collect()).collect()
}

pub fn uniform_distribution(size: usize) -> Vec<Rational> {
    vec![Rational::new(1, size as i64); size]
}

/// Outer bound for a k-unicast network in which node `a` and edge `e`
/// separate the sources from the sinks. With `N'` the network without `e`
/// and `delta = C_e`:
///
/// * `R1`: cut-set region of sending every source to `a` in `N'`;
/// * `R2`: cut-set region of the original demands in `N'` with every source
///   moved to `a`;
///
/// and the bound is `R1 ∩ R2` shifted by `delta`.
pub fn corollary_outer_bound(net: &Network, demand: &DemandSpec, a: &str, e: &str) -> Result<ExactRegion> {
    let delta = net.edge(e)?.capacity;
    let reduced = net.reduce_edge(e, delta)?;
    let ids = demand.source_ids();
    let to_a = demand.with_demands(BTreeMap::from([(a.to_string(), ids.iter().cloned().collect())]))?;
    let r1 = cutset_region(&reduced, &to_a).map_err(|err| Error::Structure(format!("multicast part: {err}")))?;
    let from_a = demand.with_sources_at(a)?;
    let r2 = cutset_region(&reduced, &from_a).map_err(|err| Error::Structure(format!("broadcast part: {err}")))?;
    Ok(r1.to_region().intersect(&r2.to_region())?.shift(delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::{induced_distribution, Selector};
    use crate::{fixtures, TOLERANCE};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn two_bits(w: impl Fn(u64, u64) -> u64, w_alphabet: u64) -> DistributionTable {
        DistributionTable::from_weights(
            vec![Variable::new("M:1", 2), Variable::new("M:2", 2), Variable::new("W", w_alphabet)],
            (0..4).map(|m| (vec![m & 1, m >> 1, w(m & 1, m >> 1)], 1)),
        )
        .unwrap()
    }

    fn bounds(region: &RealRegion) -> Vec<f64> {
        region.inequalities().iter().map(|q| q.bound).collect()
    }

    fn ids() -> Vec<SourceId> {
        vec!["1".into(), "2".into()]
    }

    #[test]
    fn mac_examples() {
        let both = two_bits(|a, b| a | b << 1, 4);
        let region = mac_region_from_code(&both, &ids(), &["W"]).unwrap();
        assert_eq!(bounds(&region), vec![1.0, 1.0, 2.0]);
        assert_eq!(r_mac_vector(&both, &ids(), &["W"]).unwrap(), vec![1.0, 1.0]);

        let xor = two_bits(|a, b| a ^ b, 2);
        let region = mac_region_from_code(&xor, &ids(), &["W"]).unwrap();
        let b = bounds(&region);
        assert!((b[0] - 1.0).abs() < 1e-12 && (b[1] - 1.0).abs() < 1e-12 && (b[2] - 1.0).abs() < 1e-12);
        let r = r_mac_vector(&xor, &ids(), &["W"]).unwrap();
        assert!(r.iter().all(|x| x.abs() < 1e-12));
        assert!(region.contains(&r, TOLERANCE).unwrap());

        let constant = two_bits(|_, _| 0, 1);
        let region = mac_region_from_code(&constant, &ids(), &["W"]).unwrap();
        assert!(bounds(&region).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn mac_rejects_dependent_messages() {
        let d = DistributionTable::from_weights(
            vec![Variable::new("M:1", 2), Variable::new("M:2", 2), Variable::new("W", 2)],
            [(vec![0, 0, 0], 1), (vec![1, 1, 1], 1)],
        )
        .unwrap();
        assert!(mac_region_from_code(&d, &ids(), &["W"]).is_err());
    }

    #[test]
    fn mac_region_of_a_code() {
        let code = fixtures::butterfly_bypass_code();
        let sel = [Selector::Message("1".into()), Selector::Message("2".into()), Selector::Edge("v1a".into()), Selector::Edge("v2a".into())];
        let d = induced_distribution(&code, &sel, &BTreeMap::new(), 1).unwrap();
        let region = mac_region_from_code(&d, &ids(), &["W:v1a", "W:v2a"]).unwrap();
        let r = r_mac_vector(&d, &ids(), &["W:v1a", "W:v2a"]).unwrap();
        assert_eq!(r, vec![1.0, 1.0]);
        assert!(region.contains(&r, TOLERANCE).unwrap());
    }

    #[test]
    fn dbc_examples() {
        let same = DeterministicBC::new(ids(), vec![vec![0, 1], vec![0, 1]], uniform_distribution(2)).unwrap();
        let region = dbc_region(&same).unwrap();
        assert_eq!(bounds(&region), vec![1.0, 1.0, 1.0]);
        assert!(region.contains(&[0.0, 0.0], 0.0).unwrap());
        assert!(!region.contains(&[1.0, 1.0], TOLERANCE).unwrap());

        let split = DeterministicBC::new(ids(), vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]], uniform_distribution(4)).unwrap();
        assert_eq!(bounds(&dbc_region(&split).unwrap()), vec![1.0, 1.0, 2.0]);
        assert!(DeterministicBC::new(ids(), vec![vec![0], vec![0, 1]], uniform_distribution(2)).is_err());
    }

    #[test]
    fn grid_candidates() {
        assert_eq!(grid_distributions(2, 4).len(), 5);
        assert_eq!(grid_distributions(8, 4).len(), 330);
        assert!(grid_distributions(3, 4).iter().all(|p| p.iter().sum::<Rational>() == Rational::one()));
        let split = DeterministicBC::new(ids(), vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]], uniform_distribution(4)).unwrap();
        let found = dbc_contains_any(&split, &grid_distributions(4, 4), &[1.0, 1.0], TOLERANCE).unwrap();
        assert!(found.is_some());
    }

    #[test]
    fn shift_and_intersect() {
        let a = RateRegion::new(ids(), vec![Inequality { subset: vec![0], bound: q(1, 1), label: "a".into() }], vec![q(0, 1); 2]).unwrap();
        let b = RateRegion::new(ids(), vec![Inequality { subset: vec![0, 1], bound: q(3, 2), label: "b".into() }], vec![q(0, 1); 2]).unwrap();
        let both = a.intersect(&b).unwrap();
        for r in [[q(1, 1), q(1, 2)], [q(1, 1), q(1, 1)], [q(0, 1), q(3, 2)]] {
            let expect = a.contains(&r, Rational::zero()).unwrap() && b.contains(&r, Rational::zero()).unwrap();
            assert_eq!(both.contains(&r, Rational::zero()).unwrap(), expect);
        }
        let zero = a.shift(Rational::zero());
        assert_eq!(zero, a);
        let shifted = a.shift(q(1, 2));
        assert!(shifted.contains(&[q(3, 2), q(-5, 1)], Rational::zero()).unwrap());
        assert!(!shifted.contains(&[q(2, 1), q(0, 1)], Rational::zero()).unwrap());
        assert!(a.contains(&[q(1, 1)], Rational::zero()).is_err());
    }

    #[test]
    fn region_json_round_trip() {
        let a = RateRegion::new(ids(), vec![Inequality { subset: vec![0, 1], bound: q(3, 2), label: "sum".into() }], vec![q(1, 2); 2]).unwrap();
        let doc = a.to_doc();
        assert_eq!(doc.inequalities[0].subset, ids());
        let text = serde_json::to_string(&doc).unwrap();
        let back: RegionDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(ExactRegion::from_doc(&back).unwrap(), a);
    }

    #[test]
    fn corollary_examples() {
        let (net, demand) = fixtures::direct_relay();
        let half = net.reduce_edge("e", q(1, 2)).unwrap();
        let region = corollary_outer_bound(&half, &demand, "a", "e").unwrap();
        assert!(region.contains(&[q(3, 2), q(3, 2)], Rational::zero()).unwrap());
        assert!(!region.contains(&[q(2, 1), q(1, 1)], Rational::zero()).unwrap());

        let (net, demand) = fixtures::zero_bypass();
        let region = corollary_outer_bound(&net, &demand, "a", "e").unwrap();
        assert!(region.offset().iter().all(|o| o.is_zero()));
        assert!(region.contains(&[q(1, 1)], Rational::zero()).unwrap());
        assert!(!region.contains(&[q(3, 2)], Rational::zero()).unwrap());
    }
}
