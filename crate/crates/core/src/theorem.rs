//! Evaluates, on a concrete code, each inequality of the argument that a
//! k-unicast network separated by a relay node `a` and an edge `e` loses at
//! most `delta = C_e` per source when `e` is removed.
//!
//! The pipeline works on the joint law of the messages, the inputs `W_i` and
//! outputs `W_o` of `a`, the word `W_e` on `e`, and the reconstructions:
//!
//! 1. `r_mac = (I(M_s; W_i))_s` lies in the MAC region of `W_i`, and each
//!    `I(M_s; W_i) >= n(R_s - delta) - n R_s eps - eps`;
//! 2. some `w_e` has `H(M-hat | W_e = w_e) >= H(M-hat | W_e)`, which is at
//!    least `(1 - eps) n sum R_s - k eps - n delta`;
//! 3. given `W_e = w_e` the reconstructions are functions of `W_o`, a
//!    deterministic broadcast channel whose region contains `n(R - delta)^+`.
//!
//! Sources with `R_s <= delta` are fixed to the zero message first; the sums
//! above run over the remaining ones.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;
use serde::Serialize;

use crate::code::NetworkCode;
use crate::cutset::nonempty_subsets;
use crate::info::{binary_entropy, edge_var, induced_distribution, message_var, reconstruction_var, zero_messages, DistributionTable, Selector};
use crate::net::{DemandSpec, EdgeId, Network, NodeId, SourceId};
use crate::region::{dbc_region, mac_region_from_code, r_mac_vector, DeterministicBC};
use crate::scalar::ratio_to_real;
use crate::{rational, Error, Rational, Real, Result, TOLERANCE};

/// Ties in `choose_w_e` are broken towards the smaller value unless the
/// larger one wins by more than this.
const TIE: Real = 1e-12;

/// True iff no source node reaches a sink node once node `a` and edge `e`
/// are deleted.
pub fn check_structure(net: &Network, demand: &DemandSpec, a: &str, e: &str) -> Result<bool> {
    if !net.has_node(a) {
        return Err(Error::UnknownNode(a.to_string()));
    }
    net.edge(e)?;
    let sinks: BTreeSet<NodeId> = demand.sinks().into_iter().collect();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut queue: VecDeque<&str> = demand.sources().iter().map(|s| s.node.as_str()).filter(|&v| v != a).collect();
    while let Some(v) = queue.pop_front() {
        if !seen.insert(v) {
            continue;
        }
        if sinks.contains(v) {
            return Ok(false);
        }
        for edge in net.out_edges(v) {
            if edge.id != e && edge.to != a {
                queue.push_back(&edge.to);
            }
        }
    }
    Ok(true)
}

/// The sink of every source in a k-unicast demand: distinct source nodes,
/// each source wanted by exactly one sink and each sink wanting one source.
pub fn unicast_sinks(demand: &DemandSpec) -> Result<BTreeMap<SourceId, NodeId>> {
    let nodes: BTreeSet<&NodeId> = demand.sources().iter().map(|s| &s.node).collect();
    if nodes.len() != demand.sources().len() {
        return Err(Error::UnsupportedDemand("k-unicast needs one source per source node".into()));
    }
    let mut sinks = BTreeMap::new();
    for (v, wanted) in demand.demands() {
        if wanted.len() != 1 {
            return Err(Error::UnsupportedDemand(format!("sink {v} demands {} sources", wanted.len())));
        }
        let s = wanted.iter().next().expect("one element");
        if sinks.insert(s.clone(), v.clone()).is_some() {
            return Err(Error::UnsupportedDemand(format!("source {s} is demanded twice")));
        }
    }
    if let Some(s) = demand.sources().iter().find(|s| !sinks.contains_key(&s.id)) {
        return Err(Error::UnsupportedDemand(format!("source {} is not demanded", s.id)));
    }
    Ok(sinks)
}

/// The joint law and bookkeeping shared by the pipeline steps.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub n: u32,
    pub delta: Rational,
    pub rates: BTreeMap<SourceId, Rational>,
    pub sinks: BTreeMap<SourceId, NodeId>,
    pub active: Vec<SourceId>,
    pub degenerate: Vec<SourceId>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub edge: String,
    pub error_probabilities: BTreeMap<SourceId, Rational>,
    pub epsilon: Real,
    pub table: DistributionTable,
}

impl Prepared {
    fn n_real(&self) -> Real {
        self.n as Real
    }

    fn delta_real(&self) -> Real {
        ratio_to_real(&self.delta)
    }

    fn rate(&self, s: &str) -> Real {
        ratio_to_real(&self.rates[s])
    }

    fn reconstructions(&self) -> Vec<String> {
        self.sinks.iter().map(|(s, v)| reconstruction_var(v, s)).collect()
    }

    /// `sum_{active} n R_s`.
    fn active_bits(&self) -> Real {
        self.active.iter().map(|s| self.n_real() * self.rate(s)).sum()
    }
}

pub fn prepare(code: &dyn NetworkCode, a: &str, e: &str, workers: usize) -> Result<Prepared> {
    let net = code.network();
    let demand = code.demand();
    if !check_structure(net, demand, a, e)? {
        return Err(Error::Structure(format!("a source reaches a sink without passing node {a} or edge {e}")));
    }
    let sinks = unicast_sinks(demand)?;
    let delta = net.edge(e)?.capacity;
    let rates: BTreeMap<SourceId, Rational> = demand.sources().iter().map(|s| (s.id.clone(), s.rate)).collect();
    let (degenerate, active): (Vec<SourceId>, Vec<SourceId>) = rates.keys().cloned().partition(|s| rates[s] <= delta);
    let fixed = zero_messages(code, &degenerate);

    let mut selection: Vec<Selector> = Vec::new();
    let mut push = |sel: Selector| {
        if !selection.contains(&sel) {
            selection.push(sel);
        }
    };
    for s in rates.keys() {
        push(Selector::Message(s.clone()));
    }
    let in_edges: Vec<EdgeId> = net.in_edges(a).into_iter().map(|x| x.id.clone()).collect();
    let out_edges: Vec<EdgeId> = net.out_edges(a).into_iter().map(|x| x.id.clone()).collect();
    for x in in_edges.iter().chain(&out_edges).chain([&e.to_string()]) {
        push(Selector::Edge(x.clone()));
    }
    for (s, v) in &sinks {
        push(Selector::Reconstruction(v.clone(), s.clone()));
    }
    let table = induced_distribution(code, &selection, &fixed, workers)?;

    let mut error_probabilities = BTreeMap::new();
    for (s, v) in &sinks {
        let (m, mhat) = (table.index_of(&message_var(s))?, table.index_of(&reconstruction_var(v, s))?);
        let p: Rational = table.probabilities().iter().filter(|(o, _)| o[m] != o[mhat]).map(|(_, p)| *p).sum();
        error_probabilities.insert(s.clone(), p);
    }
    let epsilon = error_probabilities
        .values()
        .map(|p| {
            let x: Real = ratio_to_real(p);
            x.max(binary_entropy(x).expect("probability in range"))
        })
        .fold(0.0, Real::max);

    Ok(Prepared {
        n: code.blocklength(),
        delta,
        rates,
        sinks,
        active,
        degenerate,
        inputs: in_edges.iter().map(|x| edge_var(x)).collect(),
        outputs: out_edges.iter().map(|x| edge_var(x)).collect(),
        edge: edge_var(e),
        error_probabilities,
        epsilon,
        table,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceBound {
    pub source: SourceId,
    pub value: Real,
    pub lower_bound: Real,
    pub margin: Real,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MacStepReport {
    pub sources: Vec<SourceId>,
    pub r_mac: Vec<Real>,
    pub region_margins: Vec<Real>,
    pub r_mac_in_region: bool,
    pub per_source: Vec<SourceBound>,
    pub pass: bool,
}

pub fn verify_mac_step(p: &Prepared) -> Result<MacStepReport> {
    let region = mac_region_from_code(&p.table, &p.active, &p.inputs)?;
    let r_mac = r_mac_vector(&p.table, &p.active, &p.inputs)?;
    let region_margins = region.margins(&r_mac)?;
    let r_mac_in_region = region_margins.iter().all(|&m| m >= -TOLERANCE);
    let (n, delta, eps) = (p.n_real(), p.delta_real(), p.epsilon);
    let per_source: Vec<SourceBound> = p
        .active
        .iter()
        .zip(&r_mac)
        .map(|(s, &value)| {
            let rate = p.rate(s);
            let lower_bound = n * (rate - delta) - n * rate * eps - eps;
            let margin = value - lower_bound;
            SourceBound { source: s.clone(), value, lower_bound, margin, pass: margin >= -TOLERANCE }
        })
        .collect();
    let pass = r_mac_in_region && per_source.iter().all(|b| b.pass);
    Ok(MacStepReport { sources: p.active.clone(), r_mac, region_margins, r_mac_in_region, per_source, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeChoice {
    pub value: u64,
    pub entropy: Real,
    pub average: Real,
}

/// The value of `w_e` maximizing `H(M-hat | W_e = w_e)`, the smallest one
/// among ties, together with the average `H(M-hat | W_e)`.
pub fn choose_w_e<S: AsRef<str>>(d: &DistributionTable, w_e: &str, reconstructions: &[S]) -> Result<WeChoice> {
    let at = d.index_of(w_e)?;
    let values: BTreeMap<u64, Rational> = d.probabilities().iter().fold(BTreeMap::new(), |mut acc, (o, p)| {
        *acc.entry(o[at]).or_insert_with(Rational::zero) += p;
        acc
    });
    let mut best: Option<(u64, Real)> = None;
    let mut average = 0.0;
    for (&w, p) in &values {
        let h = d.condition_on(&[(w_e, w)])?.entropy::<Real, _>(reconstructions)?;
        average += ratio_to_real::<Real>(p) * h;
        if best.is_none_or(|(_, b)| h > b + TIE) {
            best = Some((w, h));
        }
    }
    let (value, entropy) = best.ok_or_else(|| Error::InvalidDistribution("empty table".into()))?;
    Ok(WeChoice { value, entropy, average })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SubsetCheck {
    pub subset: Vec<SourceId>,
    pub entropy: Real,
    pub target: Real,
    pub membership_margin: Real,
    pub chain_bound: Real,
    pub chain_margin: Real,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BcStepReport {
    pub w_e: u64,
    pub input_size: u64,
    pub target: Vec<Real>,
    pub subsets: Vec<SubsetCheck>,
    pub pass: bool,
}

/// Builds the broadcast channel from `W_o` to the reconstructions given
/// `W_e = w_e` and checks `n(R - delta)^+` against its region. The chain
/// bound for a subset `A` is
/// `n sum_{A, active} R_s - n sum_{A^c, degenerate} R_s - n eps sum_{active} R_s - k eps - n delta`.
pub fn verify_bc_step(p: &Prepared, w_e: u64) -> Result<BcStepReport> {
    let given = p.table.condition_on(&[(p.edge.as_str(), w_e)])?;
    let out_idx: Vec<usize> = p.outputs.iter().map(|o| given.index_of(o)).collect::<Result<_>>()?;
    let sources: Vec<SourceId> = p.sinks.keys().cloned().collect();
    let rec_idx: Vec<usize> = p.reconstructions().iter().map(|r| given.index_of(r)).collect::<Result<_>>()?;

    let mut inputs: BTreeMap<Vec<u64>, (Rational, Vec<u64>)> = BTreeMap::new();
    for (o, prob) in given.probabilities() {
        let x: Vec<u64> = out_idx.iter().map(|&i| o[i]).collect();
        let y: Vec<u64> = rec_idx.iter().map(|&i| o[i]).collect();
        let entry = inputs.entry(x).or_insert_with(|| (Rational::zero(), y.clone()));
        if entry.1 != y {
            return Err(Error::InvalidCode("reconstructions are not determined by the relay outputs".into()));
        }
        entry.0 += prob;
    }
    let functions: Vec<Vec<u64>> = (0..sources.len()).map(|j| inputs.values().map(|(_, y)| y[j]).collect()).collect();
    let dist: Vec<Rational> = inputs.values().map(|(q, _)| *q).collect();
    let bc = DeterministicBC::new(sources.clone(), functions, dist)?;
    let region = dbc_region(&bc)?;

    let (n, delta, eps) = (p.n_real(), p.delta_real(), p.epsilon);
    let k = p.active.len() as Real;
    let target: Vec<Real> = sources.iter().map(|s| (n * (p.rate(s) - delta)).max(0.0)).collect();
    let margins = region.margins(&target)?;
    let idx: Vec<usize> = (0..sources.len()).collect();
    let subsets = nonempty_subsets(&idx)
        .into_iter()
        .zip(region.inequalities().iter().zip(margins))
        .map(|(subset, (q, membership_margin))| {
            let inside: Real = subset.iter().filter(|&&i| p.active.contains(&sources[i])).map(|&i| n * p.rate(&sources[i])).sum();
            let outside: Real =
                idx.iter().filter(|i| !subset.contains(i) && p.degenerate.contains(&sources[**i])).map(|&i| n * p.rate(&sources[i])).sum();
            let chain_bound = inside - outside - eps * p.active_bits() - k * eps - n * delta;
            let chain_margin = q.bound - chain_bound;
            SubsetCheck {
                subset: subset.iter().map(|&i| sources[i].clone()).collect(),
                entropy: q.bound,
                target: subset.iter().map(|&i| target[i]).sum(),
                membership_margin,
                chain_bound,
                chain_margin,
                pass: membership_margin >= -TOLERANCE && chain_margin >= -TOLERANCE,
            }
        })
        .collect::<Vec<_>>();
    let pass = subsets.iter().all(|c| c.pass);
    Ok(BcStepReport { w_e, input_size: bc.input_size, target, subsets, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeStepReport {
    pub choice: WeChoice,
    pub lower_bound: Real,
    pub margin_over_average: Real,
    pub margin_over_bound: Real,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremReport {
    pub relay: NodeId,
    pub edge: EdgeId,
    pub blocklength: u32,
    #[serde(with = "rational::text")]
    pub delta: Rational,
    pub degenerate_sources: Vec<SourceId>,
    pub error_probabilities: BTreeMap<SourceId, String>,
    pub epsilon: Real,
    pub mac: MacStepReport,
    pub w_e: WeStepReport,
    pub bc: BcStepReport,
    pub pass: bool,
}

pub fn verify_w_e_step(p: &Prepared) -> Result<WeStepReport> {
    let choice = choose_w_e(&p.table, &p.edge, &p.reconstructions())?;
    let (n, delta, eps) = (p.n_real(), p.delta_real(), p.epsilon);
    let lower_bound = (1.0 - eps) * p.active_bits() - p.active.len() as Real * eps - n * delta;
    let margin_over_average = choice.entropy - choice.average;
    let margin_over_bound = choice.entropy - lower_bound;
    let pass = margin_over_average >= -TOLERANCE && margin_over_bound >= -TOLERANCE;
    Ok(WeStepReport { choice, lower_bound, margin_over_average, margin_over_bound, pass })
}

pub fn verify_theorem(code: &dyn NetworkCode, a: &str, e: &str, workers: usize) -> Result<TheoremReport> {
    let p = prepare(code, a, e, workers)?;
    let mac = verify_mac_step(&p)?;
    let w_e = verify_w_e_step(&p)?;
    let bc = verify_bc_step(&p, w_e.choice.value)?;
    let pass = mac.pass && w_e.pass && bc.pass;
    Ok(TheoremReport {
        relay: a.to_string(),
        edge: e.to_string(),
        blocklength: p.n,
        delta: p.delta,
        degenerate_sources: p.degenerate.clone(),
        error_probabilities: p.error_probabilities.iter().map(|(s, q)| (s.clone(), rational::format(q))).collect(),
        epsilon: p.epsilon,
        mac,
        w_e,
        bc,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::LinearNetworkCode;
    use crate::fixtures;
    use crate::gf2::Gf2Matrix;
    use crate::info::Variable;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn structure_examples() {
        for (net, demand, a, e) in fixtures::relay_instances() {
            assert!(check_structure(&net, &demand, a, e).unwrap(), "{}", net.name());
        }
        let (net, demand) = fixtures::butterfly_bypass();
        let mut edges = net.edges().to_vec();
        edges.push(crate::net::Edge::new("leak", "v1", "v3", r(1)));
        let extra = net.with_edges(edges).unwrap();
        assert!(!check_structure(&extra, &demand, "a", "e").unwrap());
        assert!(!check_structure(&net, &demand, "a", "ab").unwrap());
        assert!(check_structure(&net, &demand, "nope", "e").is_err());
        assert!(check_structure(&net, &demand, "a", "nope").is_err());
    }

    #[test]
    fn bypass_code_passes() {
        let code = fixtures::butterfly_bypass_code();
        let report = verify_theorem(&code, "a", "e", 2).unwrap();
        assert!(report.pass, "{report:#?}");
        assert_eq!(report.epsilon, 0.0);
        // both rates equal delta = 1, so both sources are fixed
        assert_eq!(report.degenerate_sources, vec!["1".to_string(), "2".to_string()]);
    }

    #[test]
    fn zero_bypass_is_tight() {
        let (net, demand) = fixtures::zero_bypass();
        let code = LinearNetworkCode::zero(net, demand, 1)
            .and_then(|c| c.with_encoder("v1a", Gf2Matrix::from_text("1").unwrap()))
            .and_then(|c| c.with_encoder("av2", Gf2Matrix::from_text("1").unwrap()))
            .and_then(|c| c.with_decoder("v2", "1", Gf2Matrix::from_text("1").unwrap()))
            .unwrap();
        let report = verify_theorem(&code, "a", "e", 1).unwrap();
        assert!(report.pass);
        assert_eq!(report.mac.per_source[0].margin, 0.0);
        assert!(report.bc.subsets.iter().all(|c| c.membership_margin.abs() < 1e-12));
    }

    #[test]
    fn choose_w_e_examples() {
        let vars = vec![Variable::new("W", 2), Variable::new("X", 2)];
        let constant = DistributionTable::from_weights(vars.clone(), [(vec![1, 0], 1), (vec![1, 1], 1)]).unwrap();
        let c = choose_w_e(&constant, "W", &["X"]).unwrap();
        assert_eq!((c.value, c.entropy), (1, 1.0));
        let indep = DistributionTable::from_weights(vars.clone(), (0..4).map(|i| (vec![i >> 1, i & 1], 1))).unwrap();
        assert_eq!(choose_w_e(&indep, "W", &["X"]).unwrap().value, 0);
        let skew = DistributionTable::from_weights(vars, [(vec![0, 0], 2), (vec![1, 0], 1), (vec![1, 1], 1)]).unwrap();
        let c = choose_w_e(&skew, "W", &["X"]).unwrap();
        assert_eq!(c.value, 1);
        assert!(c.entropy >= c.average);
    }

    #[test]
    fn unicast_shape_required() {
        let (_, demand) = fixtures::butterfly_multicast();
        assert!(unicast_sinks(&demand).is_err());
        let (_, demand) = fixtures::butterfly_bypass();
        assert_eq!(unicast_sinks(&demand).unwrap()["2"], "v4");
    }
}
