//! Cut-set regions for demand types whose capacity they characterize.
//!
//! Constraint families, each `sum_{s in A} R_s <= maxflow(alpha(A), T)`:
//!
//! * multicast (one source, every sink wants it): `A = {s}`, `T` each sink;
//! * multi-source multicast (every sink wants every source): every nonempty
//!   `A`, `T` each sink;
//! * single source node with pairwise disjoint demands: for every nonempty
//!   set of sinks `T`, `A` is the union of their demands;
//! * single source node, a common set wanted by every sink plus pairwise
//!   disjoint private sets: for every nonempty `T`, `A` is the common set
//!   plus the private sets of `T`.
//!
//! Subsets whose sources already sit on the sink side are dropped: their
//! bound is unlimited.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::net::{DemandSpec, Network, NodeId, SourceId};
use crate::region::{Inequality, RateRegion};
use crate::{rational, Error, ExactRegion, Rational, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum DemandType {
    Multicast,
    MultiSourceMulticast,
    SingleSourceNonOverlapping,
    SingleSourceNonOverlappingPlusMulticast,
    /// Anything else; only the outer bound of [`cutset_outer_bound`] is used.
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutsetConstraint {
    pub sources: BTreeSet<SourceId>,
    pub sinks: BTreeSet<NodeId>,
    #[serde(with = "rational::text")]
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CutsetRegion {
    pub demand_type: DemandType,
    pub source_ids: Vec<SourceId>,
    pub constraints: Vec<CutsetConstraint>,
}

/// Nonempty subsets of `items`, ordered by bitmask.
pub(crate) fn nonempty_subsets<T: Clone + Ord>(items: &[T]) -> Vec<BTreeSet<T>> {
    (1u64..1 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Structural classification; overlapping classes are resolved in the order
/// of [`DemandType`]'s variants.
pub fn classify(demand: &DemandSpec) -> Result<DemandType> {
    let sinks = demand.sinks();
    if sinks.is_empty() {
        return Err(Error::UnsupportedDemand("no node demands anything".into()));
    }
    let all: BTreeSet<SourceId> = demand.source_ids().into_iter().collect();
    let wanted: Vec<BTreeSet<SourceId>> = sinks.iter().map(|v| demand.demanded_at(v)).collect();
    if all.len() == 1 && wanted.iter().all(|w| *w == all) {
        return Ok(DemandType::Multicast);
    }
    if all.len() > 1 && wanted.iter().all(|w| *w == all) {
        return Ok(DemandType::MultiSourceMulticast);
    }
    let source_nodes: BTreeSet<&NodeId> = demand.sources().iter().map(|s| &s.node).collect();
    if source_nodes.len() != 1 {
        return Err(Error::UnsupportedDemand(
            "sources at several nodes without a common multicast demand".into(),
        ));
    }
    if pairwise_disjoint(&wanted) {
        return Ok(DemandType::SingleSourceNonOverlapping);
    }
    let common: BTreeSet<SourceId> =
        wanted.iter().skip(1).fold(wanted[0].clone(), |acc, w| acc.intersection(w).cloned().collect());
    let private: Vec<BTreeSet<SourceId>> = wanted.iter().map(|w| w.difference(&common).cloned().collect()).collect();
    if !common.is_empty() && pairwise_disjoint(&private) {
        return Ok(DemandType::SingleSourceNonOverlappingPlusMulticast);
    }
    Err(Error::UnsupportedDemand("overlapping demands that are not a common multicast plus private sets".into()))
}

fn pairwise_disjoint(sets: &[BTreeSet<SourceId>]) -> bool {
    let mut seen = BTreeSet::new();
    sets.iter().flatten().all(|s| seen.insert(s.clone()))
}

fn constraint(net: &Network, demand: &DemandSpec, sources: BTreeSet<SourceId>, sinks: BTreeSet<NodeId>) -> Result<Option<CutsetConstraint>> {
    let src = demand.nodes_of(&sources);
    if src.intersection(&sinks).next().is_some() || sources.is_empty() {
        return Ok(None);
    }
    let bound = net.max_flow(&src, &sinks)?;
    Ok(Some(CutsetConstraint { sources, sinks, bound }))
}

/// Constraint families for one demand type (see the module docs).
fn families(demand: &DemandSpec, kind: DemandType) -> Vec<(BTreeSet<SourceId>, BTreeSet<NodeId>)> {
    let sinks = demand.sinks();
    let ids = demand.source_ids();
    match kind {
        DemandType::Multicast => sinks.iter().map(|t| (ids.iter().cloned().collect(), [t.clone()].into())).collect(),
        DemandType::MultiSourceMulticast => sinks
            .iter()
            .flat_map(|t| nonempty_subsets(&ids).into_iter().map(move |a| (a, [t.clone()].into())))
            .collect(),
        DemandType::General => demand
            .sinks()
            .into_iter()
            .flat_map(|t| {
                let wanted: Vec<SourceId> = demand.demanded_at(&t).into_iter().collect();
                nonempty_subsets(&wanted).into_iter().map(move |a| (a, [t.clone()].into()))
            })
            .collect(),
        DemandType::SingleSourceNonOverlapping | DemandType::SingleSourceNonOverlappingPlusMulticast => {
            let wanted: BTreeMap<&NodeId, BTreeSet<SourceId>> = sinks.iter().map(|v| (v, demand.demanded_at(v))).collect();
            nonempty_subsets(&sinks)
                .into_iter()
                .map(|group| {
                    let sources = group.iter().flat_map(|t| wanted[t].iter().cloned()).collect();
                    (sources, group)
                })
                .collect()
        }
    }
}

pub fn cutset_region(net: &Network, demand: &DemandSpec) -> Result<CutsetRegion> {
    build_region(net, demand, classify(demand)?)
}

/// [`cutset_region`] when the demand type is supported, the general outer
/// bound (tagged [`DemandType::General`]) otherwise.
pub fn cutset_bounds(net: &Network, demand: &DemandSpec) -> Result<CutsetRegion> {
    match classify(demand) {
        Ok(kind) => build_region(net, demand, kind),
        Err(Error::UnsupportedDemand(_)) if !demand.sinks().is_empty() => build_region(net, demand, DemandType::General),
        Err(err) => Err(err),
    }
}

fn build_region(net: &Network, demand: &DemandSpec, kind: DemandType) -> Result<CutsetRegion> {
    let mut constraints = Vec::new();
    for (sources, sinks) in families(demand, kind) {
        if let Some(c) = constraint(net, demand, sources, sinks)? {
            constraints.push(c);
        }
    }
    Ok(CutsetRegion { demand_type: kind, source_ids: demand.source_ids(), constraints })
}

/// Cut-set outer bound for arbitrary demands: for every sink `t` and every
/// nonempty `A` it wants, `sum_A R_s <= maxflow(alpha(A), t)`. Valid but
/// not claimed tight.
pub fn cutset_outer_bound(net: &Network, demand: &DemandSpec) -> Result<Vec<CutsetConstraint>> {
    Ok(build_region(net, demand, DemandType::General)?.constraints)
}

impl CutsetRegion {
    pub fn dimension(&self) -> usize {
        self.source_ids.len()
    }

    pub fn contains(&self, rates: &[Rational]) -> Result<bool> {
        if rates.len() != self.source_ids.len() {
            return Err(Error::Dimension(format!("{} rates for {} sources", rates.len(), self.source_ids.len())));
        }
        Ok(self.constraints.iter().all(|c| self.load(c, rates) <= c.bound))
    }

    fn load(&self, c: &CutsetConstraint, rates: &[Rational]) -> Rational {
        self.source_ids.iter().zip(rates).filter(|(s, _)| c.sources.contains(*s)).map(|(_, &r)| r).sum()
    }

    /// The same inequalities as a general rate region with zero offset.
    pub fn to_region(&self) -> ExactRegion {
        let inequalities = self
            .constraints
            .iter()
            .map(|c| Inequality {
                subset: self
                    .source_ids
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| c.sources.contains(*s))
                    .map(|(i, _)| i)
                    .collect(),
                bound: c.bound,
                label: format!("cut to {{{}}}", c.sinks.iter().cloned().collect::<Vec<_>>().join(",")),
            })
            .collect();
        RateRegion::new(self.source_ids.clone(), inequalities, vec![Rational::zero(); self.source_ids.len()])
            .expect("cut bounds are nonnegative")
    }
}

/// `region_membership` for cut-set regions.
pub fn region_membership(region: &CutsetRegion, rates: &[Rational]) -> Result<bool> {
    region.contains(rates)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundDrop {
    pub sources: BTreeSet<SourceId>,
    pub sinks: BTreeSet<NodeId>,
    #[serde(with = "rational::text")]
    pub before: Rational,
    #[serde(with = "rational::text")]
    pub after: Rational,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeCheck {
    #[serde(with = "rational::text_vec")]
    pub rate: Vec<Rational>,
    #[serde(with = "rational::text_vec")]
    pub reduced: Vec<Rational>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RobustnessReport {
    pub edge: String,
    #[serde(with = "rational::text")]
    pub delta: Rational,
    pub bounds: Vec<BoundDrop>,
    pub probes: Vec<ProbeCheck>,
    pub skipped_probes: usize,
    pub pass: bool,
}

/// Checks that every cut-set bound drops by at most `delta` after reducing
/// `edge`, and that `(r - delta)^+` stays feasible for every feasible probe.
/// Probes outside the original region are counted and skipped.
pub fn check_delta_robustness(
    net: &Network,
    demand: &DemandSpec,
    edge: &str,
    delta: Rational,
    probes: &[Vec<Rational>],
) -> Result<RobustnessReport> {
    let reduced_net = net.reduce_edge(edge, delta)?;
    let before = cutset_bounds(net, demand)?;
    let after = cutset_bounds(&reduced_net, demand)?;
    let bounds: Vec<BoundDrop> = before
        .constraints
        .iter()
        .zip(&after.constraints)
        .map(|(b, a)| {
            debug_assert_eq!((&b.sources, &b.sinks), (&a.sources, &a.sinks));
            BoundDrop {
                sources: b.sources.clone(),
                sinks: b.sinks.clone(),
                before: b.bound,
                after: a.bound,
                ok: a.bound >= b.bound - delta,
            }
        })
        .collect();
    let mut checks = Vec::new();
    let mut skipped = 0;
    for r in probes {
        if !before.contains(r)? {
            skipped += 1;
            continue;
        }
        let reduced: Vec<Rational> = r.iter().map(|&x| (x - delta).positive_part()).collect();
        let ok = after.contains(&reduced)?;
        checks.push(ProbeCheck { rate: r.clone(), reduced, ok });
    }
    let pass = bounds.iter().all(|b| b.ok) && checks.iter().all(|c| c.ok);
    Ok(RobustnessReport { edge: edge.to_string(), delta, bounds, probes: checks, skipped_probes: skipped, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn multicast_butterfly_bound() {
        let (net, demand) = fixtures::butterfly_multicast();
        let region = cutset_region(&net, &demand).unwrap();
        assert_eq!(region.demand_type, DemandType::Multicast);
        assert!(region.constraints.iter().all(|c| c.bound == r(2)));
        assert!(region.contains(&[r(2)]).unwrap());
        assert!(!region.contains(&[Rational::new(5, 2)]).unwrap());
    }

    #[test]
    fn single_unicast_edge() {
        let (net, demand) = fixtures::build("u", &[("e", "s", "t", r(3))], &[("1", "s", r(1))], &[("t", &["1"])]);
        let region = cutset_region(&net, &demand).unwrap();
        assert_eq!(region.constraints.len(), 1);
        assert_eq!(region.constraints[0].bound, r(3));
        assert!(region_membership(&region, &[r(0)]).unwrap());
        assert!(region_membership(&region, &[r(3)]).unwrap());
        assert!(!region_membership(&region, &[r(4)]).unwrap());
        assert!(region_membership(&region, &[r(1), r(1)]).is_err());
    }

    #[test]
    fn shared_edge_sum_constraint() {
        let (net, demand) = fixtures::build(
            "shared",
            &[("sm", "s", "m", r(1)), ("mt1", "m", "t1", r(1)), ("mt2", "m", "t2", r(1))],
            &[("1", "s", r(1)), ("2", "s", r(1))],
            &[("t1", &["1"]), ("t2", &["2"])],
        );
        let region = cutset_region(&net, &demand).unwrap();
        assert_eq!(region.demand_type, DemandType::SingleSourceNonOverlapping);
        let both = region.constraints.iter().find(|c| c.sources.len() == 2).unwrap();
        assert_eq!(both.bound, r(1));
        assert!(!region.contains(&[r(1), r(1)]).unwrap());
    }

    #[test]
    fn classification() {
        let (_, two_unicast) = fixtures::butterfly();
        assert!(classify(&two_unicast).is_err());
        let (_, d) = fixtures::build(
            "hybrid",
            &[("a", "s", "t1", r(1)), ("b", "s", "t2", r(1))],
            &[("1", "s", r(1)), ("2", "s", r(1)), ("3", "s", r(1))],
            &[("t1", &["1", "2"]), ("t2", &["1", "3"])],
        );
        assert_eq!(classify(&d).unwrap(), DemandType::SingleSourceNonOverlappingPlusMulticast);
    }

    #[test]
    fn zero_delta_changes_nothing() {
        let (net, demand) = fixtures::butterfly_multicast();
        let report = check_delta_robustness(&net, &demand, "cd", r(0), &[vec![r(2)]]).unwrap();
        assert!(report.pass);
        assert!(report.bounds.iter().all(|b| b.before == b.after));
    }

    #[test]
    fn bottleneck_removal_keeps_bound_one() {
        let (net, demand) = fixtures::butterfly_multicast();
        let report = check_delta_robustness(&net, &demand, "cd", r(1), &[vec![r(2)], vec![r(1)]]).unwrap();
        assert!(report.pass);
        assert!(report.bounds.iter().all(|b| b.after == r(1)));
    }

    #[test]
    fn outer_bound_for_two_unicast() {
        let (net, demand) = fixtures::butterfly();
        let rows = cutset_outer_bound(&net, &demand).unwrap();
        // each source reaches its sink only through cd
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|c| c.bound == r(1)));
    }
}
