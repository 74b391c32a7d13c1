//! Running a linear code without (part of) one edge.
//!
//! Each source restricts itself to the kernel of its own transfer block
//! `A_{s,e}`, so the edge carries the all-zero word for every restricted
//! message tuple and can be dropped. Because the allowed set is a product of
//! per-source kernels, no coordination between sources is needed, and source
//! `s` keeps `n R_s - rank(A_{s,e}) >= n (R_s - C_e)` bits.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::code::{InputKey, LinearNetworkCode, NetworkCode};
use crate::gf2::{BitVector, Gf2Matrix};
use crate::net::{Edge, EdgeId, Network, SourceId};
use crate::{rational, Error, Rational, Result, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceRestriction {
    /// Basis of `ker A_{s,e}` in ascending free-column order.
    pub kernel: Vec<BitVector>,
    /// `n R_s x |kernel|` matrix mapping a restricted message to the original one.
    pub injection: Gf2Matrix,
    pub original_bits: usize,
    pub rank: usize,
}

impl SourceRestriction {
    pub fn restricted_bits(&self) -> usize {
        self.kernel.len()
    }

    /// Embeds a restricted message (one bit per kernel vector).
    pub fn inject(&self, restricted: &BitVector) -> BitVector {
        self.injection.mat_vec(restricted).expect("restricted message has kernel dimension")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelRestriction {
    pub edge: EdgeId,
    pub n: u32,
    pub sources: BTreeMap<SourceId, SourceRestriction>,
}

impl KernelRestriction {
    pub fn restricted_rate(&self, source: &str) -> Rational {
        Rational::new(self.sources[source].restricted_bits() as i64, self.n as i64)
    }

    pub fn restricted_rates(&self) -> Vec<Rational> {
        self.sources.keys().map(|s| self.restricted_rate(s)).collect()
    }

    pub fn total_restricted_bits(&self) -> usize {
        self.sources.values().map(SourceRestriction::restricted_bits).sum()
    }

    /// Original messages for a concatenated restricted tuple (sources by id).
    pub fn inject_all(&self, restricted: &BitVector) -> BTreeMap<SourceId, BitVector> {
        let mut at = 0;
        self.sources
            .iter()
            .map(|(s, sr)| {
                let part = restricted.slice(at, sr.restricted_bits());
                at += sr.restricted_bits();
                (s.clone(), sr.inject(&part))
            })
            .collect()
    }
}

pub fn kernel_restrict(code: &LinearNetworkCode, edge: &str) -> Result<KernelRestriction> {
    code.network().edge(edge)?;
    let tm = code.transfer_matrices();
    let mut sources = BTreeMap::new();
    for s in code.demand().source_ids() {
        let block = tm.block(&s, edge)?;
        let kernel = block.kernel_basis();
        let injection = Gf2Matrix::from_columns(block.cols(), &kernel)?;
        let restriction = SourceRestriction { rank: block.rank(), original_bits: block.cols(), kernel, injection };
        sources.insert(s, restriction);
    }
    Ok(KernelRestriction { edge: edge.to_string(), n: code.blocklength(), sources })
}

/// The code on `N` minus edge `e`, carrying restricted messages. Consumers
/// of `e` read the constant zero word; each decoder is followed by a left
/// inverse of its source's injection.
pub fn build_restricted_code(code: &LinearNetworkCode, kr: &KernelRestriction) -> Result<LinearNetworkCode> {
    let net = code.network();
    let capacity = net.edge(&kr.edge)?.capacity;
    let reduced = net.reduce_edge(&kr.edge, capacity)?;
    let demand = code.demand().with_rates(&kr.restricted_rates())?;
    let lefts: BTreeMap<SourceId, Gf2Matrix> = kr
        .sources
        .iter()
        .map(|(s, sr)| {
            let left = sr.injection.left_inverse().expect("kernel basis vectors are independent");
            (s.clone(), left)
        })
        .collect();
    let removed = kr.edge.clone();
    let map = |key: &InputKey, bit: usize| -> Vec<(InputKey, usize)> {
        match key {
            InputKey::Edge(e) if *e == removed => Vec::new(),
            InputKey::Edge(_) => vec![(key.clone(), bit)],
            InputKey::Source(s) => {
                let inj = &kr.sources[s].injection;
                (0..inj.cols()).filter(|&t| inj.get(bit, t)).map(|t| (key.clone(), t)).collect()
            }
        }
    };
    let rows = |e: &EdgeId| (e.clone(), 0, code.dimensions().edge_bits[e]);
    let left = |_: &String, s: &SourceId| Some(lefts[s].clone());
    code.reexpress(reduced, demand, kr.n, &map, &rows, &left)
}

/// Identifiers of the two links replacing `edge` in [`split_parallel`].
pub fn split_ids(edge: &str) -> (EdgeId, EdgeId) {
    (format!("{edge}#rest"), format!("{edge}#delta"))
}

/// Replaces `edge` by parallel links of capacities `C_e - delta` and `delta`.
pub fn split_parallel(net: &Network, edge: &str, delta: Rational) -> Result<Network> {
    let target = net.edge(edge)?.clone();
    if delta <= Rational::zero() || delta >= target.capacity {
        return Err(Error::InvalidDelta(format!(
            "split needs 0 < delta < {}, got {}",
            rational::format(&target.capacity),
            rational::format(&delta)
        )));
    }
    let (rest, part) = split_ids(edge);
    if net.edge(&rest).is_ok() || net.edge(&part).is_ok() {
        return Err(Error::InvalidNetwork(format!("split identifiers for {edge} already in use")));
    }
    let mut edges: Vec<Edge> = net.edges().iter().filter(|e| e.id != edge).cloned().collect();
    edges.push(Edge::new(rest, &target.from, &target.to, target.capacity - delta));
    edges.push(Edge::new(part, &target.from, &target.to, delta));
    net.with_edges(edges)
}

/// Lifts a code to the split network: bits `0..n(C_e - delta)` of the old
/// word travel on the first link and the remainder on the second.
pub fn lift_split(code: &LinearNetworkCode, edge: &str, delta: Rational) -> Result<LinearNetworkCode> {
    let split = split_parallel(code.network(), edge, delta)?;
    let n = code.blocklength();
    let keep = rational::bits_at(&(code.network().edge(edge)?.capacity - delta), n)
        .ok_or_else(|| Error::Blocklength { n, what: format!("capacity of {edge} minus delta") })?;
    let total = code.dimensions().edge_bits[edge];
    let (rest, part) = split_ids(edge);
    let map = |key: &InputKey, bit: usize| -> Vec<(InputKey, usize)> {
        match key {
            InputKey::Edge(e) if e == edge => {
                if bit < keep {
                    vec![(InputKey::Edge(rest.clone()), bit)]
                } else {
                    vec![(InputKey::Edge(part.clone()), bit - keep)]
                }
            }
            _ => vec![(key.clone(), bit)],
        }
    };
    let rows = |e: &EdgeId| {
        if *e == rest {
            (edge.to_string(), 0, keep)
        } else if *e == part {
            (edge.to_string(), keep, total - keep)
        } else {
            (e.clone(), 0, code.dimensions().edge_bits[e])
        }
    };
    code.reexpress(split, code.demand().clone(), n, &map, &rows, &|_, _| None)
}

/// Renames edge `from` to `to` (the rename changes input orderings).
fn rename_edge(code: &LinearNetworkCode, from: &str, to: &str) -> Result<LinearNetworkCode> {
    let edges = code
        .network()
        .edges()
        .iter()
        .map(|e| if e.id == from { Edge { id: to.to_string(), ..e.clone() } } else { e.clone() })
        .collect();
    let net = code.network().with_edges(edges)?;
    let map = |key: &InputKey, bit: usize| -> Vec<(InputKey, usize)> {
        match key {
            InputKey::Edge(e) if e == from => vec![(InputKey::Edge(to.to_string()), bit)],
            _ => vec![(key.clone(), bit)],
        }
    };
    let rows = |e: &EdgeId| {
        let old = if e == to { from.to_string() } else { e.clone() };
        let bits = code.dimensions().edge_bits[&old];
        (old, 0, bits)
    };
    code.reexpress(net, code.demand().clone(), code.blocklength(), &map, &rows, &|_, _| None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceRateLoss {
    pub s: SourceId,
    #[serde(with = "rational::text")]
    pub original_rate: Rational,
    #[serde(with = "rational::text")]
    pub restricted_rate: Rational,
    /// `(R_s - delta)^+`.
    #[serde(with = "rational::text")]
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RateLossReport {
    pub edge: EdgeId,
    #[serde(with = "rational::text")]
    pub delta: Rational,
    pub blocklength: u32,
    pub per_source: Vec<SourceRateLoss>,
    pub pass: bool,
}

/// Everything produced by [`verify_rate_loss`].
#[derive(Debug, Clone)]
pub struct RateLoss {
    pub report: RateLossReport,
    /// The code that was restricted: the input (possibly repeated to make
    /// `n delta` integral), split when `delta < C_e`.
    pub working: LinearNetworkCode,
    /// The link of capacity `delta` in `working` that is dropped.
    pub dropped_link: EdgeId,
    pub restriction: Option<KernelRestriction>,
    /// A code on `reduce_edge(N, e, delta)` at the restricted rates.
    pub restricted: LinearNetworkCode,
}

/// Smallest repetition factor making `n * delta` an integer.
fn repetition_for(n: u32, delta: Rational) -> u32 {
    let scaled = delta * Rational::from_integer(n as i64);
    *scaled.denom() as u32
}

pub fn verify_rate_loss(code: &LinearNetworkCode, edge: &str, delta: Rational) -> Result<RateLoss> {
    let capacity = code.network().edge(edge)?.capacity;
    if delta < Rational::zero() {
        return Err(Error::InvalidDelta(format!("negative delta {}", rational::format(&delta))));
    }
    if delta > capacity {
        return Err(Error::DeltaExceedsCapacity {
            edge: edge.to_string(),
            delta: rational::format(&delta),
            capacity: rational::format(&capacity),
        });
    }
    let rates = code.demand().rates();
    let ids = code.demand().source_ids();
    if delta.is_zero() {
        let report = RateLossReport {
            edge: edge.to_string(),
            delta,
            blocklength: code.blocklength(),
            per_source: ids
                .iter()
                .zip(&rates)
                .map(|(s, &rate)| SourceRateLoss { s: s.clone(), original_rate: rate, restricted_rate: rate, bound: rate })
                .collect(),
            pass: true,
        };
        return Ok(RateLoss {
            report,
            working: code.clone(),
            dropped_link: edge.to_string(),
            restriction: None,
            restricted: code.clone(),
        });
    }
    let t = repetition_for(code.blocklength(), delta);
    let base = if t > 1 { code.repeat(t)? } else { code.clone() };
    let (working, link) = if delta < capacity {
        (lift_split(&base, edge, delta)?, split_ids(edge).1)
    } else {
        (base, edge.to_string())
    };
    let kr = kernel_restrict(&working, &link)?;
    let mut restricted = build_restricted_code(&working, &kr)?;
    if delta < capacity {
        restricted = rename_edge(&restricted, &split_ids(edge).0, edge)?;
    }
    let per_source: Vec<SourceRateLoss> = ids
        .iter()
        .zip(&rates)
        .map(|(s, &rate)| SourceRateLoss {
            s: s.clone(),
            original_rate: rate,
            restricted_rate: kr.restricted_rate(s),
            bound: (rate - delta).positive_part(),
        })
        .collect();
    let pass = per_source.iter().all(|p| p.restricted_rate >= p.bound);
    let report = RateLossReport { edge: edge.to_string(), delta, blocklength: working.blocklength(), per_source, pass };
    Ok(RateLoss { report, working, dropped_link: link, restriction: Some(kr), restricted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::decodable_by_simulation;
    use crate::fixtures;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn unused_edge_keeps_full_rate() {
        let code = fixtures::butterfly_xor_code().with_encoder("cd", Gf2Matrix::zeros(1, 2)).unwrap();
        let kr = kernel_restrict(&code, "cd").unwrap();
        assert_eq!(kr.restricted_rates(), vec![r(1), r(1)]);
        let restricted = build_restricted_code(&code, &kr).unwrap();
        assert!(restricted.network().edge("cd").is_err());
    }

    #[test]
    fn unit_block_leaves_zero_kernel() {
        let code = fixtures::relay_chain_code();
        let kr = kernel_restrict(&code, "e1").unwrap();
        assert_eq!(kr.restricted_rate("1"), r(0));
        assert_eq!(kr.sources["1"].rank, 1);
    }

    #[test]
    fn rank_one_block_at_blocklength_two() {
        // Source sends two bits; the edge carries only their sum.
        let (net, demand) = fixtures::build(
            "sum",
            &[("e", "s", "t", r(1))],
            &[("1", "s", r(1))],
            &[],
        );
        let code = LinearNetworkCode::zero(net, demand, 2)
            .unwrap()
            .with_encoder("e", Gf2Matrix::from_text("11\n00").unwrap())
            .unwrap();
        let kr = kernel_restrict(&code, "e").unwrap();
        assert_eq!(kr.restricted_rate("1"), Rational::new(1, 2));
        // independent count: messages m in {0,1}^2 with m0 + m1 = 0
        let zeros = (0u64..4).filter(|m| (m & 1) ^ (m >> 1 & 1) == 0).count();
        assert_eq!(1usize << kr.sources["1"].restricted_bits(), zeros);
    }

    #[test]
    fn butterfly_bottleneck_removal() {
        let code = fixtures::butterfly_xor_code();
        let out = verify_rate_loss(&code, "cd", r(1)).unwrap();
        assert!(out.report.pass);
        let rates: Vec<_> = out.report.per_source.iter().map(|p| p.restricted_rate).collect();
        assert_eq!(rates, vec![r(0), r(0)]);
        assert!(out.restricted.check_decodable().unwrap().values().all(|&b| b));
    }

    #[test]
    fn zero_delta_is_identity() {
        let code = fixtures::butterfly_xor_code();
        let out = verify_rate_loss(&code, "cd", r(0)).unwrap();
        assert!(out.report.per_source.iter().all(|p| p.restricted_rate == p.original_rate));
    }

    #[test]
    fn delta_above_capacity_rejected() {
        let code = fixtures::butterfly_xor_code();
        assert!(matches!(verify_rate_loss(&code, "cd", r(5)), Err(Error::DeltaExceedsCapacity { .. })));
    }

    #[test]
    fn split_two_units() {
        let (net, _) = fixtures::build("p", &[("e", "s", "t", r(2))], &[], &[]);
        let split = split_parallel(&net, "e", r(1)).unwrap();
        let caps: Vec<_> = split.edges().iter().map(|e| e.capacity).collect();
        assert_eq!(caps, vec![r(1), r(1)]);
        let (s, t) = (crate::net::node_set(["s"]), crate::net::node_set(["t"]));
        assert_eq!(split.max_flow(&s, &t).unwrap(), net.max_flow(&s, &t).unwrap());
        assert!(split_parallel(&net, "e", r(2)).is_err());
        assert!(split_parallel(&net, "e", r(0)).is_err());
    }

    #[test]
    fn lifted_butterfly_simulates_identically() {
        let code = fixtures::butterfly_xor_code().repeat(2).unwrap();
        let lifted = lift_split(&code, "cd", r(1) / r(2)).unwrap();
        let (rest, part) = split_ids("cd");
        for index in 0..16u64 {
            let m = crate::code::split_messages(code.dimensions(), &BitVector::from_u64(index, 4));
            let a = code.run(&m).unwrap();
            let b = lifted.run(&m).unwrap();
            assert_eq!(a.reconstructions, b.reconstructions);
            assert_eq!(a.edges["cd"], BitVector::concat([&b.edges[&rest], &b.edges[&part]]));
        }
    }

    #[test]
    fn half_capacity_needs_repetition() {
        let code = fixtures::butterfly_xor_code();
        let out = verify_rate_loss(&code, "cd", Rational::new(1, 2)).unwrap();
        assert_eq!(out.report.blocklength, 2);
        assert!(out.report.pass);
        let restricted = &out.restricted;
        assert_eq!(restricted.network().edge("cd").unwrap().capacity, Rational::new(1, 2));
        let ok = decodable_by_simulation(restricted, 12).unwrap();
        assert!(ok.values().all(|&b| b));
    }
}
