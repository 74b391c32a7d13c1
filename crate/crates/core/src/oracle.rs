//! Exhaustive code search on tiny instances: zero-error achievable rate sets
//! at a fixed blocklength, the gap they show when one edge is reduced, and
//! zero-error codes for deterministic broadcast channels.
//!
//! Only edge encoders are enumerated. A demanded source is decodable at a
//! sink exactly when its message is a function of the sink's inputs, so the
//! decoders follow from the encoders.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::code::{gather_inputs, input_layout, Dimensions, InputKey, InputLayout, NetworkCode, Trace};
use crate::gf2::BitVector;
use crate::net::{DemandSpec, EdgeId, Network, NodeId, SourceId};
use crate::{rational, Error, Rational, Result, Scalar};

pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Largest `n * sum R_s` the search accepts.
pub const MAX_MESSAGE_BITS: usize = 8;

/// Largest input width of a node whose function is tabulated.
const MAX_TABLE_BITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Mode {
    /// GF(2) matrices only.
    Linear,
    /// Arbitrary functions.
    All,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Mode::Linear),
            "all" => Ok(Mode::All),
            other => Err(Error::parse("mode", format!("expected linear or all, got {other:?}"))),
        }
    }
}

/// Per demanded pair, whether its decoder is always right.
pub type DecodeFlags = BTreeMap<(NodeId, SourceId), bool>;

/// A code given by explicit tables: edge `e` maps the integer value of its
/// tail's input vector to its word, and each demanded pair maps the sink's
/// input value to a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralCode {
    net: Network,
    demand: DemandSpec,
    dims: Dimensions,
    encoders: BTreeMap<EdgeId, Vec<u64>>,
    decoders: BTreeMap<(NodeId, SourceId), Vec<u64>>,
    layouts: BTreeMap<NodeId, InputLayout>,
}

impl GeneralCode {
    pub fn new(
        net: Network,
        demand: DemandSpec,
        n: u32,
        encoders: BTreeMap<EdgeId, Vec<u64>>,
        decoders: BTreeMap<(NodeId, SourceId), Vec<u64>>,
    ) -> Result<Self> {
        demand.validate_against(&net)?;
        let dims = Dimensions::new(&net, &demand, n)?;
        let layouts: BTreeMap<NodeId, InputLayout> =
            net.nodes().iter().map(|v| (v.clone(), input_layout(&net, &demand, &dims, v))).collect();
        let check = |what: &str, table: Option<&Vec<u64>>, in_width: usize, out_width: usize| -> Result<()> {
            if in_width > MAX_TABLE_BITS || out_width > 63 {
                return Err(Error::SizeLimit(format!("{what}: {in_width} input bits, {out_width} output bits")));
            }
            let table = table.ok_or_else(|| Error::InvalidCode(format!("missing table for {what}")))?;
            if table.len() != 1 << in_width {
                return Err(Error::InvalidCode(format!("{what} has {} entries, expected {}", table.len(), 1u64 << in_width)));
            }
            if table.iter().any(|&y| y >> out_width != 0) {
                return Err(Error::InvalidCode(format!("{what} has a value wider than {out_width} bits")));
            }
            Ok(())
        };
        for e in net.edges() {
            check(&format!("edge {}", e.id), encoders.get(&e.id), layouts[&e.from].width, dims.edge_bits[&e.id])?;
        }
        for (v, wanted) in demand.demands() {
            for s in wanted {
                let key = (v.clone(), s.clone());
                check(&format!("decoder {v}:{s}"), decoders.get(&key), layouts[v].width, dims.source_bits[s])?;
            }
        }
        Ok(GeneralCode { net, demand, dims, encoders, decoders, layouts })
    }

    /// Fills decoders from the encoders: the first message seen for each
    /// sink input wins, unseen inputs map to zero. Also returns, per
    /// demanded pair, whether that decoder is always right.
    pub fn with_derived_decoders(
        net: Network,
        demand: DemandSpec,
        n: u32,
        encoders: BTreeMap<EdgeId, Vec<u64>>,
    ) -> Result<(Self, DecodeFlags)> {
        let dims = Dimensions::new(&net, &demand, n)?;
        let mut decoders: BTreeMap<(NodeId, SourceId), Vec<Option<u64>>> = BTreeMap::new();
        for (v, wanted) in demand.demands() {
            let width = input_layout(&net, &demand, &dims, v).width;
            if width > MAX_TABLE_BITS {
                return Err(Error::SizeLimit(format!("node {v} has {width} input bits")));
            }
            for s in wanted {
                decoders.insert((v.clone(), s.clone()), vec![None; 1 << width]);
            }
        }
        let placeholder = decoders.iter().map(|(k, t)| (k.clone(), vec![0; t.len()])).collect();
        let probe = GeneralCode::new(net, demand, n, encoders, placeholder)?;
        let total = dims.total_message_bits();
        if total > 24 {
            return Err(Error::SizeLimit(format!("{total} message bits")));
        }
        let mut ok: BTreeMap<(NodeId, SourceId), bool> = decoders.keys().map(|k| (k.clone(), true)).collect();
        for index in 0..1u64 << total {
            let messages = crate::code::split_messages(&dims, &BitVector::from_u64(index, total));
            let edges = probe.edge_words(&messages);
            for ((v, s), table) in decoders.iter_mut() {
                let x = gather_inputs(&probe.layouts[v], &messages, &edges).to_u64() as usize;
                let m = messages[s].to_u64();
                match table[x] {
                    None => table[x] = Some(m),
                    Some(prev) if prev != m => *ok.get_mut(&(v.clone(), s.clone())).expect("same keys") = false,
                    Some(_) => {}
                }
            }
        }
        let decoders = decoders.into_iter().map(|(k, t)| (k, t.into_iter().map(|y| y.unwrap_or(0)).collect())).collect();
        Ok((GeneralCode { decoders, ..probe }, ok))
    }

    pub fn encoders(&self) -> &BTreeMap<EdgeId, Vec<u64>> {
        &self.encoders
    }

    pub fn decoders(&self) -> &BTreeMap<(NodeId, SourceId), Vec<u64>> {
        &self.decoders
    }

    fn edge_words(&self, messages: &BTreeMap<SourceId, BitVector>) -> BTreeMap<EdgeId, BitVector> {
        let mut edges = BTreeMap::new();
        for e in self.net.edge_order() {
            let x = gather_inputs(&self.layouts[&e.from], messages, &edges).to_u64() as usize;
            let word = BitVector::from_u64(self.encoders[&e.id][x], self.dims.edge_bits[&e.id]);
            edges.insert(e.id.clone(), word);
        }
        edges
    }
}

impl NetworkCode for GeneralCode {
    fn network(&self) -> &Network {
        &self.net
    }

    fn demand(&self) -> &DemandSpec {
        &self.demand
    }

    fn dimensions(&self) -> &Dimensions {
        &self.dims
    }

    fn run(&self, messages: &BTreeMap<SourceId, BitVector>) -> Result<Trace> {
        crate::code::check_messages(&self.dims, messages)?;
        let edges = self.edge_words(messages);
        let reconstructions = self
            .decoders
            .iter()
            .map(|((v, s), table)| {
                let x = gather_inputs(&self.layouts[v], messages, &edges).to_u64() as usize;
                ((v.clone(), s.clone()), BitVector::from_u64(table[x], self.dims.source_bits[s]))
            })
            .collect();
        Ok(Trace { edges, reconstructions })
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Source(usize),
    Edge(usize),
}

#[derive(Debug, Clone)]
struct Port {
    blocks: Vec<(Slot, usize, usize)>,
    width: usize,
}

#[derive(Debug, Clone)]
struct EdgeSlot {
    id: EdgeId,
    input: Port,
    out: usize,
    shift: u32,
    digit_bits: u32,
}

/// Every code of one mode on one network at fixed rates, indexed by
/// `0..count()`. All radices are powers of two: the index is the
/// concatenation of one bit field per edge, in edge order.
#[derive(Debug, Clone)]
pub struct CodeSpace {
    net: Network,
    demand: DemandSpec,
    dims: Dimensions,
    mode: Mode,
    sources: Vec<(usize, usize)>,
    slots: Vec<EdgeSlot>,
    sinks: Vec<(Port, usize)>,
    log2_count: u128,
}

impl CodeSpace {
    pub fn new(net: &Network, demand: &DemandSpec, n: u32, mode: Mode) -> Result<Self> {
        demand.validate_against(net)?;
        let dims = Dimensions::new(net, demand, n)?;
        let total = dims.total_message_bits();
        if total > MAX_MESSAGE_BITS {
            return Err(Error::SizeLimit(format!("{total} message bits exceeds {MAX_MESSAGE_BITS}")));
        }
        let source_index: BTreeMap<&SourceId, usize> = dims.source_bits.keys().enumerate().map(|(i, s)| (s, i)).collect();
        let sources: Vec<(usize, usize)> = dims.source_offsets().values().copied().collect();
        let order = net.edge_order();
        let edge_index: BTreeMap<&str, usize> = order.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
        let port = |v: &str| -> Result<Port> {
            let layout = input_layout(net, demand, &dims, v);
            if layout.width > MAX_TABLE_BITS {
                return Err(Error::SizeLimit(format!("node {v} has {} input bits", layout.width)));
            }
            let blocks = layout
                .blocks
                .iter()
                .map(|b| {
                    let slot = match &b.key {
                        InputKey::Source(s) => Slot::Source(source_index[s]),
                        InputKey::Edge(e) => Slot::Edge(edge_index[e.as_str()]),
                    };
                    (slot, b.offset, b.width)
                })
                .collect();
            Ok(Port { blocks, width: layout.width })
        };
        let mut slots = Vec::new();
        let mut shift: u128 = 0;
        for e in &order {
            let input = port(&e.from)?;
            let out = dims.edge_bits[&e.id];
            let bits: u128 = match mode {
                Mode::Linear => (out * input.width) as u128,
                Mode::All => (out as u128).saturating_mul(1u128.checked_shl(input.width as u32).unwrap_or(u128::MAX)),
            };
            slots.push(EdgeSlot {
                id: e.id.clone(),
                input,
                out,
                shift: shift.min(u32::MAX as u128) as u32,
                digit_bits: bits.min(u32::MAX as u128) as u32,
            });
            shift = shift.saturating_add(bits);
        }
        let mut sinks = Vec::new();
        for (v, wanted) in demand.demands() {
            for s in wanted {
                sinks.push((port(v)?, source_index[s]));
            }
        }
        Ok(CodeSpace { net: net.clone(), demand: demand.clone(), dims, mode, sources, slots, sinks, log2_count: shift })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `log2` of the number of codes.
    pub fn log2_count(&self) -> u128 {
        self.log2_count
    }

    /// Number of codes, or `None` if it does not fit in 64 bits.
    pub fn count(&self) -> Option<u64> {
        (self.log2_count < 64).then(|| 1u64 << self.log2_count)
    }

    pub fn check_budget(&self, budget: u64) -> Result<u64> {
        match self.count() {
            Some(c) if c <= budget => Ok(c),
            _ => Err(Error::BudgetExceeded { estimate: format!("2^{}", self.log2_count), budget }),
        }
    }

    fn digit(&self, slot: &EdgeSlot, index: u64) -> u64 {
        if slot.digit_bits == 0 {
            0
        } else {
            (index >> slot.shift) & (u64::MAX >> (64 - slot.digit_bits))
        }
    }

    fn apply(&self, slot: &EdgeSlot, digit: u64, x: u64) -> u64 {
        match self.mode {
            Mode::Linear => {
                let row_mask = if slot.input.width == 0 { 0 } else { u64::MAX >> (64 - slot.input.width) };
                (0..slot.out).fold(0, |acc, r| {
                    let row = (digit >> (r * slot.input.width)) & row_mask;
                    acc | (((row & x).count_ones() as u64) & 1) << r
                })
            }
            Mode::All => {
                if slot.out == 0 {
                    0
                } else {
                    (digit >> (x as usize * slot.out)) & (u64::MAX >> (64 - slot.out))
                }
            }
        }
    }

    fn read(port: &Port, messages: &[u64], words: &[u64]) -> u64 {
        port.blocks.iter().fold(0, |acc, &(slot, offset, _)| {
            let value = match slot {
                Slot::Source(i) => messages[i],
                Slot::Edge(i) => words[i],
            };
            acc | value << offset
        })
    }

    fn message_values(&self, m: u64) -> Vec<u64> {
        self.sources.iter().map(|&(at, w)| if w == 0 { 0 } else { (m >> at) & (u64::MAX >> (64 - w)) }).collect()
    }

    /// Whether the code at `index` lets every sink recover what it demands.
    pub fn decodes(&self, index: u64) -> bool {
        let digits: Vec<u64> = self.slots.iter().map(|s| self.digit(s, index)).collect();
        let mut seen: Vec<Vec<u64>> = self.sinks.iter().map(|(p, _)| vec![u64::MAX; 1 << p.width]).collect();
        let mut words = vec![0u64; self.slots.len()];
        for m in 0..1u64 << self.dims.total_message_bits() {
            let messages = self.message_values(m);
            for (i, slot) in self.slots.iter().enumerate() {
                let x = Self::read(&slot.input, &messages, &words);
                words[i] = self.apply(slot, digits[i], x);
            }
            for ((port, s), table) in self.sinks.iter().zip(seen.iter_mut()) {
                let x = Self::read(port, &messages, &words) as usize;
                if table[x] == u64::MAX {
                    table[x] = messages[*s];
                } else if table[x] != messages[*s] {
                    return false;
                }
            }
        }
        true
    }

    /// The code at `index` as explicit tables, with derived decoders.
    pub fn code_at(&self, index: u64) -> Result<GeneralCode> {
        let mut encoders = BTreeMap::new();
        for slot in &self.slots {
            let digit = self.digit(slot, index);
            let table = (0..1u64 << slot.input.width).map(|x| self.apply(slot, digit, x)).collect();
            encoders.insert(slot.id.clone(), table);
        }
        GeneralCode::with_derived_decoders(self.net.clone(), self.demand.clone(), self.dims.n, encoders).map(|(c, _)| c)
    }

    /// The smallest index of a decoding code, searching contiguous ranges
    /// on `workers` threads. The answer does not depend on `workers`.
    pub fn first_decoding(&self, budget: u64, workers: usize) -> Result<Option<u64>> {
        let count = self.check_budget(budget)?;
        let workers = (workers.max(1) as u64).min(count);
        let chunk = count.div_ceil(workers);
        let best = AtomicU64::new(u64::MAX);
        std::thread::scope(|scope| {
            for w in 0..workers {
                let best = &best;
                scope.spawn(move || {
                    let (lo, hi) = (w * chunk, ((w + 1) * chunk).min(count));
                    for index in lo..hi {
                        if index >= best.load(Ordering::Relaxed) {
                            return;
                        }
                        if self.decodes(index) {
                            best.fetch_min(index, Ordering::Relaxed);
                            return;
                        }
                    }
                });
            }
        });
        let found = best.into_inner();
        Ok((found != u64::MAX).then_some(found))
    }
}

/// Iterates every code of the space in index order.
pub fn enumerate_codes(
    net: &Network,
    demand: &DemandSpec,
    n: u32,
    mode: Mode,
    budget: u64,
) -> Result<impl Iterator<Item = Result<GeneralCode>>> {
    let space = CodeSpace::new(net, demand, n, mode)?;
    let count = space.check_budget(budget)?;
    Ok((0..count).map(move |i| space.code_at(i)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RatePoint {
    #[serde(with = "rational::text_vec")]
    pub rates: Vec<Rational>,
    pub achievable: bool,
    pub witness: Option<u64>,
    pub codes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AchievableSet {
    pub blocklength: u32,
    pub mode: Mode,
    pub sources: Vec<SourceId>,
    pub points: Vec<RatePoint>,
}

impl AchievableSet {
    pub fn achievable(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.points.iter().filter(|p| p.achievable).map(|p| &p.rates)
    }

    pub fn contains(&self, rates: &[Rational]) -> bool {
        self.achievable().any(|r| r.as_slice() == rates)
    }
}

/// Per-source bit counts to try: `n * R_s` from 0 up to `n` times the
/// smallest max-flow from the source to a sink demanding it, and at most
/// [`MAX_MESSAGE_BITS`] in total. Larger rates violate a cut-set bound.
fn grid(net: &Network, demand: &DemandSpec, n: u32) -> Result<Vec<Vec<usize>>> {
    let mut caps = Vec::new();
    for s in demand.sources() {
        let sinks: Vec<NodeId> = demand.demands().iter().filter(|(_, w)| w.contains(&s.id)).map(|(v, _)| v.clone()).collect();
        let mut cap = Rational::from_integer(MAX_MESSAGE_BITS as i64);
        for v in sinks.iter().filter(|v| **v != s.node) {
            let flow = net.max_flow(&[s.node.clone()].into(), &[v.clone()].into())?;
            cap = cap.min_of(flow * Rational::from_integer(n as i64));
        }
        if sinks.is_empty() {
            cap = Rational::from_integer(0);
        }
        caps.push(cap.floor().to_integer().clamp(0, MAX_MESSAGE_BITS as i64) as usize);
    }
    let mut out = vec![vec![]];
    for cap in caps {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..=cap).map(move |b| {
                    let mut next = prefix.clone();
                    next.push(b);
                    next
                })
            })
            .filter(|bits| bits.iter().sum::<usize>() <= MAX_MESSAGE_BITS)
            .collect();
    }
    Ok(out)
}

/// Zero-error achievable grid points at blocklength `n`. Each grid point is
/// searched on its own.
pub fn achievable_set(net: &Network, demand: &DemandSpec, n: u32, mode: Mode, budget: u64, workers: usize) -> Result<AchievableSet> {
    let mut points = Vec::new();
    for bits in grid(net, demand, n)? {
        let rates: Vec<Rational> = bits.iter().map(|&b| Rational::new(b as i64, n as i64)).collect();
        let space = CodeSpace::new(net, &demand.with_rates(&rates)?, n, mode)?;
        let witness = space.first_decoding(budget, workers)?;
        points.push(RatePoint { rates, achievable: witness.is_some(), witness, codes: space.count().unwrap_or(u64::MAX) });
    }
    Ok(AchievableSet { blocklength: n, mode, sources: demand.source_ids(), points })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GapEntry {
    #[serde(with = "rational::text_vec")]
    pub rate: Vec<Rational>,
    #[serde(with = "rational::text_vec")]
    pub target: Vec<Rational>,
    #[serde(with = "rational::text_vec")]
    pub best: Vec<Rational>,
    #[serde(with = "rational::text")]
    pub gap: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GapReport {
    pub edge: EdgeId,
    #[serde(with = "rational::text")]
    pub delta: Rational,
    pub original: AchievableSet,
    pub reduced: AchievableSet,
    pub entries: Vec<GapEntry>,
    #[serde(with = "rational::text")]
    pub worst_gap: Rational,
    pub pass: bool,
}

/// For every point `r` achievable on the network, the smallest
/// `max_s (r_s - r'_s)^+` over points `r'` achievable once `edge` loses
/// `delta`. Passes when no gap exceeds `delta`.
#[allow(clippy::too_many_arguments)]
pub fn delta_gap_report(
    net: &Network,
    demand: &DemandSpec,
    edge: &str,
    delta: Rational,
    n: u32,
    mode: Mode,
    budget: u64,
    workers: usize,
) -> Result<GapReport> {
    let reduced_net = net.reduce_edge(edge, delta)?;
    let original = achievable_set(net, demand, n, mode, budget, workers)?;
    let reduced = achievable_set(&reduced_net, demand, n, mode, budget, workers)?;
    let zero = Rational::from_integer(0);
    let entries: Vec<GapEntry> = original
        .achievable()
        .map(|r| {
            let (gap, best) = reduced
                .achievable()
                .map(|q| {
                    let gap = r.iter().zip(q).map(|(&a, &b)| (a - b).positive_part()).fold(zero, Scalar::max_of);
                    (gap, q.clone())
                })
                .min_by(|a, b| a.0.cmp(&b.0))
                .unwrap_or_else(|| (r.iter().copied().fold(zero, Scalar::max_of), vec![zero; r.len()]));
            GapEntry { rate: r.clone(), target: r.iter().map(|&x| (x - delta).positive_part()).collect(), best, gap }
        })
        .collect();
    let worst_gap = entries.iter().map(|e| e.gap).fold(zero, Scalar::max_of);
    Ok(GapReport { edge: edge.to_string(), delta, original, reduced, entries, worst_gap, pass: worst_gap <= delta })
}

/// A zero-error code for a deterministic broadcast channel at `n = 1`:
/// `codebook[j]` is the input sent for the `j`-th message tuple (mixed
/// radix, first receiver least significant).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DbcCode {
    pub sizes: Vec<u64>,
    pub codebook: Vec<u64>,
}

/// The first zero-error codebook (in lexicographic order of codebooks) for
/// the given message-set sizes, found by backtracking.
pub fn dbc_zero_error_code(functions: &[Vec<u64>], sizes: &[u64]) -> Option<DbcCode> {
    let inputs = functions.first().map_or(0, Vec::len) as u64;
    let tuples: u64 = sizes.iter().product();
    if tuples > inputs {
        return None;
    }
    let split = |j: u64| -> Vec<u64> {
        let mut rest = j;
        sizes
            .iter()
            .map(|&m| {
                let w = rest % m;
                rest /= m;
                w
            })
            .collect()
    };
    let outputs: Vec<usize> = functions.iter().map(|f| f.iter().max().map_or(1, |&m| m as usize + 1)).collect();
    let mut decoders: Vec<Vec<Option<u64>>> = outputs.iter().map(|&o| vec![None; o]).collect();
    let mut codebook = Vec::new();
    fn extend(
        j: u64,
        tuples: u64,
        inputs: u64,
        functions: &[Vec<u64>],
        split: &dyn Fn(u64) -> Vec<u64>,
        decoders: &mut [Vec<Option<u64>>],
        codebook: &mut Vec<u64>,
    ) -> bool {
        if j == tuples {
            return true;
        }
        let w = split(j);
        for x in 0..inputs {
            let ys: Vec<usize> = functions.iter().map(|f| f[x as usize] as usize).collect();
            if ys.iter().enumerate().any(|(s, &y)| decoders[s][y].is_some_and(|prev| prev != w[s])) {
                continue;
            }
            let fresh: Vec<bool> = ys.iter().enumerate().map(|(s, &y)| decoders[s][y].is_none()).collect();
            for (s, &y) in ys.iter().enumerate() {
                decoders[s][y] = Some(w[s]);
            }
            codebook.push(x);
            if extend(j + 1, tuples, inputs, functions, split, decoders, codebook) {
                return true;
            }
            codebook.pop();
            for (s, &y) in ys.iter().enumerate() {
                if fresh[s] {
                    decoders[s][y] = None;
                }
            }
        }
        false
    }
    extend(0, tuples, inputs, functions, &split, &mut decoders, &mut codebook)
        .then(|| DbcCode { sizes: sizes.to_vec(), codebook })
}

/// Zero-error codes for every tuple of power-of-two message-set sizes whose
/// product does not exceed the input alphabet.
pub fn dbc_zero_error_codes(functions: &[Vec<u64>]) -> Vec<DbcCode> {
    let inputs = functions.first().map_or(0, Vec::len) as u64;
    let mut size_tuples: Vec<Vec<u64>> = vec![vec![]];
    for _ in functions {
        size_tuples = size_tuples
            .into_iter()
            .flat_map(|prefix: Vec<u64>| {
                let used: u64 = prefix.iter().product();
                (0..).map(|k| 1u64 << k).take_while(move |&m| used * m <= inputs).map(move |m| {
                    let mut next = prefix.clone();
                    next.push(m);
                    next
                })
            })
            .collect();
    }
    size_tuples.iter().filter_map(|sizes| dbc_zero_error_code(functions, sizes)).collect()
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
    fn single_edge_counts() {
        let (net, demand) = fixtures::build("u", &[("e", "s", "t", r(1))], &[("1", "s", r(1))], &[("t", &["1"])]);
        assert_eq!(CodeSpace::new(&net, &demand, 1, Mode::Linear).unwrap().count(), Some(2));
        assert_eq!(CodeSpace::new(&net, &demand, 1, Mode::All).unwrap().count(), Some(4));
        // 2x2 matrices at n = 2; 4^4 tables
        assert_eq!(CodeSpace::new(&net, &demand.with_rates(&[r(1)]).unwrap(), 2, Mode::Linear).unwrap().count(), Some(16));
        assert_eq!(CodeSpace::new(&net, &demand, 2, Mode::All).unwrap().count(), Some(256));
        let set = achievable_set(&net, &demand, 1, Mode::All, DEFAULT_BUDGET, 2).unwrap();
        let got: Vec<_> = set.achievable().cloned().collect();
        assert_eq!(got, vec![vec![r(0)], vec![r(1)]]);
    }

    #[test]
    fn empty_network_has_one_code() {
        let (net, demand) = fixtures::build("empty", &[], &[("1", "s", r(0))], &[]);
        let codes: Vec<_> = enumerate_codes(&net, &demand, 1, Mode::All, 1).unwrap().collect();
        assert_eq!(codes.len(), 1);
    }

    #[test]
    fn budget_refusal() {
        let (net, demand) = fixtures::butterfly();
        let err = enumerate_codes(&net, &demand, 1, Mode::All, 1000).err().unwrap();
        assert!(matches!(err, Error::BudgetExceeded { budget: 1000, .. }), "{err}");
    }

    #[test]
    fn butterfly_xor_is_found() {
        let (net, demand) = fixtures::butterfly();
        let space = CodeSpace::new(&net, &demand, 1, Mode::Linear).unwrap();
        let index = space.first_decoding(DEFAULT_BUDGET, 3).unwrap().unwrap();
        let code = space.code_at(index).unwrap();
        assert!(decodable_by_simulation(&code, 8).unwrap().values().all(|&ok| ok));
        assert_eq!(code.encoders()["cd"], vec![0, 1, 1, 0]);
    }

    #[test]
    fn shared_edge_refutes_both() {
        let (net, demand) = fixtures::build(
            "shared",
            &[("a1", "s1", "m", r(1)), ("a2", "s2", "m", r(1)), ("mid", "m", "x", r(1)), ("b1", "x", "t1", r(1)), ("b2", "x", "t2", r(1))],
            &[("1", "s1", r(1)), ("2", "s2", r(1))],
            &[("t1", &["1"]), ("t2", &["2"])],
        );
        let set = achievable_set(&net, &demand, 1, Mode::All, DEFAULT_BUDGET, 2).unwrap();
        assert!(!set.contains(&[r(1), r(1)]));
        assert!(set.contains(&[r(1), r(0)]));
        assert!(set.contains(&[r(0), r(1)]));
    }

    #[test]
    fn worker_count_does_not_matter() {
        let (net, demand) = fixtures::butterfly();
        let one = achievable_set(&net, &demand, 1, Mode::All, DEFAULT_BUDGET, 1).unwrap();
        let many = achievable_set(&net, &demand, 1, Mode::All, DEFAULT_BUDGET, 5).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn gap_on_unused_edge_is_zero() {
        let (net, demand) = fixtures::build(
            "spare",
            &[("e", "s", "t", r(1)), ("spare", "s", "x", r(1))],
            &[("1", "s", r(1))],
            &[("t", &["1"])],
        );
        let report = delta_gap_report(&net, &demand, "spare", r(1), 1, Mode::All, DEFAULT_BUDGET, 2).unwrap();
        assert_eq!(report.worst_gap, r(0));
        assert!(report.pass);
    }

    #[test]
    fn butterfly_bottleneck_gap() {
        let (net, demand) = fixtures::butterfly();
        let report = delta_gap_report(&net, &demand, "cd", r(1), 1, Mode::All, DEFAULT_BUDGET, 4).unwrap();
        assert!(report.original.contains(&[r(1), r(1)]));
        let reduced: Vec<_> = report.reduced.achievable().cloned().collect();
        assert_eq!(reduced, vec![vec![r(0), r(0)]]);
        assert_eq!(report.worst_gap, r(1));
        assert!(report.pass);
    }

    #[test]
    fn general_code_runs_like_its_tables() {
        let (net, demand) = fixtures::relay_chain();
        let encoders = BTreeMap::from([("e1".to_string(), vec![0, 1]), ("e2".to_string(), vec![1, 0])]);
        let (code, ok) = GeneralCode::with_derived_decoders(net, demand, 1, encoders).unwrap();
        assert!(ok.values().all(|&b| b));
        assert_eq!(code.decoders()[&("v2".to_string(), "1".to_string())], vec![1, 0]);
    }

    #[test]
    fn dbc_search() {
        let same = vec![vec![0, 1], vec![0, 1]];
        let codes = dbc_zero_error_codes(&same);
        assert!(codes.iter().any(|c| c.sizes == vec![2, 1]));
        assert!(codes.iter().all(|c| c.sizes != vec![2, 2]));
        let split = vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]];
        let code = dbc_zero_error_code(&split, &[2, 2]).unwrap();
        assert_eq!(code.codebook, vec![0, 2, 1, 3]);
    }
}
