//! Blocklength-n network codes: input layouts, GF(2) linear codes, transfer
//! matrices, simulation and decodability.
//!
//! Every node sees its inputs as one concatenated bit vector: the messages of
//! the sources available at the node (ascending source id), followed by the
//! words on its incoming edges (ascending edge id). Encoders and decoders are
//! maps from that vector.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gf2::{BitVector, Gf2Matrix};
use crate::net::{DemandSpec, EdgeId, Network, NodeId, SourceId};
use crate::{rational, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InputKey {
    Source(SourceId),
    Edge(EdgeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputBlock {
    pub key: InputKey,
    pub offset: usize,
    pub width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InputLayout {
    pub blocks: Vec<InputBlock>,
    pub width: usize,
}

impl InputLayout {
    pub fn block(&self, key: &InputKey) -> Option<&InputBlock> {
        self.blocks.iter().find(|b| &b.key == key)
    }
}

/// Bits per block for every source and edge at blocklength `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimensions {
    pub n: u32,
    pub source_bits: BTreeMap<SourceId, usize>,
    pub edge_bits: BTreeMap<EdgeId, usize>,
}

impl Dimensions {
    /// Fails unless every `n * C_e` and `n * R_s` is an integer.
    pub fn new(net: &Network, demand: &DemandSpec, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Blocklength { n, what: "blocklength".into() });
        }
        let mut source_bits = BTreeMap::new();
        for s in demand.sources() {
            let bits = rational::bits_at(&s.rate, n)
                .ok_or_else(|| Error::Blocklength { n, what: format!("rate {} of source {}", rational::format(&s.rate), s.id) })?;
            source_bits.insert(s.id.clone(), bits);
        }
        let mut edge_bits = BTreeMap::new();
        for e in net.edges() {
            let bits = rational::bits_at(&e.capacity, n).ok_or_else(|| Error::Blocklength {
                n,
                what: format!("capacity {} of edge {}", rational::format(&e.capacity), e.id),
            })?;
            edge_bits.insert(e.id.clone(), bits);
        }
        Ok(Dimensions { n, source_bits, edge_bits })
    }

    pub fn width(&self, key: &InputKey) -> usize {
        match key {
            InputKey::Source(s) => self.source_bits[s],
            InputKey::Edge(e) => self.edge_bits[e],
        }
    }

    pub fn total_message_bits(&self) -> usize {
        self.source_bits.values().sum()
    }

    /// Offsets of each source inside the concatenated message vector
    /// (sources in ascending id order).
    pub fn source_offsets(&self) -> BTreeMap<SourceId, (usize, usize)> {
        let mut at = 0;
        self.source_bits
            .iter()
            .map(|(s, &w)| {
                let entry = (s.clone(), (at, w));
                at += w;
                entry
            })
            .collect()
    }
}

pub fn input_layout(net: &Network, demand: &DemandSpec, dims: &Dimensions, node: &str) -> InputLayout {
    let keys = demand
        .sources_at(node)
        .into_iter()
        .map(|s| InputKey::Source(s.id.clone()))
        .chain(net.in_edges(node).into_iter().map(|e| InputKey::Edge(e.id.clone())));
    let mut layout = InputLayout::default();
    for key in keys {
        let width = dims.width(&key);
        layout.blocks.push(InputBlock { key, offset: layout.width, width });
        layout.width += width;
    }
    layout
}

/// Every edge word and every reconstruction produced on one message tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub edges: BTreeMap<EdgeId, BitVector>,
    pub reconstructions: BTreeMap<(NodeId, SourceId), BitVector>,
}

/// Anything that can be run on a message tuple: linear or general codes.
pub trait NetworkCode: Sync {
    fn network(&self) -> &Network;
    fn demand(&self) -> &DemandSpec;
    fn dimensions(&self) -> &Dimensions;
    fn run(&self, messages: &BTreeMap<SourceId, BitVector>) -> Result<Trace>;

    fn blocklength(&self) -> u32 {
        self.dimensions().n
    }
}

/// Splits a concatenated message vector (sources by ascending id) into a map.
pub fn split_messages(dims: &Dimensions, all: &BitVector) -> BTreeMap<SourceId, BitVector> {
    dims.source_offsets().into_iter().map(|(s, (at, w))| (s, all.slice(at, w))).collect()
}

pub(crate) fn gather_inputs(
    layout: &InputLayout,
    messages: &BTreeMap<SourceId, BitVector>,
    edges: &BTreeMap<EdgeId, BitVector>,
) -> BitVector {
    BitVector::concat(layout.blocks.iter().map(|b| match &b.key {
        InputKey::Source(s) => &messages[s],
        InputKey::Edge(e) => &edges[e],
    }))
}

pub(crate) fn check_messages(dims: &Dimensions, messages: &BTreeMap<SourceId, BitVector>) -> Result<()> {
    for (s, &w) in &dims.source_bits {
        match messages.get(s) {
            Some(m) if m.len() == w => {}
            Some(m) => return Err(Error::Dimension(format!("message for source {s} has {} bits, expected {w}", m.len()))),
            None => return Err(Error::UnknownSource(format!("no message supplied for source {s}"))),
        }
    }
    Ok(())
}

/// Where each bit of an old input block lands in a new input layout.
pub(crate) type InputMap<'a> = dyn Fn(&InputKey, usize) -> Vec<(InputKey, usize)> + 'a;

/// A GF(2) linear network code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearNetworkCode {
    net: Network,
    demand: DemandSpec,
    dims: Dimensions,
    encoders: BTreeMap<EdgeId, Gf2Matrix>,
    decoders: BTreeMap<(NodeId, SourceId), Gf2Matrix>,
}

impl LinearNetworkCode {
    pub fn new(
        net: Network,
        demand: DemandSpec,
        n: u32,
        encoders: BTreeMap<EdgeId, Gf2Matrix>,
        decoders: BTreeMap<(NodeId, SourceId), Gf2Matrix>,
    ) -> Result<Self> {
        demand.validate_against(&net)?;
        let dims = Dimensions::new(&net, &demand, n)?;
        for e in net.edges() {
            let m = encoders.get(&e.id).ok_or_else(|| Error::InvalidCode(format!("no encoder for edge {}", e.id)))?;
            let layout = input_layout(&net, &demand, &dims, &e.from);
            let expected = (dims.edge_bits[&e.id], layout.width);
            if (m.rows(), m.cols()) != expected {
                return Err(Error::InvalidCode(format!(
                    "encoder for edge {} is {}x{}, expected {}x{}",
                    e.id,
                    m.rows(),
                    m.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        if let Some(e) = encoders.keys().find(|e| net.edge(e).is_err()) {
            return Err(Error::InvalidCode(format!("encoder for unknown edge {e}")));
        }
        for (v, wanted) in demand.demands() {
            for s in wanted {
                let key = (v.clone(), s.clone());
                let m = decoders
                    .get(&key)
                    .ok_or_else(|| Error::InvalidCode(format!("no decoder for source {s} at node {v}")))?;
                let layout = input_layout(&net, &demand, &dims, v);
                let expected = (dims.source_bits[s], layout.width);
                if (m.rows(), m.cols()) != expected {
                    return Err(Error::InvalidCode(format!(
                        "decoder for source {s} at node {v} is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        expected.0,
                        expected.1
                    )));
                }
            }
        }
        if let Some((v, s)) = decoders.keys().find(|(v, s)| !demand.demanded_at(v).contains(s)) {
            return Err(Error::InvalidCode(format!("decoder for source {s} at node {v}, which does not demand it")));
        }
        Ok(LinearNetworkCode { net, demand, dims, encoders, decoders })
    }

    /// The code whose every encoder and decoder is the zero map.
    pub fn zero(net: Network, demand: DemandSpec, n: u32) -> Result<Self> {
        let dims = Dimensions::new(&net, &demand, n)?;
        let encoders = net
            .edges()
            .iter()
            .map(|e| {
                let w = input_layout(&net, &demand, &dims, &e.from).width;
                (e.id.clone(), Gf2Matrix::zeros(dims.edge_bits[&e.id], w))
            })
            .collect();
        let decoders = demand
            .demands()
            .iter()
            .flat_map(|(v, ss)| ss.iter().map(move |s| (v.clone(), s.clone())))
            .map(|(v, s)| {
                let w = input_layout(&net, &demand, &dims, &v).width;
                let m = Gf2Matrix::zeros(dims.source_bits[&s], w);
                ((v, s), m)
            })
            .collect();
        LinearNetworkCode::new(net, demand, n, encoders, decoders)
    }

    pub fn with_encoder(mut self, edge: &str, m: Gf2Matrix) -> Result<Self> {
        self.encoders.insert(edge.to_string(), m);
        LinearNetworkCode::new(self.net, self.demand, self.dims.n, self.encoders, self.decoders)
    }

    pub fn with_decoder(mut self, node: &str, source: &str, m: Gf2Matrix) -> Result<Self> {
        self.decoders.insert((node.to_string(), source.to_string()), m);
        LinearNetworkCode::new(self.net, self.demand, self.dims.n, self.encoders, self.decoders)
    }

    pub fn encoders(&self) -> &BTreeMap<EdgeId, Gf2Matrix> {
        &self.encoders
    }

    pub fn decoders(&self) -> &BTreeMap<(NodeId, SourceId), Gf2Matrix> {
        &self.decoders
    }

    pub fn layout(&self, node: &str) -> InputLayout {
        input_layout(&self.net, &self.demand, &self.dims, node)
    }

    /// Global matrix (over the concatenated message vector) of a node's input.
    fn global_input(&self, node: &str, edge_globals: &BTreeMap<EdgeId, Gf2Matrix>, total: usize) -> Gf2Matrix {
        let offsets = self.dims.source_offsets();
        let blocks: Vec<Gf2Matrix> = self
            .layout(node)
            .blocks
            .iter()
            .map(|b| match &b.key {
                InputKey::Source(s) => {
                    let (at, w) = offsets[s];
                    let mut sel = Gf2Matrix::zeros(w, total);
                    for i in 0..w {
                        sel.set(i, at + i, true);
                    }
                    sel
                }
                InputKey::Edge(e) => edge_globals[e].clone(),
            })
            .collect();
        Gf2Matrix::vstack(total, &blocks.iter().collect::<Vec<_>>()).expect("blocks share the message width")
    }

    /// Propagates local encoders in topological order into global maps.
    pub fn transfer_matrices(&self) -> TransferMatrices {
        let total = self.dims.total_message_bits();
        let mut globals: BTreeMap<EdgeId, Gf2Matrix> = BTreeMap::new();
        for e in self.net.edge_order() {
            let input = self.global_input(&e.from, &globals, total);
            let g = self.encoders[&e.id].mat_mul(&input).expect("encoder dimensions validated");
            globals.insert(e.id.clone(), g);
        }
        let decoders = self
            .decoders
            .iter()
            .map(|((v, s), d)| {
                let input = self.global_input(v, &globals, total);
                ((v.clone(), s.clone()), d.mat_mul(&input).expect("decoder dimensions validated"))
            })
            .collect();
        TransferMatrices { offsets: self.dims.source_offsets(), total, edges: globals, decoders }
    }

    /// Algebraic zero-error check: the global decoder map must select exactly
    /// the demanded source's bits. Cross-checked by simulation on the unit
    /// message tuples.
    pub fn check_decodable(&self) -> Result<BTreeMap<(NodeId, SourceId), bool>> {
        let tm = self.transfer_matrices();
        let verdict: BTreeMap<_, _> = tm
            .decoders
            .iter()
            .map(|(key, g)| (key.clone(), *g == tm.selector(&key.1)))
            .collect();
        let total = tm.total;
        let probes = (0..total).map(|i| BitVector::unit(total, i)).chain([BitVector::zeros(total)]);
        for probe in probes {
            let messages = split_messages(&self.dims, &probe);
            let trace = self.run(&messages)?;
            for (key, &ok) in &verdict {
                if ok && trace.reconstructions[key] != messages[&key.1] {
                    return Err(Error::InvalidCode(format!(
                        "simulation disagrees with transfer matrices at node {} source {}",
                        key.0, key.1
                    )));
                }
            }
        }
        Ok(verdict)
    }

    /// Replaces every decoder with a linear decoder recovering its source
    /// wherever one exists; others become zero maps.
    pub fn with_derived_decoders(&self) -> LinearNetworkCode {
        let tm = self.transfer_matrices();
        let mut decoders = BTreeMap::new();
        for key in self.decoders.keys() {
            let (v, s) = key;
            let input = self.global_input(v, &tm.edges, tm.total);
            let target = tm.selector(s);
            let gt = input.transpose();
            let rows: Option<Vec<BitVector>> =
                (0..target.rows()).map(|j| gt.solve(target.row(j)).expect("dimensions agree")).collect();
            let m = match rows {
                Some(rows) => Gf2Matrix::from_rows(input.rows(), rows).expect("solutions share the input width"),
                None => Gf2Matrix::zeros(target.rows(), input.rows()),
            };
            decoders.insert(key.clone(), m);
        }
        LinearNetworkCode { decoders, ..self.clone() }
    }

    /// The same code run `t` times side by side, at blocklength `t * n`.
    /// Each key's block is split into `t` consecutive copies.
    pub fn repeat(&self, t: u32) -> Result<LinearNetworkCode> {
        if t == 0 {
            return Err(Error::Blocklength { n: 0, what: "repetition factor".into() });
        }
        let n = self.dims.n * t;
        let dims = Dimensions::new(&self.net, &self.demand, n)?;
        let t = t as usize;
        let spread = |m: &Gf2Matrix, old: &InputLayout, new: &InputLayout| -> Gf2Matrix {
            let out = m.rows();
            let mut big = Gf2Matrix::zeros(out * t, new.width);
            for (ob, nb) in old.blocks.iter().zip(&new.blocks) {
                for c in 0..t {
                    for i in 0..out {
                        for j in 0..ob.width {
                            if m.get(i, ob.offset + j) {
                                big.set(c * out + i, nb.offset + c * ob.width + j, true);
                            }
                        }
                    }
                }
            }
            big
        };
        let encoders = self
            .encoders
            .iter()
            .map(|(e, m)| {
                let tail = &self.net.edge(e).expect("encoders validated").from;
                let old = self.layout(tail);
                let new = input_layout(&self.net, &self.demand, &dims, tail);
                (e.clone(), spread(m, &old, &new))
            })
            .collect();
        let decoders = self
            .decoders
            .iter()
            .map(|((v, s), m)| {
                let old = self.layout(v);
                let new = input_layout(&self.net, &self.demand, &dims, v);
                ((v.clone(), s.clone()), spread(m, &old, &new))
            })
            .collect();
        LinearNetworkCode::new(self.net.clone(), self.demand.clone(), n, encoders, decoders)
    }

    pub fn to_doc(&self) -> CodeDoc {
        CodeDoc {
            blocklength: self.dims.n,
            encoders: self.encoders.iter().map(|(e, m)| (e.clone(), m.to_text())).collect(),
            decoders: self.decoders.iter().map(|((v, s), m)| (format!("{v}:{s}"), m.to_text())).collect(),
        }
    }

    pub fn from_doc(net: Network, demand: DemandSpec, doc: &CodeDoc) -> Result<Self> {
        let n = doc.blocklength;
        let dims = Dimensions::new(&net, &demand, n)?;
        let parse = |text: &str, rows: usize, cols: usize, path: String| -> Result<Gf2Matrix> {
            let m = Gf2Matrix::from_text(text).map_err(|e| Error::parse(path.clone(), e.to_string()))?;
            if m.rows() == 0 && (rows == 0 || cols == 0) {
                return Ok(Gf2Matrix::zeros(rows, cols));
            }
            Ok(m)
        };
        let mut encoders = BTreeMap::new();
        for (e, text) in &doc.encoders {
            let edge = net.edge(e)?;
            let w = input_layout(&net, &demand, &dims, &edge.from).width;
            encoders.insert(e.clone(), parse(text, dims.edge_bits[e], w, format!("encoders.{e}"))?);
        }
        let mut decoders = BTreeMap::new();
        for (key, text) in &doc.decoders {
            let (v, s) = key
                .rsplit_once(':')
                .ok_or_else(|| Error::parse(format!("decoders.{key}"), "expected \"node:source\""))?;
            let rows = *dims.source_bits.get(s).ok_or_else(|| Error::UnknownSource(s.to_string()))?;
            let w = input_layout(&net, &demand, &dims, v).width;
            decoders.insert((v.to_string(), s.to_string()), parse(text, rows, w, format!("decoders.{key}"))?);
        }
        LinearNetworkCode::new(net, demand, n, encoders, decoders)
    }

    /// Rebuilds the code on a new network/demand by re-expressing every old
    /// input bit as a GF(2) combination of new input bits.
    ///
    /// `map` receives an old input key and bit index and returns the new keys
    /// and bit indices whose XOR equals it; an empty list means the bit is
    /// constant zero. Encoders of `edge_rows` are replaced by the given row
    /// selection of an old encoder.
    pub(crate) fn reexpress(
        &self,
        net: Network,
        demand: DemandSpec,
        n: u32,
        map: &InputMap,
        new_encoder_rows: &dyn Fn(&EdgeId) -> (EdgeId, usize, usize),
        decoder_left: &dyn Fn(&NodeId, &SourceId) -> Option<Gf2Matrix>,
    ) -> Result<LinearNetworkCode> {
        let dims = Dimensions::new(&net, &demand, n)?;
        let convert = |m: &Gf2Matrix, old: &InputLayout, new: &InputLayout| -> Result<Gf2Matrix> {
            let mut out = Gf2Matrix::zeros(m.rows(), new.width);
            for ob in &old.blocks {
                for j in 0..ob.width {
                    for (key, bit) in map(&ob.key, j) {
                        let nb = new
                            .block(&key)
                            .ok_or_else(|| Error::InvalidCode(format!("mapped input {key:?} missing at node")))?;
                        for r in 0..m.rows() {
                            if m.get(r, ob.offset + j) {
                                let cur = out.get(r, nb.offset + bit);
                                out.set(r, nb.offset + bit, !cur);
                            }
                        }
                    }
                }
            }
            Ok(out)
        };
        let mut encoders = BTreeMap::new();
        for new_edge in net.edges() {
            let (old_edge, start, rows) = new_encoder_rows(&new_edge.id);
            let old = self.encoders.get(&old_edge).ok_or_else(|| Error::UnknownEdge(old_edge.clone()))?;
            let tail = &new_edge.from;
            let m = convert(
                &old.row_block(start, rows),
                &self.layout(tail),
                &input_layout(&net, &demand, &dims, tail),
            )?;
            encoders.insert(new_edge.id.clone(), m);
        }
        let mut decoders = BTreeMap::new();
        for ((v, s), m) in &self.decoders {
            let mut d = convert(m, &self.layout(v), &input_layout(&net, &demand, &dims, v))?;
            if let Some(left) = decoder_left(v, s) {
                d = left.mat_mul(&d)?;
            }
            decoders.insert((v.clone(), s.clone()), d);
        }
        LinearNetworkCode::new(net, demand, n, encoders, decoders)
    }
}

impl NetworkCode for LinearNetworkCode {
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
        check_messages(&self.dims, messages)?;
        let mut edges = BTreeMap::new();
        for e in self.net.edge_order() {
            let x = gather_inputs(&self.layout(&e.from), messages, &edges);
            let w = self.encoders[&e.id].mat_vec(&x)?;
            edges.insert(e.id.clone(), w);
        }
        let mut reconstructions = BTreeMap::new();
        for ((v, s), d) in &self.decoders {
            let x = gather_inputs(&self.layout(v), messages, &edges);
            reconstructions.insert((v.clone(), s.clone()), d.mat_vec(&x)?);
        }
        Ok(Trace { edges, reconstructions })
    }
}

/// Global maps of a linear code: `W_e = G_e m` for the concatenated message
/// vector `m`, and the composed decoders.
#[derive(Debug, Clone)]
pub struct TransferMatrices {
    offsets: BTreeMap<SourceId, (usize, usize)>,
    total: usize,
    pub edges: BTreeMap<EdgeId, Gf2Matrix>,
    pub decoders: BTreeMap<(NodeId, SourceId), Gf2Matrix>,
}

impl TransferMatrices {
    /// `A_{s,e}`: the `n C_e x n R_s` block of edge `e` acting on source `s`.
    pub fn block(&self, source: &str, edge: &str) -> Result<Gf2Matrix> {
        let &(at, w) = self.offsets.get(source).ok_or_else(|| Error::UnknownSource(source.to_string()))?;
        let g = self.edges.get(edge).ok_or_else(|| Error::UnknownEdge(edge.to_string()))?;
        Ok(g.column_block(at, w))
    }

    pub fn total_message_bits(&self) -> usize {
        self.total
    }

    /// The map picking source `s`'s bits out of the message vector.
    pub fn selector(&self, source: &str) -> Gf2Matrix {
        let (at, w) = self.offsets[source];
        let mut sel = Gf2Matrix::zeros(w, self.total);
        for i in 0..w {
            sel.set(i, at + i, true);
        }
        sel
    }

    /// `W_e = sum_s A_{s,e} M_s` for every edge.
    pub fn predict(&self, messages: &BTreeMap<SourceId, BitVector>) -> Result<BTreeMap<EdgeId, BitVector>> {
        let all = BitVector::concat(self.offsets.keys().map(|s| &messages[s]));
        self.edges.iter().map(|(e, g)| Ok((e.clone(), g.mat_vec(&all)?))).collect()
    }
}

/// JSON form of a linear code. Matrices are newline-separated `0`/`1` rows;
/// an empty string stands for a matrix with a zero dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDoc {
    pub blocklength: u32,
    pub encoders: BTreeMap<String, String>,
    pub decoders: BTreeMap<String, String>,
}

/// Runs `code` on every message tuple (`2^bits` of them) and reports, per
/// demanded pair, whether the reconstruction was always exact.
pub fn decodable_by_simulation(code: &dyn NetworkCode, max_bits: usize) -> Result<BTreeMap<(NodeId, SourceId), bool>> {
    let dims = code.dimensions();
    let total = dims.total_message_bits();
    if total > max_bits {
        return Err(Error::SizeLimit(format!("{total} message bits exceeds exhaustive limit {max_bits}")));
    }
    let mut verdict: BTreeMap<(NodeId, SourceId), bool> = code
        .demand()
        .demands()
        .iter()
        .flat_map(|(v, ss)| ss.iter().map(move |s| ((v.clone(), s.clone()), true)))
        .collect();
    for index in 0..1u64 << total {
        let messages = split_messages(dims, &BitVector::from_u64(index, total));
        let trace = code.run(&messages)?;
        for (key, ok) in verdict.iter_mut() {
            if trace.reconstructions.get(key) != Some(&messages[&key.1]) {
                *ok = false;
            }
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::Rational;

    #[test]
    fn relay_chain_transfer_is_identity() {
        let code = fixtures::relay_chain_code();
        let tm = code.transfer_matrices();
        for e in ["e1", "e2"] {
            assert_eq!(tm.block("1", e).unwrap(), Gf2Matrix::identity(1));
        }
        let m: BTreeMap<_, _> = [("1".to_string(), BitVector::from_u64(1, 1))].into();
        let trace = code.run(&m).unwrap();
        assert_eq!(trace.reconstructions[&("v2".to_string(), "1".to_string())], m["1"]);
        assert!(code.check_decodable().unwrap().values().all(|&b| b));
    }

    #[test]
    fn butterfly_bottleneck_blocks() {
        let code = fixtures::butterfly_xor_code();
        let tm = code.transfer_matrices();
        assert_eq!(tm.block("1", "cd").unwrap(), Gf2Matrix::identity(1));
        assert_eq!(tm.block("2", "cd").unwrap(), Gf2Matrix::identity(1));
        assert!(code.check_decodable().unwrap().values().all(|&b| b));
        assert!(decodable_by_simulation(&code, 12).unwrap().values().all(|&b| b));
    }

    #[test]
    fn ignored_source_has_zero_block() {
        let code = fixtures::butterfly_xor_code();
        let zeroed = code.clone().with_encoder("s1c", Gf2Matrix::zeros(1, 1)).unwrap();
        assert!(zeroed.transfer_matrices().block("1", "cd").unwrap().is_zero());
    }

    #[test]
    fn zero_decoder_is_not_decodable() {
        let code = fixtures::relay_chain_code();
        let broken = code.with_decoder("v2", "1", Gf2Matrix::zeros(1, 1)).unwrap();
        assert_eq!(broken.check_decodable().unwrap().values().copied().collect::<Vec<_>>(), [false]);
    }

    #[test]
    fn all_zero_messages_give_zero_words() {
        let code = fixtures::butterfly_xor_code();
        let m = split_messages(code.dimensions(), &BitVector::zeros(2));
        let trace = code.run(&m).unwrap();
        assert!(trace.edges.values().all(BitVector::is_zero));
    }

    #[test]
    fn wrong_encoder_shape_rejected() {
        let code = fixtures::relay_chain_code();
        assert!(code.with_encoder("e1", Gf2Matrix::zeros(2, 1)).is_err());
    }

    #[test]
    fn inadmissible_blocklength() {
        let (net, demand) = fixtures::relay_chain();
        let demand = demand.with_rates(&[Rational::new(1, 2)]).unwrap();
        assert!(matches!(LinearNetworkCode::zero(net, demand, 1), Err(Error::Blocklength { .. })));
    }

    #[test]
    fn derived_decoders_recover_butterfly() {
        let code = fixtures::butterfly_xor_code();
        let (net, demand) = (code.network().clone(), code.demand().clone());
        let stripped = LinearNetworkCode::new(
            net,
            demand,
            1,
            code.encoders().clone(),
            code.decoders().iter().map(|(k, m)| (k.clone(), Gf2Matrix::zeros(m.rows(), m.cols()))).collect(),
        )
        .unwrap();
        assert!(stripped.with_derived_decoders().check_decodable().unwrap().values().all(|&b| b));
    }

    #[test]
    fn repetition_preserves_decodability() {
        let code = fixtures::butterfly_xor_code().repeat(2).unwrap();
        assert_eq!(code.blocklength(), 2);
        assert!(code.check_decodable().unwrap().values().all(|&b| b));
        assert!(decodable_by_simulation(&code, 12).unwrap().values().all(|&b| b));
    }

    #[test]
    fn doc_round_trip() {
        let code = fixtures::butterfly_xor_code();
        let doc = code.to_doc();
        let text = serde_json::to_string(&doc).unwrap();
        let back: CodeDoc = serde_json::from_str(&text).unwrap();
        let again = LinearNetworkCode::from_doc(code.network().clone(), code.demand().clone(), &back).unwrap();
        assert_eq!(again, code);
    }
}
