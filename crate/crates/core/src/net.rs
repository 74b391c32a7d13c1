//! Acyclic networks of error-free bit pipes, source placement and demands.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::flow::FlowGraph;
use crate::{rational, Error, Rational, Result, Scalar};

/// Node and edge identifiers are opaque strings ordered lexicographically.
pub type NodeId = String;
pub type EdgeId = String;
pub type SourceId = String;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub from: NodeId,
    pub to: NodeId,
    /// Bits per network use.
    pub capacity: Rational,
}

impl Edge {
    pub fn new(id: impl Into<String>, from: impl Into<String>, to: impl Into<String>, capacity: Rational) -> Self {
        Edge { id: id.into(), from: from.into(), to: to.into(), capacity }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, kind: &str, detail: String) {
        self.violations.push(Violation { kind: kind.into(), detail });
        self.ok = false;
    }
}

/// Checks the raw parts of a network without building it.
pub fn validate_network(nodes: &[NodeId], edges: &[Edge]) -> ValidationReport {
    let mut report = ValidationReport { ok: true, violations: Vec::new() };
    let mut node_set = BTreeSet::new();
    for v in nodes {
        if !node_set.insert(v.as_str()) {
            report.push("duplicate node", v.clone());
        }
    }
    let mut edge_ids = BTreeSet::new();
    for e in edges {
        if !edge_ids.insert(e.id.as_str()) {
            report.push("duplicate edge id", e.id.clone());
        }
        for end in [&e.from, &e.to] {
            if !node_set.contains(end.as_str()) {
                report.push("dangling endpoint", format!("edge {} references undeclared node {end}", e.id));
            }
        }
        if e.capacity < Rational::zero() {
            report.push("negative capacity", format!("edge {} has capacity {}", e.id, rational::format(&e.capacity)));
        }
    }
    if let Err(Error::Cycle(v)) = topological_order(nodes, edges) {
        report.push("cycle", format!("node {v} lies on a directed cycle"));
    }
    report
}

/// Kahn's algorithm, always releasing the smallest ready node id first.
/// Edges with undeclared endpoints are ignored.
pub fn topological_order(nodes: &[NodeId], edges: &[Edge]) -> Result<Vec<NodeId>> {
    let known: BTreeSet<&str> = nodes.iter().map(String::as_str).collect();
    let mut indegree: BTreeMap<&str, usize> = known.iter().map(|&v| (v, 0)).collect();
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in edges.iter().filter(|e| known.contains(e.from.as_str()) && known.contains(e.to.as_str())) {
        *indegree.get_mut(e.to.as_str()).expect("known node") += 1;
        succ.entry(e.from.as_str()).or_default().push(e.to.as_str());
    }
    let mut ready: BTreeSet<&str> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let mut order = Vec::with_capacity(known.len());
    while let Some(v) = ready.pop_first() {
        order.push(v.to_string());
        for &w in succ.get(v).map(Vec::as_slice).unwrap_or(&[]) {
            let d = indegree.get_mut(w).expect("known node");
            *d -= 1;
            if *d == 0 {
                ready.insert(w);
            }
        }
    }
    if order.len() < known.len() {
        let stuck = indegree.iter().find(|(_, &d)| d > 0).map(|(&v, _)| v).unwrap_or_default();
        return Err(Error::Cycle(stuck.to_string()));
    }
    Ok(order)
}

/// A validated directed acyclic graph with rational capacities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    name: String,
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    order: Vec<NodeId>,
}

/// An edge cut: every edge leaving `source_side`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub source_side: BTreeSet<NodeId>,
    pub crossing_edges: BTreeSet<EdgeId>,
    #[serde(with = "rational::text")]
    pub capacity: Rational,
}

pub const MAX_CUT_ENUMERATION_NODES: usize = 20;

impl Network {
    pub fn new(name: impl Into<String>, nodes: Vec<NodeId>, edges: Vec<Edge>) -> Result<Self> {
        let report = validate_network(&nodes, &edges);
        if !report.ok {
            let msg = report.violations.iter().map(|v| format!("{}: {}", v.kind, v.detail)).collect::<Vec<_>>();
            return Err(Error::InvalidNetwork(msg.join("; ")));
        }
        let order = topological_order(&nodes, &edges)?;
        let mut edges = edges;
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Network { name: name.into(), nodes, edges, order })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Edges sorted by id.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_node(&self, v: &str) -> bool {
        self.nodes.iter().any(|n| n == v)
    }

    pub fn edge(&self, id: &str) -> Result<&Edge> {
        self.edges.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// `In(v)`, sorted by edge id.
    pub fn in_edges(&self, v: &str) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.to == v).collect()
    }

    /// `Out(v)`, sorted by edge id.
    pub fn out_edges(&self, v: &str) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.from == v).collect()
    }

    pub fn topological_order(&self) -> &[NodeId] {
        &self.order
    }

    /// Edges in evaluation order: by tail position in the topological order,
    /// then by id. Every edge comes after all edges entering its tail.
    pub fn edge_order(&self) -> Vec<&Edge> {
        self.order.iter().flat_map(|v| self.out_edges(v)).collect()
    }

    /// The network with `C_e` lowered by `delta`; an edge reaching zero is removed.
    pub fn reduce_edge(&self, edge: &str, delta: Rational) -> Result<Network> {
        let target = self.edge(edge)?;
        if delta < Rational::zero() {
            return Err(Error::InvalidDelta(format!("negative delta {}", rational::format(&delta))));
        }
        if delta > target.capacity {
            return Err(Error::DeltaExceedsCapacity {
                edge: edge.to_string(),
                delta: rational::format(&delta),
                capacity: rational::format(&target.capacity),
            });
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.id != edge {
                    return Some(e.clone());
                }
                let left = e.capacity - delta;
                (!left.is_zero()).then(|| Edge { capacity: left, ..e.clone() })
            })
            .collect();
        Network::new(self.name.clone(), self.nodes.clone(), edges)
    }

    /// Same nodes, new edge list; used by constructions that rewire the graph.
    pub fn with_edges(&self, edges: Vec<Edge>) -> Result<Network> {
        Network::new(self.name.clone(), self.nodes.clone(), edges)
    }

    pub fn cut(&self, source_side: &BTreeSet<NodeId>) -> Cut {
        let crossing: Vec<&Edge> = self
            .edges
            .iter()
            .filter(|e| source_side.contains(&e.from) && !source_side.contains(&e.to))
            .collect();
        Cut {
            source_side: source_side.clone(),
            crossing_edges: crossing.iter().map(|e| e.id.clone()).collect(),
            capacity: crossing.iter().map(|e| e.capacity).sum(),
        }
    }

    fn check_terminals(&self, src: &BTreeSet<NodeId>, dst: &BTreeSet<NodeId>) -> Result<()> {
        for v in src.iter().chain(dst) {
            if !self.has_node(v) {
                return Err(Error::UnknownNode(v.clone()));
            }
        }
        if let Some(v) = src.intersection(dst).next() {
            return Err(Error::OverlappingTerminals(v.clone()));
        }
        Ok(())
    }

    /// Every cut with `src` on the source side and `dst` on the other,
    /// ordered by the bitmask of free nodes (free nodes sorted by id).
    pub fn enumerate_cuts(&self, src: &BTreeSet<NodeId>, dst: &BTreeSet<NodeId>) -> Result<Vec<Cut>> {
        if self.nodes.len() > MAX_CUT_ENUMERATION_NODES {
            return Err(Error::SizeLimit(format!(
                "cut enumeration supports at most {MAX_CUT_ENUMERATION_NODES} nodes, network has {}",
                self.nodes.len()
            )));
        }
        self.check_terminals(src, dst)?;
        let mut free: Vec<&NodeId> = self.nodes.iter().filter(|v| !src.contains(*v) && !dst.contains(*v)).collect();
        free.sort();
        let cuts = (0u64..1 << free.len())
            .map(|mask| {
                let mut side = src.clone();
                side.extend(free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| (*v).clone()));
                self.cut(&side)
            })
            .collect();
        Ok(cuts)
    }

    /// Exact max-flow from the node set `src` to the node set `dst`.
    pub fn max_flow(&self, src: &BTreeSet<NodeId>, dst: &BTreeSet<NodeId>) -> Result<Rational> {
        self.max_flow_with(src, dst, |e| e.capacity)
    }

    /// Max-flow with capacities mapped into any scalar type.
    pub fn max_flow_with<T: Scalar>(
        &self,
        src: &BTreeSet<NodeId>,
        dst: &BTreeSet<NodeId>,
        capacity: impl Fn(&Edge) -> T,
    ) -> Result<T> {
        self.check_terminals(src, dst)?;
        if src.is_empty() || dst.is_empty() {
            return Ok(T::zero());
        }
        let index: BTreeMap<&str, usize> = self.nodes.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut graph = FlowGraph::new(self.nodes.len());
        let mut unbounded = T::one();
        for e in &self.edges {
            let c = capacity(e);
            unbounded = unbounded + c;
            graph.add_arc(index[e.from.as_str()], index[e.to.as_str()], c);
        }
        let s = graph.add_node();
        let t = graph.add_node();
        for v in src {
            graph.add_arc(s, index[v.as_str()], unbounded);
        }
        for v in dst {
            graph.add_arc(index[v.as_str()], t, unbounded);
        }
        Ok(graph.max_flow(s, t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    pub id: SourceId,
    pub node: NodeId,
    /// `R_s`, bits per network use.
    pub rate: Rational,
}

impl Source {
    pub fn new(id: impl Into<String>, node: impl Into<String>, rate: Rational) -> Self {
        Source { id: id.into(), node: node.into(), rate }
    }
}

/// Sources with their rates and availability, plus per-node demands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandSpec {
    sources: Vec<Source>,
    demands: BTreeMap<NodeId, BTreeSet<SourceId>>,
}

impl DemandSpec {
    pub fn new(mut sources: Vec<Source>, demands: BTreeMap<NodeId, BTreeSet<SourceId>>) -> Result<Self> {
        sources.sort_by(|a, b| a.id.cmp(&b.id));
        for w in sources.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InvalidDemand(format!("source {} declared twice", w[0].id)));
            }
        }
        if let Some(s) = sources.iter().find(|s| s.rate < Rational::zero()) {
            return Err(Error::InvalidDemand(format!("source {} has negative rate", s.id)));
        }
        for (v, wanted) in &demands {
            if let Some(s) = wanted.iter().find(|s| !sources.iter().any(|x| &x.id == *s)) {
                return Err(Error::InvalidDemand(format!("node {v} demands undeclared source {s}")));
            }
        }
        let demands = demands.into_iter().filter(|(_, w)| !w.is_empty()).collect();
        Ok(DemandSpec { sources, demands })
    }

    /// Checks that every referenced node exists in `net`.
    pub fn validate_against(&self, net: &Network) -> Result<()> {
        for s in &self.sources {
            if !net.has_node(&s.node) {
                return Err(Error::InvalidDemand(format!("source {} placed at unknown node {}", s.id, s.node)));
            }
        }
        for v in self.demands.keys() {
            if !net.has_node(v) {
                return Err(Error::InvalidDemand(format!("demand at unknown node {v}")));
            }
        }
        Ok(())
    }

    /// Sources sorted by id.
    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    pub fn source(&self, id: &str) -> Result<&Source> {
        self.sources.iter().find(|s| s.id == id).ok_or_else(|| Error::UnknownSource(id.to_string()))
    }

    pub fn source_ids(&self) -> Vec<SourceId> {
        self.sources.iter().map(|s| s.id.clone()).collect()
    }

    pub fn source_index(&self, id: &str) -> Result<usize> {
        self.sources.iter().position(|s| s.id == id).ok_or_else(|| Error::UnknownSource(id.to_string()))
    }

    pub fn rates(&self) -> Vec<Rational> {
        self.sources.iter().map(|s| s.rate).collect()
    }

    /// `sigma(v)`: sources available at `v`, sorted by id.
    pub fn sources_at(&self, v: &str) -> Vec<&Source> {
        self.sources.iter().filter(|s| s.node == v).collect()
    }

    /// `beta(v)`.
    pub fn demanded_at(&self, v: &str) -> BTreeSet<SourceId> {
        self.demands.get(v).cloned().unwrap_or_default()
    }

    pub fn demands(&self) -> &BTreeMap<NodeId, BTreeSet<SourceId>> {
        &self.demands
    }

    /// Nodes with a nonempty demand set.
    pub fn sinks(&self) -> Vec<NodeId> {
        self.demands.keys().cloned().collect()
    }

    /// `alpha(A)` for a set of source ids.
    pub fn nodes_of(&self, ids: &BTreeSet<SourceId>) -> BTreeSet<NodeId> {
        self.sources.iter().filter(|s| ids.contains(&s.id)).map(|s| s.node.clone()).collect()
    }

    pub fn with_rates(&self, rates: &[Rational]) -> Result<DemandSpec> {
        if rates.len() != self.sources.len() {
            return Err(Error::Dimension(format!("{} rates for {} sources", rates.len(), self.sources.len())));
        }
        let sources =
            self.sources.iter().zip(rates).map(|(s, &rate)| Source { rate, ..s.clone() }).collect();
        DemandSpec::new(sources, self.demands.clone())
    }

    pub fn with_sources_at(&self, node: &str) -> Result<DemandSpec> {
        let sources = self.sources.iter().map(|s| Source { node: node.to_string(), ..s.clone() }).collect();
        DemandSpec::new(sources, self.demands.clone())
    }

    pub fn with_demands(&self, demands: BTreeMap<NodeId, BTreeSet<SourceId>>) -> Result<DemandSpec> {
        DemandSpec::new(self.sources.clone(), demands)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub from: String,
    pub to: String,
    pub capacity: RationalText,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceDoc {
    pub id: String,
    pub node: String,
    pub rate: RationalText,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

/// A rational as it appears in a document: kept verbatim until validated so
/// errors can name the offending field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Int(i64),
}

impl RationalText {
    pub fn parse_at(&self, path: &str) -> Result<Rational> {
        match self {
            RationalText::Text(t) => rational::parse_at(t, path),
            RationalText::Int(i) => Ok(Rational::from_integer(*i)),
        }
    }
}

impl From<&Rational> for RationalText {
    fn from(r: &Rational) -> Self {
        RationalText::Text(rational::format(r))
    }
}

/// JSON form of a network together with its sources and demands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub sources: Vec<SourceDoc>,
    #[serde(default)]
    pub demands: BTreeMap<String, Vec<String>>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

impl NetworkDoc {
    pub fn from_json(text: &str) -> Result<NetworkDoc> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Unknown fields, which are preserved on output.
    pub fn warnings(&self) -> Vec<String> {
        let mut out: Vec<String> = self.extra.keys().map(|k| format!("unknown field `{k}` at top level")).collect();
        for (i, e) in self.edges.iter().enumerate() {
            out.extend(e.extra.keys().map(|k| format!("unknown field `{k}` at edges[{i}]")));
        }
        for (i, s) in self.sources.iter().enumerate() {
            out.extend(s.extra.keys().map(|k| format!("unknown field `{k}` at sources[{i}]")));
        }
        out
    }

    pub fn raw_edges(&self) -> Result<Vec<Edge>> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                Ok(Edge::new(&e.id, &e.from, &e.to, e.capacity.parse_at(&format!("edges[{i}].capacity"))?))
            })
            .collect()
    }

    pub fn build(&self) -> Result<(Network, DemandSpec)> {
        let net = Network::new(self.name.clone().unwrap_or_default(), self.nodes.clone(), self.raw_edges()?)?;
        let sources = self
            .sources
            .iter()
            .enumerate()
            .map(|(i, s)| Ok(Source::new(&s.id, &s.node, s.rate.parse_at(&format!("sources[{i}].rate"))?)))
            .collect::<Result<Vec<_>>>()?;
        let demands = self.demands.iter().map(|(v, ss)| (v.clone(), ss.iter().cloned().collect())).collect();
        let demand = DemandSpec::new(sources, demands)?;
        demand.validate_against(&net)?;
        Ok((net, demand))
    }

    pub fn from_parts(net: &Network, demand: &DemandSpec) -> NetworkDoc {
        NetworkDoc {
            name: (!net.name().is_empty()).then(|| net.name().to_string()),
            nodes: net.nodes().to_vec(),
            edges: net
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    from: e.from.clone(),
                    to: e.to.clone(),
                    capacity: (&e.capacity).into(),
                    extra: BTreeMap::new(),
                })
                .collect(),
            sources: demand
                .sources()
                .iter()
                .map(|s| SourceDoc { id: s.id.clone(), node: s.node.clone(), rate: (&s.rate).into(), extra: BTreeMap::new() })
                .collect(),
            demands: demand.demands().iter().map(|(v, ss)| (v.clone(), ss.iter().cloned().collect())).collect(),
            extra: BTreeMap::new(),
        }
    }
}

/// Convenience for building node sets from string literals.
pub fn node_set<I, S>(items: I) -> BTreeSet<NodeId>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    items.into_iter().map(Into::into).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn nodes(names: &[&str]) -> Vec<NodeId> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn diamond() -> Network {
        Network::new(
            "diamond",
            nodes(&["v4", "v3", "v2", "v1"]),
            vec![
                Edge::new("a", "v1", "v2", r(1)),
                Edge::new("b", "v1", "v3", r(1)),
                Edge::new("c", "v2", "v4", r(1)),
                Edge::new("d", "v3", "v4", r(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn smallest_network_is_valid() {
        let report = validate_network(&nodes(&["v1", "v2"]), &[Edge::new("e", "v1", "v2", r(1))]);
        assert!(report.ok);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn two_cycle_is_reported() {
        let edges = [Edge::new("a", "v1", "v2", r(1)), Edge::new("b", "v2", "v1", r(1))];
        let report = validate_network(&nodes(&["v1", "v2"]), &edges);
        assert!(!report.ok);
        assert_eq!(report.violations[0].kind, "cycle");
        assert!(Network::new("", nodes(&["v1", "v2"]), edges.to_vec()).is_err());
    }

    #[test]
    fn negative_capacity_and_dangling_endpoint() {
        let report = validate_network(&nodes(&["v1", "v2"]), &[Edge::new("e", "v1", "v2", r(-1)), Edge::new("f", "v1", "v9", r(1))]);
        let kinds: Vec<&str> = report.violations.iter().map(|v| v.kind.as_str()).collect();
        assert_eq!(kinds, ["negative capacity", "dangling endpoint"]);
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let report = validate_network(&nodes(&["v1"]), &[Edge::new("e", "v1", "v1", r(1))]);
        assert_eq!(report.violations[0].kind, "cycle");
    }

    #[test]
    fn topological_orders() {
        let chain = Network::new(
            "",
            nodes(&["v3", "v1", "v2"]),
            vec![Edge::new("x", "v2", "v3", r(1)), Edge::new("y", "v1", "v2", r(1))],
        )
        .unwrap();
        assert_eq!(chain.topological_order(), ["v1", "v2", "v3"]);
        assert_eq!(diamond().topological_order(), ["v1", "v2", "v3", "v4"]);
        let cyclic = [Edge::new("a", "v1", "v2", r(1)), Edge::new("b", "v2", "v1", r(1))];
        assert!(matches!(topological_order(&nodes(&["v1", "v2"]), &cyclic), Err(Error::Cycle(_))));
    }

    #[test]
    fn reduce_edge_cases() {
        let net = Network::new("", nodes(&["s", "t"]), vec![Edge::new("e", "s", "t", r(3))]).unwrap();
        assert_eq!(net.reduce_edge("e", r(1)).unwrap().edge("e").unwrap().capacity, r(2));
        assert!(net.reduce_edge("e", r(3)).unwrap().edge("e").is_err());
        assert!(matches!(net.reduce_edge("e", r(4)), Err(Error::DeltaExceedsCapacity { .. })));
        assert!(net.reduce_edge("missing", r(0)).is_err());
        let twice = net.reduce_edge("e", Rational::new(1, 2)).unwrap().reduce_edge("e", Rational::new(3, 2)).unwrap();
        assert_eq!(twice, net.reduce_edge("e", r(2)).unwrap());
    }

    #[test]
    fn single_edge_cut_and_flow() {
        let net = Network::new("", nodes(&["s", "t"]), vec![Edge::new("e", "s", "t", r(3))]).unwrap();
        let (s, t) = (node_set(["s"]), node_set(["t"]));
        let cuts = net.enumerate_cuts(&s, &t).unwrap();
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].capacity, r(3));
        assert_eq!(net.max_flow(&s, &t).unwrap(), r(3));
    }

    #[test]
    fn parallel_and_series_edges() {
        let par = Network::new("", nodes(&["s", "t"]), vec![Edge::new("a", "s", "t", r(1)), Edge::new("b", "s", "t", r(2))])
            .unwrap();
        let (s, t) = (node_set(["s"]), node_set(["t"]));
        let min_cut = par.enumerate_cuts(&s, &t).unwrap().into_iter().map(|c| c.capacity).min().unwrap();
        assert_eq!(min_cut, r(3));
        let series = Network::new(
            "",
            nodes(&["s", "m", "t"]),
            vec![Edge::new("a", "s", "m", r(2)), Edge::new("b", "m", "t", r(1))],
        )
        .unwrap();
        assert_eq!(series.max_flow(&s, &t).unwrap(), r(1));
        assert_eq!(series.max_flow_with(&s, &t, |e| e.capacity.to_integer()).unwrap(), 1i64);
    }

    #[test]
    fn overlapping_terminals_rejected() {
        let net = diamond();
        assert!(matches!(
            net.max_flow(&node_set(["v1"]), &node_set(["v1", "v4"])),
            Err(Error::OverlappingTerminals(_))
        ));
    }

    #[test]
    fn cut_enumeration_size_limit() {
        let names: Vec<NodeId> = (0..21).map(|i| format!("n{i:02}")).collect();
        let net = Network::new("", names, vec![]).unwrap();
        assert!(matches!(
            net.enumerate_cuts(&node_set(["n00"]), &node_set(["n20"])),
            Err(Error::SizeLimit(_))
        ));
    }

    #[test]
    fn demand_spec_invariants() {
        let mut demands = BTreeMap::new();
        demands.insert("t".to_string(), ["2".to_string()].into());
        let err = DemandSpec::new(vec![Source::new("1", "s", r(1))], demands).unwrap_err();
        assert!(err.to_string().contains("undeclared"));
        let dup = DemandSpec::new(vec![Source::new("1", "s", r(1)), Source::new("1", "t", r(1))], BTreeMap::new());
        assert!(dup.is_err());
    }

    #[test]
    fn doc_reports_field_path_for_bad_rational() {
        let text = r#"{"nodes":["s","t"],"edges":[{"id":"e","from":"s","to":"t","capacity":"3/0"}]}"#;
        let doc = NetworkDoc::from_json(text).unwrap();
        let err = doc.build().unwrap_err().to_string();
        assert!(err.contains("edges[0].capacity"), "{err}");
    }

    #[test]
    fn doc_preserves_unknown_fields() {
        let text = r#"{"nodes":["s","t"],"edges":[{"id":"e","from":"s","to":"t","capacity":1,"color":"red"}],"owner":"lab"}"#;
        let doc = NetworkDoc::from_json(text).unwrap();
        assert_eq!(doc.warnings().len(), 2);
        let again = NetworkDoc::from_json(&doc.to_json()).unwrap();
        assert_eq!(again, doc);
        assert!(doc.to_json().contains("owner"));
    }
}
