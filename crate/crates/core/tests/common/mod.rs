//! Random instances and brute-force references shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use netcode::code::{LinearNetworkCode, NetworkCode};
use netcode::gf2::{BitVector, Gf2Matrix};
use netcode::net::{DemandSpec, Edge, Network, Source};
use netcode::Rational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// A random DAG on `v0 .. v{k-1}` with edges only from lower to higher
/// index. Capacities are `bits / n` with `bits` in `1..=max_bits`, so every
/// edge carries a whole number of bits at blocklength `n`.
pub fn random_dag(rng: &mut TestRng, max_nodes: usize, max_edges: usize, n: u32, max_bits: i64) -> Network {
    let k = rng.gen_range(3..=max_nodes);
    let nodes: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    let m = rng.gen_range(k - 1..=max_edges.max(k - 1));
    let mut edges = Vec::with_capacity(m);
    for j in 0..m {
        let (from, to) = if j < k - 1 {
            (rng.gen_range(0..=j), j + 1)
        } else {
            let a = rng.gen_range(0..k - 1);
            (a, rng.gen_range(a + 1..k))
        };
        let capacity = Rational::new(rng.gen_range(1..=max_bits), n as i64);
        edges.push(Edge::new(format!("e{j}"), &nodes[from], &nodes[to], capacity));
    }
    Network::new("random", nodes, edges).expect("forward edges form a DAG")
}

/// Like [`random_dag`] but capacities may also be zero.
pub fn random_dag_with_zeros(rng: &mut TestRng, max_nodes: usize, max_edges: usize) -> Network {
    let net = random_dag(rng, max_nodes, max_edges, 2, 4);
    let edges = net
        .edges()
        .iter()
        .map(|e| {
            let c = if rng.gen_bool(0.15) { r(0) } else { e.capacity };
            Edge::new(&e.id, &e.from, &e.to, c)
        })
        .collect();
    net.with_edges(edges).expect("same graph")
}

/// A matrix with independent fair bits.
pub fn random_matrix(rng: &mut TestRng, rows: usize, cols: usize) -> Gf2Matrix {
    let mut m = Gf2Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen_bool(0.5));
        }
    }
    m
}

/// A random linear code on a random DAG. Sources sit on the first half of
/// the nodes; every other node demands exactly the sources the random code
/// lets it decode. Total message bits stay at or below `max_message_bits`.
pub fn random_code(rng: &mut TestRng, max_nodes: usize, max_edges: usize, max_message_bits: usize) -> LinearNetworkCode {
    let n: u32 = rng.gen_range(1..=4);
    let net = random_dag(rng, max_nodes, max_edges, n, 2 * n as i64);
    let k = net.nodes().len();
    let source_count = rng.gen_range(1..=3.min(k / 2).max(1));
    let mut budget = max_message_bits;
    let mut sources = Vec::new();
    for i in 0..source_count {
        let bits = rng.gen_range(0..=budget.min(3));
        budget -= bits;
        let node = &net.nodes()[rng.gen_range(0..(k / 2).max(1))];
        sources.push(Source::new(format!("{}", i + 1), node, Rational::new(bits as i64, n as i64)));
    }
    let everyone: BTreeMap<String, BTreeSet<String>> = net
        .nodes()
        .iter()
        .map(|v| (v.clone(), sources.iter().filter(|s| &s.node != v).map(|s| s.id.clone()).collect()))
        .collect();
    let demand = DemandSpec::new(sources.clone(), everyone).expect("declared sources");
    let mut code = LinearNetworkCode::zero(net.clone(), demand, n).expect("admissible blocklength");
    let shapes: Vec<(String, usize, usize)> =
        code.encoders().iter().map(|(e, m)| (e.clone(), m.rows(), m.cols())).collect();
    for (e, rows, cols) in shapes {
        code = code.with_encoder(&e, random_matrix(rng, rows, cols)).expect("shape kept");
    }
    let code = code.with_derived_decoders();
    let ok = code.check_decodable().expect("linear check");
    let mut demands: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for ((v, s), good) in ok {
        if good {
            demands.entry(v).or_default().insert(s);
        }
    }
    let decoders = code
        .decoders()
        .iter()
        .filter(|((v, s), _)| demands.get(v).is_some_and(|w| w.contains(s)))
        .map(|(k, m)| (k.clone(), m.clone()))
        .collect();
    let demand = DemandSpec::new(sources, demands).expect("declared sources");
    LinearNetworkCode::new(net, demand, n, code.encoders().clone(), decoders).expect("consistent code")
}

/// Messages for a concatenated tuple, sources by ascending id.
pub fn messages_from(code: &dyn NetworkCode, index: u64) -> BTreeMap<String, BitVector> {
    let dims = code.dimensions();
    let total = dims.total_message_bits();
    netcode::code::split_messages(dims, &BitVector::from_u64(index, total))
}

/// `H` in bits of an empirical distribution given by counts.
pub fn entropy_of_counts<K: Ord>(counts: &BTreeMap<K, u64>) -> f64 {
    let total: u64 = counts.values().sum();
    counts
        .values()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum()
}

/// `I(M_s; W)` by running the code on every message tuple, with the sources
/// in `zeroed` held at the all-zero message. `W` is the tuple of words on
/// `edges`.
pub fn mutual_information_by_simulation(code: &dyn NetworkCode, zeroed: &[String], source: &str, edges: &[String]) -> f64 {
    let dims = code.dimensions();
    let total = dims.total_message_bits();
    let mut joint: BTreeMap<(u64, Vec<u64>), u64> = BTreeMap::new();
    let mut ms: BTreeMap<u64, u64> = BTreeMap::new();
    let mut ws: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    'tuples: for index in 0..1u64 << total {
        let messages = messages_from(code, index);
        for s in zeroed {
            if !messages[s].is_zero() {
                continue 'tuples;
            }
        }
        let trace = code.run(&messages).expect("well-formed messages");
        let m = messages[source].to_u64();
        let w: Vec<u64> = edges.iter().map(|e| trace.edges[e].to_u64()).collect();
        *joint.entry((m, w.clone())).or_default() += 1;
        *ms.entry(m).or_default() += 1;
        *ws.entry(w).or_default() += 1;
    }
    entropy_of_counts(&ms) + entropy_of_counts(&ws) - entropy_of_counts(&joint)
}

/// Random disjoint nonempty node sets.
pub fn random_terminals(rng: &mut TestRng, net: &Network) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut nodes = net.nodes().to_vec();
    nodes.shuffle(rng);
    let split = rng.gen_range(1..nodes.len());
    let a = rng.gen_range(1..=split);
    let b = rng.gen_range(split + 1..=nodes.len());
    (nodes[..a].iter().cloned().collect(), nodes[split..b].iter().cloned().collect())
}
