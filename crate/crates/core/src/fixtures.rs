//! Small named instances used by the CLI, the documentation and the tests.

use std::collections::{BTreeMap, BTreeSet};

use crate::code::LinearNetworkCode;
use crate::gf2::Gf2Matrix;
use crate::net::{DemandSpec, Edge, Network, Source};
use crate::Rational;

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Builds a network and demand from compact literals.
pub fn build(
    name: &str,
    edges: &[(&str, &str, &str, Rational)],
    sources: &[(&str, &str, Rational)],
    demands: &[(&str, &[&str])],
) -> (Network, DemandSpec) {
    let mut nodes: BTreeSet<String> = BTreeSet::new();
    for (_, from, to, _) in edges {
        nodes.insert(from.to_string());
        nodes.insert(to.to_string());
    }
    for (_, v, _) in sources {
        nodes.insert(v.to_string());
    }
    for (v, _) in demands {
        nodes.insert(v.to_string());
    }
    let edges = edges.iter().map(|&(id, from, to, c)| Edge::new(id, from, to, c)).collect();
    let net = Network::new(name, nodes.into_iter().collect(), edges).expect("fixture network is valid");
    let sources = sources.iter().map(|&(id, v, rate)| Source::new(id, v, rate)).collect();
    let demands: BTreeMap<String, BTreeSet<String>> =
        demands.iter().map(|(v, ss)| (v.to_string(), ss.iter().map(|s| s.to_string()).collect())).collect();
    let demand = DemandSpec::new(sources, demands).expect("fixture demand is valid");
    demand.validate_against(&net).expect("fixture demand matches network");
    (net, demand)
}

fn m(text: &str) -> Gf2Matrix {
    Gf2Matrix::from_text(text).expect("fixture matrix")
}

/// `v1 -> a -> v2`, one unit-rate source.
pub fn relay_chain() -> (Network, DemandSpec) {
    build("relay-chain", &[("e1", "v1", "a", r(1)), ("e2", "a", "v2", r(1))], &[("1", "v1", r(1))], &[("v2", &["1"])])
}

pub fn relay_chain_code() -> LinearNetworkCode {
    let (net, demand) = relay_chain();
    LinearNetworkCode::zero(net, demand, 1)
        .and_then(|c| c.with_encoder("e1", m("1")))
        .and_then(|c| c.with_encoder("e2", m("1")))
        .and_then(|c| c.with_decoder("v2", "1", m("1")))
        .expect("relay code")
}

/// Two-unicast butterfly: `s1, s2 -> c -> d -> t1, t2` with cross edges
/// `s1 -> t2` and `s2 -> t1`; `t1` wants source 1 and `t2` wants source 2.
/// The bottleneck edge is `cd`.
pub fn butterfly() -> (Network, DemandSpec) {
    build(
        "butterfly",
        &[
            ("s1c", "s1", "c", r(1)),
            ("s2c", "s2", "c", r(1)),
            ("cd", "c", "d", r(1)),
            ("dt1", "d", "t1", r(1)),
            ("dt2", "d", "t2", r(1)),
            ("s1t2", "s1", "t2", r(1)),
            ("s2t1", "s2", "t1", r(1)),
        ],
        &[("1", "s1", r(1)), ("2", "s2", r(1))],
        &[("t1", &["1"]), ("t2", &["2"])],
    )
}

/// The XOR code on [`butterfly`]: `cd` carries `M1 + M2`.
pub fn butterfly_xor_code() -> LinearNetworkCode {
    let (net, demand) = butterfly();
    let mut code = LinearNetworkCode::zero(net, demand, 1).expect("butterfly code");
    for (e, text) in [("s1c", "1"), ("s1t2", "1"), ("s2c", "1"), ("s2t1", "1"), ("cd", "11"), ("dt1", "1"), ("dt2", "1")] {
        code = code.with_encoder(e, m(text)).expect("encoder");
    }
    code.with_decoder("t1", "1", m("11")).and_then(|c| c.with_decoder("t2", "2", m("11"))).expect("decoders")
}

/// Seven-node multicast butterfly: source `1` at `s` with rate 2, both sinks demand it.
pub fn butterfly_multicast() -> (Network, DemandSpec) {
    build(
        "butterfly-multicast",
        &[
            ("sa", "s", "a", r(1)),
            ("sb", "s", "b", r(1)),
            ("ac", "a", "c", r(1)),
            ("bc", "b", "c", r(1)),
            ("cd", "c", "d", r(1)),
            ("at1", "a", "t1", r(1)),
            ("dt1", "d", "t1", r(1)),
            ("bt2", "b", "t2", r(1)),
            ("dt2", "d", "t2", r(1)),
        ],
        &[("1", "s", r(2))],
        &[("t1", &["1"]), ("t2", &["1"])],
    )
}

/// A relay separator instance: both sources reach node `a`, `a` feeds `b`,
/// and the unit edge `e` (`v1 -> b`) bypasses `a`. Sink `v3` wants source 1
/// and `v4` wants source 2.
pub fn butterfly_bypass() -> (Network, DemandSpec) {
    build(
        "butterfly-bypass",
        &[
            ("v1a", "v1", "a", r(1)),
            ("v2a", "v2", "a", r(1)),
            ("ab", "a", "b", r(1)),
            ("e", "v1", "b", r(1)),
            ("bv3", "b", "v3", r(1)),
            ("bv4", "b", "v4", r(1)),
        ],
        &[("1", "v1", r(1)), ("2", "v2", r(1))],
        &[("v3", &["1"]), ("v4", &["2"])],
    )
}

/// `ab` carries `M1 + M2`, `e` carries `M1`, and `b` undoes the XOR.
pub fn butterfly_bypass_code() -> LinearNetworkCode {
    let (net, demand) = butterfly_bypass();
    let mut code = LinearNetworkCode::zero(net, demand, 1).expect("bypass code");
    // b sees [ab, e]
    for (edge, text) in [("v1a", "1"), ("e", "1"), ("v2a", "1"), ("ab", "11"), ("bv3", "01"), ("bv4", "11")] {
        code = code.with_encoder(edge, m(text)).expect("encoder");
    }
    code.with_decoder("v3", "1", m("1")).and_then(|c| c.with_decoder("v4", "2", m("1"))).expect("decoders")
}

/// Sources feed `a` directly, `a` feeds the sinks directly, and `e`
/// (`v1 -> v3`) is the only other edge.
pub fn direct_relay() -> (Network, DemandSpec) {
    build(
        "direct-relay",
        &[
            ("v1a", "v1", "a", r(1)),
            ("v2a", "v2", "a", r(1)),
            ("av3", "a", "v3", r(1)),
            ("av4", "a", "v4", r(1)),
            ("e", "v1", "v3", r(1)),
        ],
        &[("1", "v1", r(1)), ("2", "v2", r(1))],
        &[("v3", &["1"]), ("v4", &["2"])],
    )
}

/// `a` forwards each source to its sink; `e` copies source 1 as well.
pub fn direct_relay_code() -> LinearNetworkCode {
    let (net, demand) = direct_relay();
    let mut code = LinearNetworkCode::zero(net, demand, 1).expect("direct relay code");
    // a sees [v1a, v2a]; v3 sees [av3, e]
    for (edge, text) in [("v1a", "1"), ("v2a", "1"), ("av3", "10"), ("av4", "01"), ("e", "1")] {
        code = code.with_encoder(edge, m(text)).expect("encoder");
    }
    code.with_decoder("v3", "1", m("10")).and_then(|c| c.with_decoder("v4", "2", m("1"))).expect("decoders")
}

/// Relay separator with intermediate nodes on both sides of `a` and a
/// half-unit bypass `e` from `x1` to `y2`, at rates `(1/2, 1/2)`.
pub fn two_stage_relay() -> (Network, DemandSpec) {
    let half = Rational::new(1, 2);
    build(
        "two-stage-relay",
        &[
            ("v1x1", "v1", "x1", r(1)),
            ("v2x2", "v2", "x2", r(1)),
            ("x1a", "x1", "a", half),
            ("x2a", "x2", "a", half),
            ("ay1", "a", "y1", half),
            ("ay2", "a", "y2", half),
            ("e", "x1", "y2", half),
            ("y1v3", "y1", "v3", r(1)),
            ("y2v4", "y2", "v4", r(1)),
        ],
        &[("1", "v1", half), ("2", "v2", half)],
        &[("v3", &["1"]), ("v4", &["2"])],
    )
}

/// Blocklength-2 code for [`two_stage_relay`]: every half-unit link carries
/// one bit, every unit link carries its bit followed by a zero.
pub fn two_stage_relay_code() -> LinearNetworkCode {
    let (net, demand) = two_stage_relay();
    let mut code = LinearNetworkCode::zero(net, demand, 2).expect("two-stage code");
    // a sees [x1a, x2a]; y2 sees [ay2, e]
    for (edge, text) in [
        ("v1x1", "1\n0"),
        ("v2x2", "1\n0"),
        ("x1a", "10"),
        ("x2a", "10"),
        ("ay1", "10"),
        ("ay2", "01"),
        ("e", "10"),
        ("y1v3", "1\n0"),
        ("y2v4", "10\n00"),
    ] {
        code = code.with_encoder(edge, m(text)).expect("encoder");
    }
    code.with_decoder("v3", "1", m("10")).and_then(|c| c.with_decoder("v4", "2", m("10"))).expect("decoders")
}

/// Relay separator with one source and a zero-capacity bypass.
pub fn zero_bypass() -> (Network, DemandSpec) {
    build(
        "zero-bypass",
        &[("v1a", "v1", "a", r(1)), ("av2", "a", "v2", r(1)), ("e", "v1", "v2", r(0))],
        &[("1", "v1", r(1))],
        &[("v2", &["1"])],
    )
}

pub fn zero_bypass_code() -> LinearNetworkCode {
    let (net, demand) = zero_bypass();
    LinearNetworkCode::zero(net, demand, 1)
        .and_then(|c| c.with_encoder("v1a", m("1")))
        .and_then(|c| c.with_encoder("av2", m("1")))
        .and_then(|c| c.with_decoder("v2", "1", m("1")))
        .expect("zero-bypass code")
}

/// Super-source instances: every source is available at `s`. Each comes
/// with the edge whose capacity is perturbed.
pub fn super_source_instances() -> Vec<(Network, DemandSpec, &'static str)> {
    vec![
        {
            let (n, d) = build(
                "ss-split",
                &[
                    ("st1", "s", "t1", r(1)),
                    ("st2", "s", "t2", r(1)),
                    ("sm", "s", "m", r(1)),
                    ("mt1", "m", "t1", r(1)),
                    ("mt2", "m", "t2", r(1)),
                ],
                &[("1", "s", r(1)), ("2", "s", r(1))],
                &[("t1", &["1"]), ("t2", &["2"])],
            );
            (n, d, "sm")
        },
        {
            let (n, d) = build(
                "ss-shared-relay",
                &[("sm", "s", "m", r(1)), ("mt1", "m", "t1", r(1)), ("mt2", "m", "t2", r(1)), ("st1", "s", "t1", r(1))],
                &[("1", "s", r(1)), ("2", "s", r(1))],
                &[("t1", &["1"]), ("t2", &["2"])],
            );
            (n, d, "st1")
        },
        {
            let (n, d) = build(
                "ss-parallel",
                &[("p", "s", "t", r(1)), ("q", "s", "t", r(1))],
                &[("1", "s", r(1)), ("2", "s", r(1))],
                &[("t", &["1", "2"])],
            );
            (n, d, "q")
        },
        {
            let (n, d) = build(
                "ss-two-hop-multicast",
                &[("sm", "s", "m", r(2)), ("mt1", "m", "t1", r(1)), ("mt2", "m", "t2", r(1)), ("st2", "s", "t2", r(1))],
                &[("1", "s", r(1)), ("2", "s", r(1))],
                &[("t1", &["1"]), ("t2", &["1", "2"])],
            );
            (n, d, "sm")
        },
        {
            let (n, d) = build(
                "ss-three-sinks",
                &[
                    ("st1", "s", "t1", r(1)),
                    ("st2", "s", "t2", r(1)),
                    ("sm", "s", "m", r(1)),
                    ("mt3", "m", "t3", r(1)),
                    ("t1t3", "t1", "t3", r(1)),
                ],
                &[("1", "s", r(1)), ("2", "s", r(1))],
                &[("t1", &["1"]), ("t2", &["2"]), ("t3", &["1", "2"])],
            );
            (n, d, "sm")
        },
        {
            let (n, d) = build(
                "ss-butterfly",
                &[
                    ("sa", "s", "a", r(1)),
                    ("sb", "s", "b", r(1)),
                    ("ac", "a", "c", r(1)),
                    ("bc", "b", "c", r(1)),
                    ("cd", "c", "d", r(1)),
                    ("at1", "a", "t1", r(1)),
                    ("dt1", "d", "t1", r(1)),
                    ("bt2", "b", "t2", r(1)),
                    ("dt2", "d", "t2", r(1)),
                ],
                &[("1", "s", r(1)), ("2", "s", r(1))],
                &[("t1", &["1", "2"]), ("t2", &["1", "2"])],
            );
            (n, d, "cd")
        },
    ]
}

/// Relay-separator instances with their relay node and bypass edge.
pub fn relay_instances() -> Vec<(Network, DemandSpec, &'static str, &'static str)> {
    let (n1, d1) = butterfly_bypass();
    let (n2, d2) = direct_relay();
    let (n3, d3) = two_stage_relay();
    let (n4, d4) = zero_bypass();
    vec![(n1, d1, "a", "e"), (n2, d2, "a", "e"), (n3, d3, "a", "e"), (n4, d4, "a", "e")]
}

/// Every named network, including the super-source instances.
pub fn named(name: &str) -> Option<(Network, DemandSpec)> {
    let direct = match name {
        "relay-chain" => Some(relay_chain()),
        "butterfly" => Some(butterfly()),
        "butterfly-multicast" => Some(butterfly_multicast()),
        "butterfly-bypass" => Some(butterfly_bypass()),
        "direct-relay" => Some(direct_relay()),
        "two-stage-relay" => Some(two_stage_relay()),
        "zero-bypass" => Some(zero_bypass()),
        _ => None,
    };
    direct.or_else(|| super_source_instances().into_iter().find(|(n, _, _)| n.name() == name).map(|(n, d, _)| (n, d)))
}

/// Names accepted by [`named`].
pub fn names() -> Vec<String> {
    let mut out: Vec<String> =
        ["relay-chain", "butterfly", "butterfly-multicast", "butterfly-bypass", "direct-relay", "two-stage-relay", "zero-bypass"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    out.extend(super_source_instances().into_iter().map(|(n, _, _)| n.name().to_string()));
    out
}

/// The fixture code for a named network, where one exists.
pub fn named_code(name: &str) -> Option<LinearNetworkCode> {
    match name {
        "relay-chain" => Some(relay_chain_code()),
        "butterfly" => Some(butterfly_xor_code()),
        "butterfly-bypass" => Some(butterfly_bypass_code()),
        "direct-relay" => Some(direct_relay_code()),
        "two-stage-relay" => Some(two_stage_relay_code()),
        "zero-bypass" => Some(zero_bypass_code()),
        _ => None,
    }
}

/// Relay-separator fixtures with a working code each.
pub fn relay_codes() -> Vec<(LinearNetworkCode, &'static str, &'static str)> {
    vec![
        (butterfly_bypass_code(), "a", "e"),
        (direct_relay_code(), "a", "e"),
        (two_stage_relay_code(), "a", "e"),
        (zero_bypass_code(), "a", "e"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_code_decodes() {
        for name in names() {
            assert!(named(&name).is_some(), "{name}");
            if let Some(code) = named_code(&name) {
                assert!(code.check_decodable().unwrap().values().all(|&ok| ok), "{name}");
            }
        }
    }
}
