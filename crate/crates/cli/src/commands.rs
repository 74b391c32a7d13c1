use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use netcode::code::{LinearNetworkCode, NetworkCode};
use netcode::cutset::{self, CutsetConstraint, DemandType};
use netcode::info::{self, DistributionTable, Selector};
use netcode::net::{self, DemandSpec, Network, NetworkDoc};
use netcode::oracle::{self, Mode};
use netcode::region::{self, RateRegion, RegionDoc};
use netcode::{fixtures, perturb, rational, report, theorem, Error, Rational, Real, TOLERANCE};
use serde_json::{json, Value};

use crate::{input, Cli, Command, Format, Kind, ModeArg, Outcome, Status};

/// Largest number of default probes for `check-robustness`.
const MAX_DEFAULT_PROBES: usize = 4096;

/// Largest coordinate in the default probe grid.
const DEFAULT_PROBE_CEILING: i64 = 4;

pub fn run(cli: &Cli) -> Result<Outcome> {
    let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1);
    match &cli.command {
        Command::Validate { net } => validate(net),
        Command::Maxflow { net, from, to } => maxflow(net, from, to),
        Command::CutsetRegion { net, format } => cutset_region(net, *format),
        Command::CheckRobustness { net, edge, delta, probes } => check_robustness(net, edge, delta, probes.as_deref()),
        Command::Perturb { net, code, edge, delta, restricted_code } => {
            perturb(net, code, edge, delta, restricted_code.as_deref())
        }
        Command::MacRegion { net, code, node, dist, sources, observed } => match (net, code, dist) {
            (Some(net), Some(code), None) => mac_region_code(net, code, node.as_deref(), sources, workers),
            (None, None, Some(dist)) => mac_region_dist(dist, sources, observed),
            _ => bail!("mac-region needs either --net, --code and --node, or --dist"),
        },
        Command::DbcRegion { bc, rate, grid } => dbc_region(bc, rate, *grid),
        Command::VerifyTheorem { net, code, edge, node } => {
            let code = input::code(net, code)?;
            let report = theorem::verify_theorem(&code, node, edge, workers)?;
            done(&report, report.pass)
        }
        Command::Oracle { net, n, mode, budget, format } => {
            let (net, demand) = input::network(net)?;
            let set = oracle::achievable_set(&net, &demand, *n, mode_of(*mode), input::budget(budget.as_deref())?, workers)?;
            match format {
                Format::Json => done(&set, true),
                Format::Csv => Ok(Outcome { text: achievable_csv(&set), status: Status::Pass }),
            }
        }
        Command::OracleGap { net, edge, delta, n, mode, budget } => {
            let (net, demand) = input::network(net)?;
            let report = oracle::delta_gap_report(
                &net,
                &demand,
                edge,
                input::delta(delta)?,
                *n,
                mode_of(*mode),
                input::budget(budget.as_deref())?,
                workers,
            )?;
            done(&report, report.pass)
        }
        Command::RoundTrip { path, kind, net } => round_trip(path, *kind, net.as_deref()),
        Command::Fixture { name, code } => fixture(name, *code),
    }
}

fn done<T: serde::Serialize + ?Sized>(report: &T, pass: bool) -> Result<Outcome> {
    let status = if pass { Status::Pass } else { Status::Fail };
    Ok(Outcome { text: report::to_canonical_json(report)?, status })
}

fn mode_of(mode: ModeArg) -> Mode {
    match mode {
        ModeArg::Linear => Mode::Linear,
        ModeArg::All => Mode::All,
    }
}

fn validate(path: &Path) -> Result<Outcome> {
    let doc = input::network_doc(path)?;
    let edges = doc.raw_edges().with_context(|| format!("in {}", path.display()))?;
    let mut report = net::validate_network(&doc.nodes, &edges);
    let mut order = None;
    if report.ok {
        match doc.build() {
            Ok((net, _)) => order = Some(net.topological_order().to_vec()),
            Err(err) => {
                report.ok = false;
                report.violations.push(net::Violation { kind: "demand".into(), detail: err.to_string() });
            }
        }
    }
    let body = json!({
        "ok": report.ok,
        "violations": report.violations,
        "warnings": doc.warnings(),
        "topologicalOrder": order,
    });
    let status = if report.ok { Status::Pass } else { Status::Invalid };
    Ok(Outcome { text: report::to_canonical_json(&body)?, status })
}

fn maxflow(path: &Path, from: &[String], to: &[String]) -> Result<Outcome> {
    let (net, _) = input::network(path)?;
    let src: BTreeSet<String> = from.iter().cloned().collect();
    let dst: BTreeSet<String> = to.iter().cloned().collect();
    let value = net.max_flow(&src, &dst)?;
    let min_cut = if net.nodes().len() <= net::MAX_CUT_ENUMERATION_NODES {
        net.enumerate_cuts(&src, &dst)?.into_iter().min_by(|a, b| a.capacity.cmp(&b.capacity))
    } else {
        None
    };
    let body = json!({
        "from": src,
        "to": dst,
        "value": rational::format(&value),
        "minCut": min_cut,
    });
    done(&body, true)
}

fn cutset_region(path: &Path, format: Format) -> Result<Outcome> {
    let (net, demand) = input::network(path)?;
    let region = cutset::cutset_bounds(&net, &demand)?;
    let note = (region.demand_type == DemandType::General).then(|| {
        let why = cutset::classify(&demand).err().map(|e| e.to_string()).unwrap_or_default();
        eprintln!("warning: {why}; reporting the cut-set outer bound");
        format!("outer bound only: {why}")
    });
    let constraints = region.constraints;
    let text = match format {
        Format::Json => report::to_canonical_json(&json!({
            "demandType": region.demand_type,
            "sources": demand.source_ids(),
            "constraints": constraints,
            "note": note,
        }))?,
        Format::Csv => constraints_csv(&constraints),
    };
    Ok(Outcome { text, status: Status::Pass })
}

fn constraints_csv(constraints: &[CutsetConstraint]) -> String {
    let join = |set: &BTreeSet<String>| set.iter().cloned().collect::<Vec<_>>().join(";");
    let mut out = String::from("sources,sinks,bound\n");
    for c in constraints {
        out.push_str(&format!("{},{},{}\n", join(&c.sources), join(&c.sinks), rational::format(&c.bound)));
    }
    out
}

/// Every rate vector on the half-unit grid up to the largest bound touching
/// each source (capped), truncated to [`MAX_DEFAULT_PROBES`].
fn default_probes(net: &Network, demand: &DemandSpec) -> Result<Vec<Vec<Rational>>> {
    let region = cutset::cutset_bounds(net, demand)?;
    let ceiling = Rational::from_integer(DEFAULT_PROBE_CEILING);
    let steps: Vec<i64> = region
        .source_ids
        .iter()
        .map(|s| {
            let top = region
                .constraints
                .iter()
                .filter(|c| c.sources.contains(s))
                .map(|c| c.bound)
                .max()
                .unwrap_or_default()
                .min(ceiling);
            (top * Rational::from_integer(2)).floor().to_integer().max(0)
        })
        .collect();
    let mut out: Vec<Vec<Rational>> = vec![vec![]];
    for top in steps {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=top).map(move |i| {
                    let mut next = prefix.clone();
                    next.push(Rational::new(i, 2));
                    next
                })
            })
            .take(MAX_DEFAULT_PROBES)
            .collect();
    }
    Ok(out)
}

fn check_robustness(path: &Path, edge: &str, delta: &str, probes: Option<&Path>) -> Result<Outcome> {
    let (net, demand) = input::network(path)?;
    let delta = input::delta(delta)?;
    let capacity = net.edge(edge)?.capacity;
    if delta > capacity {
        return Err(Error::DeltaExceedsCapacity {
            edge: edge.to_string(),
            delta: rational::format(&delta),
            capacity: rational::format(&capacity),
        }
        .into());
    }
    let probes = match probes {
        Some(p) => input::probes(p)?,
        None => default_probes(&net, &demand)?,
    };
    let report = cutset::check_delta_robustness(&net, &demand, edge, delta, &probes)?;
    done(&report, report.pass)
}

fn perturb(net: &Path, code: &Path, edge: &str, delta: &str, restricted_out: Option<&Path>) -> Result<Outcome> {
    let code = input::code(net, code)?;
    let loss = perturb::verify_rate_loss(&code, edge, input::delta(delta)?)?;
    let decodable = loss.restricted.check_decodable()?.values().all(|&ok| ok);
    if let Some(out) = restricted_out {
        let text = report::to_canonical_json(&loss.restricted.to_doc())?;
        fs::write(out, text).with_context(|| format!("cannot write {}", out.display()))?;
    }
    let mut body = serde_json::to_value(&loss.report)?;
    body["restrictedDecodable"] = Value::Bool(decodable);
    done(&body, loss.report.pass && decodable)
}

fn mac_report(d: &DistributionTable, sources: &[String], observed: &[String]) -> Result<Outcome> {
    let region = region::mac_region_from_code(d, sources, observed)?;
    let r_mac = region::r_mac_vector(d, sources, observed)?;
    let inside = region.contains(&r_mac, TOLERANCE)?;
    let body = json!({
        "sources": sources,
        "observed": observed,
        "region": region.to_doc(),
        "rMac": r_mac,
        "margins": region.margins(&r_mac)?,
        "rMacInside": inside,
    });
    done(&body, inside)
}

fn mac_region_code(net: &Path, code: &Path, node: Option<&str>, sources: &[String], workers: usize) -> Result<Outcome> {
    let node = node.ok_or_else(|| anyhow!("--node is required with --code"))?;
    let code = input::code(net, code)?;
    if !code.network().has_node(node) {
        return Err(Error::UnknownNode(node.to_string()).into());
    }
    let sources = if sources.is_empty() { code.demand().source_ids() } else { sources.to_vec() };
    let edges: Vec<String> = code.network().in_edges(node).iter().map(|e| e.id.clone()).collect();
    let mut selection: Vec<Selector> = sources.iter().map(|s| Selector::Message(s.clone())).collect();
    selection.extend(edges.iter().map(|e| Selector::Edge(e.clone())));
    let d = info::induced_distribution(&code, &selection, &BTreeMap::new(), workers)?;
    let observed: Vec<String> = edges.iter().map(|e| info::edge_var(e)).collect();
    mac_report(&d, &sources, &observed)
}

fn mac_region_dist(path: &Path, sources: &[String], observed: &[String]) -> Result<Outcome> {
    let d = input::distribution(path)?;
    mac_report(&d, sources, observed)
}

fn dbc_region(path: &Path, rate: &[f64], grid: i64) -> Result<Outcome> {
    if grid < 1 {
        bail!("--grid must be at least 1");
    }
    let bc = input::bc(path)?;
    let size = bc.input_size as usize;
    let region = region::dbc_region(&bc)?;
    let uniform = region::dbc_region(&bc.with_distribution(region::uniform_distribution(size))?)?;
    let mut body = json!({
        "receivers": bc.receivers,
        "region": region.to_doc(),
        "uniformRegion": uniform.to_doc(),
    });
    if rate.is_empty() {
        return done(&body, true);
    }
    if rate.len() != bc.receivers.len() {
        bail!("--rate has {} entries for {} receivers", rate.len(), bc.receivers.len());
    }
    let mut candidates = vec![bc.input_distribution.clone(), region::uniform_distribution(size)];
    candidates.extend(region::grid_distributions(size, grid));
    let hit = region::dbc_contains_any(&bc, &candidates, rate, TOLERANCE)?;
    body["rate"] = json!(rate);
    body["containedAt"] = match hit {
        Some(i) => Value::Array(candidates[i].iter().map(|p| Value::String(rational::format(p))).collect()),
        None => Value::Null,
    };
    body["candidates"] = json!(candidates.len());
    done(&body, hit.is_some())
}

fn achievable_csv(set: &oracle::AchievableSet) -> String {
    let mut out = set.sources.join(",");
    out.push_str(",achievable,witness,codes\n");
    for p in &set.points {
        let rates: Vec<String> = p.rates.iter().map(rational::format).collect();
        let witness = p.witness.map(|w| w.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{}\n", rates.join(","), p.achievable, witness, p.codes));
    }
    out
}

fn round_trip(path: &Path, kind: Kind, net: Option<&Path>) -> Result<Outcome> {
    let text = input::read(path)?;
    let at = || format!("in {}", path.display());
    let (identical, warnings, normalized) = match kind {
        Kind::Network => {
            let doc = NetworkDoc::from_json(&text).with_context(at)?;
            let built = doc.build().with_context(at)?;
            let again = NetworkDoc::from_json(&doc.to_json())?;
            let rebuilt = again.build()?;
            (doc == again && built == rebuilt, doc.warnings(), serde_json::to_value(&again)?)
        }
        Kind::Code => {
            let net = net.ok_or_else(|| anyhow!("--net is required for --kind code"))?;
            let (network, demand) = input::network(net)?;
            let doc: netcode::code::CodeDoc = serde_json::from_str(&text).with_context(at)?;
            let code = LinearNetworkCode::from_doc(network.clone(), demand.clone(), &doc).with_context(at)?;
            let written = serde_json::to_string(&code.to_doc())?;
            let again = LinearNetworkCode::from_doc(network, demand, &serde_json::from_str(&written)?)?;
            (code == again, vec![], serde_json::to_value(again.to_doc())?)
        }
        Kind::Region => {
            let doc: RegionDoc = serde_json::from_str(&text).with_context(at)?;
            match RateRegion::<Rational>::from_doc(&doc) {
                Ok(region) => {
                    let again = RateRegion::<Rational>::from_doc(&serde_json::from_str(&serde_json::to_string(&region.to_doc())?)?)?;
                    (region == again, vec![], serde_json::to_value(again.to_doc())?)
                }
                Err(_) => {
                    let region = RateRegion::<Real>::from_doc(&doc).with_context(at)?;
                    let again = RateRegion::<Real>::from_doc(&serde_json::from_str(&serde_json::to_string(&region.to_doc())?)?)?;
                    (region == again, vec![], serde_json::to_value(again.to_doc())?)
                }
            }
        }
        Kind::Distribution => {
            let d = DistributionTable::from_csv(&text).with_context(at)?;
            let again = DistributionTable::from_csv(&d.to_csv())?;
            (d == again, vec![], Value::String(again.to_csv()))
        }
    };
    for w in &warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    let body = json!({
        "identical": identical,
        "warnings": warnings,
        "normalized": normalized,
    });
    done(&body, identical)
}

fn fixture(name: &str, code: bool) -> Result<Outcome> {
    let unknown = || anyhow!("unknown fixture {name:?}; known: {}", fixtures::names().join(", "));
    let text = if code {
        let code = fixtures::named_code(name).ok_or_else(|| anyhow!("fixture {name:?} has no code"))?;
        report::to_canonical_json(&code.to_doc())?
    } else {
        let (net, demand) = fixtures::named(name).ok_or_else(unknown)?;
        report::to_canonical_json(&NetworkDoc::from_parts(&net, &demand))?
    };
    Ok(Outcome { text, status: Status::Pass })
}
