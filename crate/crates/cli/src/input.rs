use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use netcode::code::{CodeDoc, LinearNetworkCode};
use netcode::info::DistributionTable;
use netcode::net::{DemandSpec, Network, NetworkDoc};
use netcode::region::DeterministicBC;
use netcode::{oracle, rational, Rational};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

pub fn network_doc(path: &Path) -> Result<NetworkDoc> {
    let doc = NetworkDoc::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    for w in doc.warnings() {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(doc)
}

pub fn network(path: &Path) -> Result<(Network, DemandSpec)> {
    network_doc(path)?.build().with_context(|| format!("in {}", path.display()))
}

pub fn code_doc(path: &Path) -> Result<CodeDoc> {
    serde_json::from_str(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn code(net_path: &Path, code_path: &Path) -> Result<LinearNetworkCode> {
    let (net, demand) = network(net_path)?;
    LinearNetworkCode::from_doc(net, demand, &code_doc(code_path)?).with_context(|| format!("in {}", code_path.display()))
}

pub fn distribution(path: &Path) -> Result<DistributionTable> {
    DistributionTable::from_csv(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn bc(path: &Path) -> Result<DeterministicBC> {
    let raw: DeterministicBC = serde_json::from_str(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let bc = DeterministicBC::new(raw.receivers, raw.functions, raw.input_distribution)
        .with_context(|| format!("in {}", path.display()))?;
    if bc.input_size != raw.input_size {
        bail!("in {}: inputSize {} but {} input probabilities", path.display(), raw.input_size, bc.input_size);
    }
    Ok(bc)
}

pub fn probes(path: &Path) -> Result<Vec<Vec<Rational>>> {
    let raw: Vec<Vec<serde_json::Value>> = serde_json::from_str(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    raw.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    let at = format!("{}: [{i}][{j}]", path.display());
                    match x {
                        serde_json::Value::String(s) => Ok(rational::parse_at(s, &at)?),
                        serde_json::Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or_default())),
                        _ => bail!("{at}: expected an integer or \"p/q\""),
                    }
                })
                .collect()
        })
        .collect()
}

pub fn delta(text: &str) -> Result<Rational> {
    Ok(rational::parse_at(text, "--delta")?)
}

/// `4096`, `2^24`, or the default when absent.
pub fn budget(text: Option<&str>) -> Result<u64> {
    let Some(text) = text else {
        return Ok(oracle::DEFAULT_BUDGET);
    };
    let text = text.trim();
    if let Some((base, exp)) = text.split_once('^') {
        let base: u64 = base.trim().parse().with_context(|| format!("budget {text:?}"))?;
        let exp: u32 = exp.trim().parse().with_context(|| format!("budget {text:?}"))?;
        return base.checked_pow(exp).with_context(|| format!("budget {text:?} overflows"));
    }
    text.parse().with_context(|| format!("budget {text:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_forms() {
        assert_eq!(budget(None).unwrap(), 1 << 24);
        assert_eq!(budget(Some("2^10")).unwrap(), 1024);
        assert_eq!(budget(Some(" 77 ")).unwrap(), 77);
        assert!(budget(Some("2^99")).is_err());
        assert!(budget(Some("lots")).is_err());
    }
}
