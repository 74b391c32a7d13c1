//! `netcode`: command-line front end for the network-coding toolkit.
//!
//! Exit status: 0 on success, 1 on invalid input or I/O failure, 2 when a
//! checked claim fails (the report is still written).

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

const SCHEMAS: &str = "\
Input formats (JSON unless noted):

  network   {\"name\"?, \"nodes\": [id], \"edges\": [{\"id\", \"from\", \"to\", \"capacity\"}],
             \"sources\": [{\"id\", \"node\", \"rate\"}], \"demands\": {node: [source id]}}
            capacities and rates are integers or \"p/q\" strings; unknown fields are
            kept and reported as warnings
  code      {\"blocklength\": n, \"encoders\": {edge: matrix}, \"decoders\": {\"node:source\": matrix}}
            a matrix is rows of 0/1 separated by newlines; \"\" for a matrix with
            no rows or no columns. Columns follow the node's input: messages of
            sources at the node (by id), then incoming edge words (by edge id)
  region    {\"dimension\", \"coordinates\": [id], \"offset\": [x],
             \"inequalities\": [{\"subset\": [id], \"bound\": x, \"label\"}]}
  bc        {\"receivers\": [id], \"inputSize\": m, \"functions\": [[y per input]],
             \"inputDistribution\": [\"p/q\"]}
  probes    [[rate per source]]
  distribution (CSV) header `name|alphabet,...,p`, one row per outcome

Environment: NETCODE_BUDGET overrides the default enumeration budget (2^24).";

#[derive(Parser, Debug)]
#[command(name = "netcode", version, about = "Analyze coded networks under single-edge capacity loss", after_help = SCHEMAS)]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for enumeration and table construction (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Linear,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Network,
    Code,
    Region,
    Distribution,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a network file: endpoints, capacities, acyclicity, demands.
    Validate { net: PathBuf },
    /// Maximum flow between two node sets, with a minimum cut.
    Maxflow {
        #[arg(long)]
        net: PathBuf,
        /// Comma-separated source-side nodes.
        #[arg(long, value_delimiter = ',', required = true)]
        from: Vec<String>,
        /// Comma-separated sink-side nodes.
        #[arg(long, value_delimiter = ',', required = true)]
        to: Vec<String>,
    },
    /// Cut-set region of a supported demand type (an annotated outer bound otherwise).
    CutsetRegion {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check that reducing an edge by delta lowers every cut-set bound by at most delta.
    CheckRobustness {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        delta: String,
        /// Rate vectors to test; defaults to a half-unit grid.
        #[arg(long)]
        probes: Option<PathBuf>,
    },
    /// Restrict a linear code so that an edge can lose delta, and check the rate loss.
    Perturb {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        delta: String,
        /// Also write the restricted code (on the reduced network) here.
        #[arg(long)]
        restricted_code: Option<PathBuf>,
    },
    /// MAC region seen by a node (from a code) or by observed variables (from a table).
    MacRegion {
        #[arg(long, required_unless_present = "dist")]
        net: Option<PathBuf>,
        #[arg(long, requires = "net")]
        code: Option<PathBuf>,
        /// Receiving node; its incoming edges form the observation.
        #[arg(long, requires = "code")]
        node: Option<String>,
        /// Joint distribution CSV with variables M:<source> and the observation.
        #[arg(long, conflicts_with = "net", requires_all = ["sources", "observed"])]
        dist: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        sources: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        observed: Vec<String>,
    },
    /// Region of a deterministic broadcast channel at its input distribution.
    DbcRegion {
        #[arg(long)]
        bc: PathBuf,
        /// Rate vector to test against the given, uniform and grid input distributions.
        #[arg(long, value_delimiter = ',')]
        rate: Vec<f64>,
        /// Grid resolution q for candidate distributions {0, 1/q, ..., 1}.
        #[arg(long, default_value_t = 4)]
        grid: i64,
    },
    /// Evaluate the relay-separator inequality chain on a code.
    VerifyTheorem {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        node: String,
    },
    /// Zero-error achievable rate points at blocklength n by exhaustive search.
    Oracle {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value = "linear")]
        mode: ModeArg,
        /// Largest code space searched per rate point, e.g. 4096 or 2^24.
        #[arg(long, env = "NETCODE_BUDGET")]
        budget: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Compare achievable sets before and after reducing an edge by delta.
    OracleGap {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        delta: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value = "linear")]
        mode: ModeArg,
        #[arg(long, env = "NETCODE_BUDGET")]
        budget: Option<String>,
    },
    /// Parse, serialize and reparse a file; fails if anything changes.
    RoundTrip {
        path: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Network the code refers to (for --kind code).
        #[arg(long, required_if_eq("kind", "code"))]
        net: Option<PathBuf>,
    },
    /// Print a built-in instance as a network file (or its code with --code).
    Fixture {
        name: String,
        #[arg(long)]
        code: bool,
    },
}

/// How a command's report should end the process.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// A checked claim failed.
    Fail,
    /// The input was read but is not valid.
    Invalid,
}

/// What a command produced: the report text and its status.
pub struct Outcome {
    pub text: String,
    pub status: Status,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(err) = input::emit(cli.out.as_deref(), &outcome.text) {
                eprintln!("error: {err:#}");
                return ExitCode::from(1);
            }
            match outcome.status {
                Status::Pass => ExitCode::SUCCESS,
                Status::Fail => ExitCode::from(2),
                Status::Invalid => ExitCode::from(1),
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
