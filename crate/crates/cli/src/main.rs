use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use magicomm::pdt::BoundCheck;

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "magicomm",
    version,
    about = "Magic-gate circuits as communication protocols"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Root seed; every random choice is derived from it.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a circuit into a non-adaptive parity decision tree.
    CompilePdt(CircuitArgs),
    /// Check a compiled PDT against the statevector oracle.
    Verify {
        #[command(flatten)]
        circuit: CircuitArgs,
        /// Sweep every input instead of `--seeds` random ones.
        #[arg(long)]
        exhaustive: bool,
        /// Number of random inputs when not exhaustive.
        #[arg(long, default_value_t = 64)]
        seeds: usize,
    },
    /// Garden-hose protocols.
    #[command(subcommand)]
    Gh(GhCommand),
    /// Quantum SMP protocols and their private classical transform.
    #[command(subcommand)]
    Psm(PsmCommand),
    /// Problem instances and end-to-end pipelines.
    #[command(subcommand)]
    Problems(ProblemCommand),
}

#[derive(Args, Debug)]
struct CircuitArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Input bits held by Alice and Bob, `a,b` (default: halves).
    #[arg(long)]
    split: Option<String>,
    /// Drop identically-zero queries.
    #[arg(long)]
    minimize: bool,
}

#[derive(Subcommand, Debug)]
enum GhCommand {
    /// Run a protocol on one input pair and show the water path.
    Eval {
        #[arg(long)]
        protocol: PathBuf,
        /// Alice's bits, e.g. `01`.
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long, default_value = "")]
        y: String,
    },
    /// Protocol for the XOR of several protocols.
    Compose {
        #[arg(long, required = true)]
        protocol: Vec<PathBuf>,
        /// XOR the result with 1.
        #[arg(long)]
        complement: bool,
    },
    /// Smallest protocol for a named function on `--n` bits per side.
    Search {
        #[arg(long, value_enum)]
        function: GhFunction,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        max_pipes: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GhFunction {
    And,
    Or,
    Xor,
    Equality,
    InnerProduct,
    Majority,
}

#[derive(Subcommand, Debug)]
enum PsmCommand {
    /// One seeded execution of the transformed protocol.
    Run {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long, default_value = "")]
        y: String,
        #[arg(long, value_enum, default_value_t = Backend::Auto)]
        backend: Backend,
    },
    /// Privacy audit over every input.
    Audit {
        #[arg(long)]
        spec: PathBuf,
        /// Monte Carlo samples per input.
        #[arg(long, default_value_t = 2000)]
        seeds: usize,
        /// Largest transcript enumerated exactly.
        #[arg(long, default_value_t = 12)]
        exact_max_bits: usize,
        #[arg(long, value_enum, default_value_t = Backend::Auto)]
        backend: Backend,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Backend {
    Auto,
    GardenHose,
}

#[derive(Subcommand, Debug)]
enum ProblemCommand {
    /// Seeded ABCD instance and its acceptance probability.
    Abcd {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Case::High)]
        case: Case,
    },
    /// Seeded Forrelation instance and its promise class.
    Forrelation {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = magicomm::problems::DEFAULT_ALPHA)]
        alpha: f64,
    },
    /// Equality through one multi-controlled Toffoli, compiled and verified.
    Equality {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Magic-gate counts of the controlled multiplexer.
    Multiplexer {
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Index function through the multiplexer, compiled and verified.
    Index {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Case {
    High,
    Low,
}

/// What a command hands back before formatting.
pub struct Outcome {
    pub results: Value,
    pub bound_checks: Vec<BoundCheck>,
    pub seeds: Vec<u64>,
    /// Verification verdict, independent of the bound checks.
    pub passed: bool,
    pub text: String,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Run(String),
}

impl From<magicomm::Error> for Failure {
    fn from(e: magicomm::Error) -> Self {
        use magicomm::Error::*;
        match e {
            Syntax { .. }
            | InvalidCircuit(_)
            | InvalidArgument(_)
            | QubitOutOfRange { .. }
            | SizeCap { .. }
            | SearchCap(_)
            | NonUnitary { .. }
            | DimensionMismatch { .. } => Failure::Usage(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

/// Files read by a command, for the report's digests.
#[derive(Default)]
pub struct Inputs {
    digests: BTreeMap<String, String>,
}

impl Inputs {
    pub fn read(&mut self, path: &PathBuf) -> Result<String, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let digest = Sha256::digest(text.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.digests.insert(path.display().to_string(), hex);
        Ok(text)
    }
}

#[derive(Serialize)]
struct Report<'a> {
    command: Vec<String>,
    input_digests: &'a BTreeMap<String, String>,
    results: &'a Value,
    bound_checks: &'a [BoundCheck],
    seeds: &'a [u64],
    version: &'static str,
}

fn configure_threads() {
    if let Some(n) = std::env::var("MAGICOMM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    let mut inputs = Inputs::default();
    let outcome = match commands::dispatch(&cli, &mut inputs) {
        Ok(o) => o,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
    };
    let mut out = std::io::stdout().lock();
    match cli.format {
        Format::Json => {
            let report = Report {
                command: argv[1..].to_vec(),
                input_digests: &inputs.digests,
                results: &outcome.results,
                bound_checks: &outcome.bound_checks,
                seeds: &outcome.seeds,
                version: env!("CARGO_PKG_VERSION"),
            };
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        }
        Format::Text => {
            let _ = write!(out, "{}", outcome.text);
            for b in &outcome.bound_checks {
                let _ = writeln!(
                    out,
                    "bound {}: {} {} {} {}",
                    b.name,
                    b.value,
                    if (b.value <= b.bound) == b.holds {
                        "≤"
                    } else {
                        "≥"
                    },
                    b.bound,
                    if b.holds { "ok" } else { "VIOLATED" }
                );
            }
        }
    }
    if outcome.passed && outcome.bound_checks.iter().all(|b| b.holds) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
