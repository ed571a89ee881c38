//! `coverlab`: near-covers, cosystolic expansion and building certificates from the
//! command line. Every subcommand prints one JSON report.
//!
//! Exit codes: 0 success, 2 invalid input, 3 capacity guard exceeded, 64 usage error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coverlab::rng::DEFAULT_SEED;
use coverlab::search::DEFAULT_MAX_ENUM;
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_INVALID: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
  name = "coverlab",
  version,
  about = "Near-covers and cosystolic expansion of simplicial complexes"
)]
struct Cli {
  #[command(subcommand)]
  command: Command,

  #[command(flatten)]
  global: Global,
}

#[derive(Args, Debug, Serialize)]
struct Global {
  /// Worker threads (default: available parallelism).
  #[arg(long, global = true)]
  threads: Option<usize>,

  /// Upper bound on state visits for exhaustive searches.
  #[arg(long, global = true, default_value_t = DEFAULT_MAX_ENUM)]
  max_enum: u64,

  /// Omit the wall-time field so identical runs produce identical bytes.
  #[arg(long, global = true)]
  stable_output: bool,

  /// Write the report here instead of stdout.
  #[arg(long, global = true)]
  report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
  /// f-vector, purity and dimension of a complex.
  Info(ComplexArgs),
  /// Exact weights c(σ) of every face.
  Weights(WeightsArgs),
  /// Build the lift Y_φ of a cochain.
  Lift(LiftArgs),
  /// Exact deficiency m(Y_φ), computed two ways.
  Deficiency(CochainArgs),
  /// Run the randomized triangle test on Y_φ.
  Test(TestArgs),
  /// Exact cosystolic expansion h₁(X; G).
  H1(H1Args),
  /// Exact cover-stability c(X; G, S).
  Stability(StabilityArgs),
  /// Check the stability/expansion inequalities on one instance.
  Verify(VerifyArgs),
  /// Write the order complex of subspaces of F_q^4.
  Building(BuildingArgs),
  /// The δ/γ certificate for A₃(F_q).
  Gamma(GammaArgs),
  /// Decode a cochain on A₃(F_q) to a nearby coboundary.
  Decode(DecodeArgs),
}

#[derive(Args, Debug, Serialize)]
struct ComplexArgs {
  #[arg(long)]
  complex: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct WeightsArgs {
  #[arg(long)]
  complex: PathBuf,
  /// Only this dimension.
  #[arg(long)]
  dim: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct CochainArgs {
  #[arg(long)]
  complex: PathBuf,
  #[arg(long)]
  cochain: PathBuf,
  /// Expected |S|; must match the group of the cochain file.
  #[arg(long)]
  set_size: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct LiftArgs {
  #[command(flatten)]
  #[serde(flatten)]
  input: CochainArgs,
  /// Write the facets of Y_φ here.
  #[arg(long)]
  out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct TestArgs {
  #[command(flatten)]
  #[serde(flatten)]
  input: CochainArgs,
  #[arg(long, default_value_t = 10_000)]
  samples: u64,
  #[arg(long, default_value_t = DEFAULT_SEED)]
  seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct GroupArgs {
  #[arg(long)]
  complex: PathBuf,
  /// `sym:t`, `cyc:t` or `gen:<perm>;<perm>;...`.
  #[arg(long)]
  group: String,
}

#[derive(Args, Debug, Serialize)]
struct H1Args {
  #[command(flatten)]
  #[serde(flatten)]
  input: GroupArgs,
  /// Scan every cochain instead of one per gauge orbit.
  #[arg(long)]
  no_gauge: bool,
  /// Include a row per non-cocycle.
  #[arg(long)]
  table: bool,
}

#[derive(Args, Debug, Serialize)]
struct StabilityArgs {
  #[command(flatten)]
  #[serde(flatten)]
  input: GroupArgs,
  #[arg(long)]
  no_gauge: bool,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
  #[command(flatten)]
  #[serde(flatten)]
  input: GroupArgs,
  /// Also certify the deficiency sandwich and nearest-cocycle bound for this cochain.
  #[arg(long)]
  cochain: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct BuildingArgs {
  #[arg(long, default_value_t = 2)]
  q: u32,
  /// Write the complex here (default: only the report).
  #[arg(long)]
  out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum GammaMode {
  Exact,
  Sampled,
}

#[derive(Args, Debug, Serialize)]
struct GammaArgs {
  #[arg(long, default_value_t = 2)]
  q: u32,
  #[arg(long, value_enum, default_value_t = GammaMode::Sampled)]
  mode: GammaMode,
  #[arg(long, default_value_t = 200)]
  samples: usize,
  #[arg(long, default_value_t = DEFAULT_SEED)]
  seed: u64,
  /// Skip the per-disc collapsibility checks.
  #[arg(long)]
  no_verify: bool,
}

#[derive(Args, Debug, Serialize)]
struct DecodeArgs {
  #[arg(long)]
  complex: PathBuf,
  #[arg(long)]
  cochain: PathBuf,
  /// Field size of the building the complex is read as.
  #[arg(long, default_value_t = 2)]
  q: u32,
  #[arg(long, default_value_t = 64)]
  orderings: usize,
  #[arg(long, default_value_t = DEFAULT_SEED)]
  seed: u64,
  /// Write the candidate cocycle here, in the cochain format.
  #[arg(long)]
  out: Option<PathBuf>,
}

/// Failure of a subcommand, mapped to an exit code.
#[derive(Debug)]
enum CliError {
  Invalid(String),
  Capacity(String),
}

impl From<coverlab::Error> for CliError {
  fn from(e: coverlab::Error) -> Self {
    if e.is_capacity() {
      CliError::Capacity(e.to_string())
    } else {
      CliError::Invalid(e.to_string())
    }
  }
}

type CliResult<T> = Result<T, CliError>;

fn config<T: Serialize>(command: &str, args: &T, global: &Global, threads: usize) -> Value {
  let mut c = serde_json::to_value(args).expect("serializable arguments");
  if let Value::Object(map) = &mut c {
    map.insert("command".into(), json!(command));
    map.insert("threads".into(), json!(threads));
    map.insert("max_enum".into(), json!(global.max_enum));
  }
  c
}

fn run(cli: Cli) -> CliResult<Value> {
  let threads = cli
    .global
    .threads
    .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
  if threads == 0 {
    return Err(CliError::Invalid("--threads must be positive".into()));
  }
  // the global pool can only be configured once per process
  let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
  let limits = coverlab::search::SearchLimits::new(cli.global.max_enum);

  let start = Instant::now();
  let g = &cli.global;
  let (cfg, body) = match &cli.command {
    Command::Info(a) => (config("info", a, g, threads), commands::info(a)?),
    Command::Weights(a) => (config("weights", a, g, threads), commands::weights(a)?),
    Command::Lift(a) => (config("lift", a, g, threads), commands::lift(a)?),
    Command::Deficiency(a) => (config("deficiency", a, g, threads), commands::deficiency(a)?),
    Command::Test(a) => (config("test", a, g, threads), commands::test(a)?),
    Command::H1(a) => (config("h1", a, g, threads), commands::h1(a, limits)?),
    Command::Stability(a) => (config("stability", a, g, threads), commands::stability(a, limits)?),
    Command::Verify(a) => (config("verify", a, g, threads), commands::verify(a, limits)?),
    Command::Building(a) => (config("building", a, g, threads), commands::building(a)?),
    Command::Gamma(a) => (config("gamma", a, g, threads), commands::gamma(a, limits)?),
    Command::Decode(a) => (config("decode", a, g, threads), commands::decode(a)?),
  };
  let mut out = body;
  let map = out.as_object_mut().expect("reports are objects");
  map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
  map.insert("config".into(), cfg);
  if !cli.global.stable_output {
    map.insert("wall_time_ms".into(), json!(start.elapsed().as_millis() as u64));
  }
  Ok(out)
}

fn main() -> ExitCode {
  let cli = match Cli::try_parse() {
    Ok(cli) => cli,
    Err(e) => {
      let _ = e.print();
      return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
    }
  };
  let report_path = cli.global.report.clone();
  match run(cli) {
    Ok(report) => {
      let text = serde_json::to_string_pretty(&report).expect("serializable report") + "\n";
      match report_path {
        Some(path) => {
          if let Err(e) = std::fs::write(&path, text) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_INVALID);
          }
        }
        None => print!("{text}"),
      }
      ExitCode::SUCCESS
    }
    Err(CliError::Invalid(msg)) => {
      eprintln!("error: {msg}");
      ExitCode::from(EXIT_INVALID)
    }
    Err(CliError::Capacity(msg)) => {
      eprintln!("error: {msg}");
      ExitCode::from(EXIT_CAPACITY)
    }
  }
}
