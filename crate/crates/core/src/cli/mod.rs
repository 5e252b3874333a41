//! Command-line front end shared by the `sodkit` binary and batch runs.

mod batch;
mod commands;
mod registry;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use batch::{parse_batch, run_batch, BatchConfig, BatchJob};
pub use registry::{resolve_poly, resolve_real_handle, REGISTRY_HELP};

use crate::report::TOOL_VERSION;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("{0}")]
    Rejected(String),
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Parser)]
#[command(name = "sodkit", version, about = "Second-order differencing polynomials, p-adic lifting and square-function checks")]
pub struct Cli {
    /// Seed for every sampled quantity.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; SODKIT_JOBS is used when absent.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Adds wall-clock timings to the output (breaks byte-identical reruns).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Writes the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First and second order differencing polynomials of phi.
    Sod(SodArgs),
    /// Lifts the simple roots of phi mod p to roots mod p^N.
    Hensel(HenselArgs),
    /// Splitting conditions for 2X^k - kX^2 at a prime.
    JbVerify(JbArgs),
    /// Primes up to a bound meeting the splitting hypotheses.
    PrimeSearch(PrimeSearchArgs),
    /// Counts surviving cell pairs for every admissible base pair.
    KdvCount(KdvArgs),
    /// Solution counts of the two-equation system over an integer set.
    DioCount(DioArgs),
    /// Weighted L4 norms of the extension operator and the square function over R.
    VerifyReal(VerifyRealArgs),
    /// Exact L4 comparison over Q_p by counting and by character sums.
    VerifyPadic(VerifyPadicArgs),
    /// Voorhoeve index of the differenced curve on sampled pairs in the complex unit square.
    Voorhoeve(VoorhoeveArgs),
    /// The non-Archimedean failures of Rolle's theorem and of quadratic interpolation.
    Rolle(RolleArgs),
    /// Runs every job of a config file.
    Batch(BatchArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sod(_) => "sod",
            Command::Hensel(_) => "hensel",
            Command::JbVerify(_) => "jb-verify",
            Command::PrimeSearch(_) => "prime-search",
            Command::KdvCount(_) => "kdv-count",
            Command::DioCount(_) => "dio-count",
            Command::VerifyReal(_) => "verify-real",
            Command::VerifyPadic(_) => "verify-padic",
            Command::Voorhoeve(_) => "voorhoeve",
            Command::Rolle(_) => "rolle",
            Command::Batch(_) => "batch",
        }
    }
}

#[derive(Debug, Args)]
pub struct SodArgs {
    /// Curve name or polynomial.
    #[arg(long)]
    pub phi: String,
}

#[derive(Debug, Args)]
pub struct HenselArgs {
    #[arg(long)]
    pub phi: String,
    #[arg(long)]
    pub p: u64,
    /// Target precision N.
    #[arg(long, visible_alias = "N", default_value_t = 8)]
    pub precision: u32,
    /// Lift only this residue.
    #[arg(long)]
    pub root: Option<u64>,
}

#[derive(Debug, Args)]
pub struct JbArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = crate::padic::DEFAULT_PRECISION)]
    pub precision: u32,
    #[arg(long, default_value_t = crate::padic::DEFAULT_SAMPLES)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct PrimeSearchArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub bound: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
    Padic,
}

#[derive(Debug, Args)]
pub struct KdvArgs {
    #[arg(long, value_enum)]
    pub field: FieldArg,
    /// The prime, for --field padic.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub phi: String,
    /// Cells per dimension (a power of p over Q_p).
    #[arg(long = "R", visible_alias = "r")]
    pub r: u64,
    /// Ball constant as a rational such as 1/4; estimated (and flagged heuristic if uncertified) when absent.
    #[arg(long = "C", visible_alias = "c")]
    pub c: Option<String>,
    /// Count every admissible base pair (the default unless --base is given).
    #[arg(long)]
    pub all_bases: bool,
    /// One base pair as two cell indices "i,j" into the partition listing.
    #[arg(long)]
    pub base: Option<String>,
    /// Sample density for the estimate of C.
    #[arg(long, default_value_t = 33)]
    pub density: usize,
}

#[derive(Debug, Args)]
pub struct DioArgs {
    #[arg(long)]
    pub phi: String,
    /// "range:a..b", "list:1,2,5" or "file:PATH".
    #[arg(long)]
    pub set_spec: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub i: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightArg {
    Fejer,
    Indicator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    F32,
    F64,
}

#[derive(Debug, Args)]
pub struct VerifyRealArgs {
    /// Polynomial curve.
    #[arg(long, conflicts_with = "handle")]
    pub phi: Option<String>,
    /// Registry name, including cosh.
    #[arg(long)]
    pub handle: Option<String>,
    #[arg(long = "R", visible_alias = "r")]
    pub r: usize,
    #[arg(long = "C", visible_alias = "c", default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub grid_density: f64,
    #[arg(long, default_value_t = 1.0)]
    pub node_factor: f64,
    #[arg(long, value_enum, default_value_t = WeightArg::Fejer)]
    pub weight: WeightArg,
    /// Order of the nonvanishing derivative; the smallest one when absent.
    #[arg(long)]
    pub k: Option<u32>,
    /// Use the strictly convex variant (balls of diameter C R^2).
    #[arg(long)]
    pub convex: bool,
    /// Cellwise constant f as R comma separated complex numbers, e.g. "1,0.5+0.25i,-i".
    #[arg(long)]
    pub f: Option<String>,
    /// Skips the refinement pass.
    #[arg(long)]
    pub no_refine: bool,
    /// Dumps x1,x2,E4,S4 of the base lattice.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PrecisionArg::F64)]
    pub precision: PrecisionArg,
}

#[derive(Debug, Args)]
pub struct VerifyPadicArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub i: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub phi: String,
    /// Scale offset; required when the leading coefficient is not a unit.
    #[arg(long)]
    pub c: Option<u32>,
    /// Largest counting table accepted.
    #[arg(long, default_value_t = 1 << 28)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct VoorhoeveArgs {
    /// Polynomial curve over C.
    #[arg(long, visible_alias = "phi")]
    pub phi_handle: String,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 50)]
    pub pairs: usize,
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
}

#[derive(Debug, Args)]
pub struct RolleArgs {
    /// Comma separated primes.
    #[arg(long)]
    pub p_list: String,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// Config file of [job] sections.
    pub config: PathBuf,
}

/// What every subcommand prints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The statement being checked.
    pub anchor: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<f64>,
    pub result: Value,
}

impl Envelope {
    pub fn new(command: &str, anchor: &str, pass: bool, result: Value) -> Self {
        Self {
            tool: "sodkit".into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            anchor: anchor.into(),
            pass,
            seed: None,
            timing_ms: None,
            result,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// Worker count from the flag, then `SODKIT_JOBS`, then `fallback`, then the machine.
pub fn resolve_jobs(flag: Option<usize>, fallback: Option<usize>) -> usize {
    flag.filter(|n| *n > 0)
        .or_else(|| std::env::var("SODKIT_JOBS").ok().and_then(|v| v.trim().parse().ok()).filter(|n| *n > 0))
        .or(fallback.filter(|n| *n > 0))
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Envelope, CliError> {
    let start = Instant::now();
    let mut env = match &cli.command {
        Command::Batch(args) => run_batch(&parse_batch(&read_config(&args.config)?)?, cli.seed, cli.jobs, cli.timing),
        other => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(resolve_jobs(cli.jobs, None))
                .build()
                .map_err(|e| CliError::Io(e.to_string()))?;
            pool.install(|| commands::run(other, cli.seed))?
        }
    };
    if cli.timing {
        env.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(env)
}

fn read_config(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))
}

pub fn to_json(env: &Envelope) -> String {
    serde_json::to_string_pretty(env).expect("envelope serializes") + "\n"
}

/// Parses `argv`, runs the command, writes the report and returns the exit code.
pub fn parse_and_dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(env) => {
            let text = to_json(&env);
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("sodkit: writing {}: {e}", path.display());
                        return EXIT_ERROR;
                    }
                }
                None => print!("{text}"),
            }
            env.exit_code()
        }
        Err(e) => {
            eprintln!("sodkit {}: {e}", cli.command.name());
            EXIT_ERROR
        }
    }
}
