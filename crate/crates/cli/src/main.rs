//! `sumfree` - compute with sum-free, inverse-closed subsets of finite
//! fields: spectra and inequality diagnostics, Kloosterman sums, explicit
//! constructions, density searches, and a certified-bound verifier.
//!
//! Exit codes: 0 success (for `verify`: everything proved), 1 a claim was
//! refuted, 2 a claim was inconclusive, 3 usage/file/precondition errors.

mod commands;
mod output;
mod runlog;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "sumfree", version, about)]
struct Cli {
    /// Directory for reports and the run log
    #[arg(long, global = true, env = "SUMFREE_RESULTS_DIR", default_value = "./results")]
    results_dir: PathBuf,
    /// Cap on parallel workers (defaults to all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
enum Command {
    /// Fourier-spectrum diagnostics for a set file
    Spectrum(SpectrumArgs),
    /// Largest sum-free (sigma) or sum-free inverse-closed (mu) subsets
    Search(SearchArgs),
    /// Explicit constructions: char2 trace set or prime interval set
    Construct(ConstructArgs),
    /// Verify optimization claims (built-in certificate suite or a file)
    Verify(VerifyArgs),
    /// Sample a catalog expression as CSV for plotting
    Figure(FigureArgs),
    /// Kloosterman sums with their square-root bounds
    Kloosterman(KloostermanArgs),
}

#[derive(Debug, Args, Serialize)]
struct SpectrumArgs {
    /// Set file (JSON) over a prime field
    set_file: PathBuf,
    /// Tail-bound index k
    #[arg(long)]
    k: Option<usize>,
    /// Self-inverse bound with the m largest frequencies (paired +/-)
    #[arg(long)]
    m: Option<usize>,
    /// Doubling bounds at this frequency
    #[arg(long)]
    r: Option<u64>,
    /// Density floor for the tail bound (defaults to the set's density)
    #[arg(long)]
    alpha0: Option<f64>,
    /// Fail unless the set is inverse-closed
    #[arg(long)]
    require_inverse_closed: bool,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ProblemKind {
    /// Largest sum-free subset
    Sigma,
    /// Largest sum-free inverse-closed subset
    Mu,
}

#[derive(Debug, Args, Serialize)]
struct SearchArgs {
    /// Which density to maximize
    kind: ProblemKind,
    /// Prime modulus
    #[arg(long, conflicts_with_all = ["n", "scan"])]
    p: Option<u64>,
    /// Binary-field degree
    #[arg(long, conflicts_with = "scan")]
    n: Option<u32>,
    /// Override modulus for the binary field (hex bitmask)
    #[arg(long, requires = "n")]
    modulus: Option<String>,
    /// Scan an inclusive prime range "lo..hi", emitting CSV rows
    #[arg(long)]
    scan: Option<String>,
    /// Override the exhaustive field-size limit
    #[arg(long)]
    limit: Option<u64>,
    /// Allow heuristic (non-optimal) search beyond the exhaustive limit
    #[arg(long)]
    heuristic: bool,
    /// Heuristic seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Heuristic move budget
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    /// Write result JSON (or scan CSV) here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ConstructionKind {
    /// Trace-one intersection in GF(2^n), density 1/4 - o(1)
    Char2,
    /// Middle-third interval intersection in F_p, density 1/9 - o(1)
    Interval,
}

#[derive(Debug, Args, Serialize)]
struct ConstructArgs {
    kind: ConstructionKind,
    /// Binary-field degree (char2)
    #[arg(long)]
    n: Option<u32>,
    /// Override modulus for the binary field (hex bitmask)
    #[arg(long, requires = "n")]
    modulus: Option<String>,
    /// Prime modulus (interval)
    #[arg(long)]
    p: Option<u64>,
    /// Write the set file here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    /// Claims file (JSON object or array)
    #[arg(required_unless_present = "theorem", conflicts_with = "theorem")]
    claims_file: Option<PathBuf>,
    /// Run the built-in certificate suite
    #[arg(long)]
    theorem: bool,
    /// Box budget per claim for the built-in suite
    #[arg(long)]
    budget: Option<u64>,
    /// Write the JSON report here (default: <results-dir>/verify_report.json)
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct FigureArgs {
    /// Catalog expression (E1, E2bx, E3, E4a, E4pos, E4vtx, E4b, E5, E5final)
    expr: String,
    lo: f64,
    hi: f64,
    samples: usize,
}

#[derive(Debug, Args, Serialize)]
struct KloostermanArgs {
    /// Prime modulus
    #[arg(long, conflicts_with = "n")]
    p: Option<u64>,
    /// Binary-field degree
    #[arg(long)]
    n: Option<u32>,
    /// Override modulus for the binary field (hex bitmask)
    #[arg(long, requires = "n")]
    modulus: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: i64,
    /// Second coefficient (prime fields only)
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. `sumfree figure | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("warning: could not configure {threads} worker threads: {e}");
        }
    }

    let (name, params) = describe(&cli.command);
    let started = runlog::now();
    let result = dispatch(&cli);
    let outcome = match &result {
        Ok((_, summary)) => summary.clone(),
        Err(e) => format!("error: {e:#}"),
    };
    runlog::append(
        &cli.results_dir,
        &runlog::RunRecord {
            command: name,
            params,
            started,
            finished: runlog::now(),
            outcome,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    );

    match result {
        Ok((code, _)) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn describe(cmd: &Command) -> (String, serde_json::Value) {
    let (name, value) = match cmd {
        Command::Spectrum(a) => ("spectrum", serde_json::to_value(a)),
        Command::Search(a) => ("search", serde_json::to_value(a)),
        Command::Construct(a) => ("construct", serde_json::to_value(a)),
        Command::Verify(a) => ("verify", serde_json::to_value(a)),
        Command::Figure(a) => ("figure", serde_json::to_value(a)),
        Command::Kloosterman(a) => ("kloosterman", serde_json::to_value(a)),
    };
    (name.to_string(), value.unwrap_or(serde_json::Value::Null))
}

/// Returns (exit code, one-line outcome summary for the run log).
fn dispatch(cli: &Cli) -> anyhow::Result<(u8, String)> {
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Search(a) => commands::search(a),
        Command::Construct(a) => commands::construct(a),
        Command::Verify(a) => commands::verify(a, &cli.results_dir),
        Command::Figure(a) => commands::figure(a),
        Command::Kloosterman(a) => commands::kloosterman(a),
    }
}
