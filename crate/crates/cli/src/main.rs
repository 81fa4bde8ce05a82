mod commands;
mod output;
mod parse;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "wallcross", version, about = "Exact wall-crossing invariants for quivers and curves")]
struct Cli {
    /// Worker threads for parallel summation; results do not depend on it.
    #[arg(long, global = true, env = "WALLCROSS_JOBS")]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transformation coefficients S, T, U, V.
    Coeffs(CoeffsArgs),
    /// Invariants of quiver representations.
    Quiver(QuiverArgs),
    /// Invariants of vector bundles on a curve.
    Curve(CurveArgs),
    /// Run the seeded identity suites.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Coefficient {
    S,
    T,
    U,
    V,
}

#[derive(Debug, Args)]
struct CoeffsArgs {
    #[arg(value_enum)]
    which: Coefficient,
    /// Classes of the ordered parts, e.g. "[1,0];[0,1]".
    #[arg(long)]
    parts: String,
    /// Source stability: "trivial", "slope c=1,0 r=1,1", or its JSON form.
    #[arg(long)]
    from: String,
    /// Target stability.
    #[arg(long)]
    to: String,
    /// T only: one-based order relations "1<2,1<3" on the parts (default: the chain).
    #[arg(long)]
    order: Option<String>,
    /// T only: one-based map of parts to blocks, e.g. "1,1,2".
    #[arg(long)]
    phi: Option<String>,
    /// V only: one-based directed tree "1>2,3>1".
    #[arg(long)]
    tree: Option<String>,
}

#[derive(Debug, Args)]
struct QuiverArgs {
    /// A quiver JSON file, or one of "kronecker", "kronecker:M", "one-vertex".
    #[arg(long)]
    quiver: String,
    /// Dimension vector "1,1"; repeat for several rows.
    #[arg(long = "class", required = true)]
    classes: Vec<String>,
    #[arg(long, default_value = "trivial")]
    stability: String,
    /// Evaluate at ℓ = q; repeatable.
    #[arg(long = "eval-at")]
    eval_at: Vec<String>,
    /// Compare every evaluation with a finite-field count.
    #[arg(long)]
    oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CurveStability {
    Gieseker,
    Purity,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long)]
    genus: i64,
    #[arg(long)]
    rank: i64,
    #[arg(long, allow_hyphen_values = true)]
    degree: i64,
    #[arg(long, value_enum, default_value_t = CurveStability::Gieseker)]
    stability: CurveStability,
    /// Lowest z-exponent retained.
    #[arg(long, allow_hyphen_values = true, default_value_t = wallcross_core::curve_model::DEFAULT_FLOOR)]
    floor: i64,
    /// Report the Poincaré polynomial of the coprime moduli space instead.
    #[arg(long)]
    poincare: bool,
    #[arg(long, default_value_t = wallcross_core::curve_model::DEFAULT_GUARD)]
    guard: usize,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long = "max-n", default_value_t = 5)]
    max_n: usize,
    #[arg(long, default_value_t = 100)]
    cases: usize,
}

/// Failures, split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Malformed or out-of-range input: exit 1.
    Input(String),
    /// A computed identity or oracle comparison did not hold: exit 2.
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Mismatch(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Coeffs(a) => commands::coeffs(a),
        Command::Quiver(a) => commands::quiver(a),
        Command::Curve(a) => commands::curve(a),
        Command::Check(a) => commands::check(a),
    };
    let (report, failure) = match result {
        Ok(pair) => pair,
        Err(f) => (None, Some(f)),
    };
    if let Some(r) = report {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        if let Err(e) = r.write(cli.format, &mut lock).and_then(|_| lock.flush()) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Mismatch(m) => eprintln!("mismatch: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
