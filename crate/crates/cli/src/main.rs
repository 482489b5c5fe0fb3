//! `nupair`: batch front end for arithmetic-function experiments.

mod commands;
mod error;
mod expr;
mod report;
mod specfile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nupair_core::pairs::DEFAULT_DENSITY_SLACK;
use nupair_core::{TailDeclaration, ZeroTest};

use commands::{DensityCommand, MeanValueOptions, PairOptions, Settings};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "nupair", version, about = "Dirichlet convolution, support densities and nu-pair experiments")]
struct Cli {
    /// Work in floating complex arithmetic instead of exact rationals.
    #[arg(long, global = true)]
    floating: bool,

    /// Zero test for floating tables: `abs:TAU` or `rel:TAU`.
    #[arg(long, global = true, value_parser = parse_zero_test, default_value = "abs:1e-12")]
    zero_test: ZeroTest,

    /// Largest table length any command may request.
    #[arg(long, global = true, env = "NUPAIR_MAX_N", default_value_t = 10_000_000)]
    max_n: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a function on [1, N] as `n,value` CSV.
    Tabulate {
        spec: PathBuf,
        n: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Dirichlet convolution F * G on [1, N].
    Convolve {
        f: PathBuf,
        g: PathBuf,
        n: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Dirichlet inverse of F on [1, N].
    Invert {
        f: PathBuf,
        n: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build the pair (F, F * NU) and run the requested analyses.
    Pair(PairArgs),
    /// Exact and certified densities.
    Density {
        #[command(subcommand)]
        command: DensityArgs,
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Mean value of |F * NU| truncated at each Y, with drift certificates.
    MeanValue {
        f: PathBuf,
        nu: PathBuf,
        n: u64,
        /// Truncation levels, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<u64>,
        /// Evaluation point; defaults to N.
        #[arg(long)]
        x: Option<u64>,
        /// Overrides the spec's declared tail of sum |f(d)|/d.
        #[arg(long, value_parser = specfile::parse_tail)]
        weighted_tail: Option<TailDeclaration>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
struct PairArgs {
    f: PathBuf,
    nu: PathBuf,
    n: u64,
    /// Point at which densities are reported; defaults to N.
    #[arg(long)]
    density_x: Option<u64>,
    /// Checkpoints, comma-separated; defaults to powers of ten up to x.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<u64>,
    /// Mean value of |g| along the checkpoints.
    #[arg(long)]
    mean_value: bool,
    /// The (S, T) decomposition of supp g and the single-divisor witness.
    #[arg(long)]
    classes: bool,
    /// Check d(supp g) >= C_nu / sum over supp f of 1/n.
    #[arg(long)]
    verify_bound: bool,
    /// Also report the mean of |g_Y| for f truncated at Y.
    #[arg(long)]
    truncate: Option<u64>,
    /// Prime cutoff for Euler products.
    #[arg(long, default_value_t = 100_000)]
    primes: u64,
    /// Allowed shortfall of the empirical density below the bound.
    #[arg(long, default_value_t = DEFAULT_DENSITY_SLACK)]
    slack: f64,
    /// Overrides the declared tail of sum over supp f of 1/n.
    #[arg(long, value_parser = specfile::parse_tail)]
    f_tail: Option<TailDeclaration>,
    /// Declared tail of sum over supp g of 1/n.
    #[arg(long, value_parser = specfile::parse_tail)]
    g_tail: Option<TailDeclaration>,
    /// Directory receiving report.csv and summary.txt.
    #[arg(long, default_value = "nupair-report")]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum DensityArgs {
    /// Density of the integers avoiding every forbidden class `b:r1|r2`.
    Sieve {
        entries: Vec<String>,
        /// CSV of `b,r1|r2` lines, read before the positional entries.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Keep only the first K entries and bound the rest by the declared tail.
        #[arg(long)]
        truncate: Option<usize>,
        /// Per-entry density bounds for the tail, comma-separated.
        #[arg(long, value_delimiter = ',')]
        tail_constants: Vec<f64>,
        /// Bound on the tail constants of entries not listed.
        #[arg(long)]
        tail_beyond: Option<f64>,
    },
    /// Density of the set of multiples of a finite set `a1,a2,...`.
    Multiples {
        #[arg(value_delimiter = ',', required = true)]
        set: Vec<u64>,
    },
    /// Euler product for the density of supp NU.
    Euler {
        spec: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        primes: u64,
    },
    /// The constant C_nu.
    Cnu {
        spec: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        primes: u64,
    },
}

fn parse_zero_test(s: &str) -> Result<ZeroTest, String> {
    let (kind, tau) = s.split_once(':').ok_or_else(|| format!("expected abs:TAU or rel:TAU, got '{s}'"))?;
    let tau: f64 = tau.parse().map_err(|_| format!("bad threshold '{tau}'"))?;
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(format!("threshold must be finite and >= 0, got {tau}"));
    }
    match kind {
        "abs" => Ok(ZeroTest::Absolute(tau)),
        "rel" => Ok(ZeroTest::Relative(tau)),
        _ => Err(format!("unknown zero test '{kind}'")),
    }
}

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    let settings = Settings { floating: cli.floating, zero_test: cli.zero_test, max_n: cli.max_n };
    match cli.command {
        Command::Tabulate { spec, n, out } => commands::tabulate(&spec, n, out.as_deref(), &settings)?,
        Command::Convolve { f, g, n, out } => commands::convolve_cmd(&f, &g, n, out.as_deref(), &settings)?,
        Command::Invert { f, n, out } => commands::invert(&f, n, out.as_deref(), &settings)?,
        Command::Pair(a) => {
            let o = PairOptions {
                f: a.f,
                nu: a.nu,
                n: a.n,
                density_x: a.density_x,
                checkpoints: a.checkpoints,
                mean_value: a.mean_value,
                classes: a.classes,
                verify_bound: a.verify_bound,
                truncate: a.truncate,
                primes: a.primes,
                slack: a.slack,
                f_tail: a.f_tail,
                g_tail: a.g_tail,
                out: a.out,
            };
            return commands::pair(&o, &settings);
        }
        Command::Density { command, out } => {
            let cmd = match command {
                DensityArgs::Sieve { entries, file, truncate, tail_constants, tail_beyond } => {
                    DensityCommand::Sieve { entries, file, truncate, tail_constants, tail_beyond }
                }
                DensityArgs::Multiples { set } => DensityCommand::Multiples(set),
                DensityArgs::Euler { spec, primes } => DensityCommand::Euler { spec, primes },
                DensityArgs::Cnu { spec, primes } => DensityCommand::Cnu { spec, primes },
            };
            commands::density(&cmd, out.as_deref())?
        }
        Command::MeanValue { f, nu, n, y, x, weighted_tail, out } => {
            let o = MeanValueOptions { f, nu, n, y, x, weighted_tail };
            return commands::mean_value(&o, out.as_deref(), &settings);
        }
    }
    Ok(Vec::new())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(failed) if failed.is_empty() => ExitCode::SUCCESS,
        Ok(failed) => {
            for f in &failed {
                eprintln!("nupair: verification failed: {f}");
            }
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("nupair: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
