use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use joint_schmidt::cli::{self, BlochOptions, Inputs, Method, RunReport, SelftestMode};
use joint_schmidt::error::Result;
use joint_schmidt::state::Side;

#[derive(Parser)]
#[command(name = "jschmidt", version, about = "Joint Schmidt decompositions and Bloch sector checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Seed for random states, bases and optimizer restarts.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Local dimensions of random states.
    #[arg(long, global = true, num_args = 2, value_names = ["A", "B"])]
    dims: Option<Vec<usize>>,
    /// Use N random states (or tuples) instead of files.
    #[arg(long, global = true, value_name = "N")]
    random: Option<usize>,
    /// Replace every default tolerance.
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
    /// Leave the timestamp out so output is reproducible.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Normalize input states instead of rejecting them.
    #[arg(long, global = true)]
    normalize: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Svd,
    Diag,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    /// Reduce over B (Tr_B).
    A,
    /// Reduce over A (Tr_A).
    B,
}

#[derive(Subcommand)]
enum Command {
    /// Schmidt decomposition with reconstruction and purity checks.
    Schmidt { files: Vec<PathBuf> },
    /// Joint decomposition of two states.
    Joint {
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Which reduced operator to decompose (svd and diag only).
        #[arg(long, value_enum, default_value = "a")]
        side: SideArg,
        /// Treat a refused decomposition as a failure.
        #[arg(long)]
        strict: bool,
    },
    /// Purity identities on 1, 2 or 4 states.
    PurityCheck { files: Vec<PathBuf> },
    /// Bloch sector lengths and contributions.
    BlochSectors {
        files: Vec<PathBuf>,
        /// Scan n random local bases.
        #[arg(long, value_name = "n")]
        scan: Option<usize>,
        /// Maximize the diagonal 2-sector over local bases.
        #[arg(long)]
        optimize: bool,
        #[arg(long, default_value_t = 3)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        /// Write scan rows to this CSV file.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Majorization, transfer matrices and the off-diagonal inequality chain.
    AppendixCheck {
        files: Vec<PathBuf>,
        /// Random local bases per state, besides the given one.
        #[arg(long, default_value_t = 5)]
        bases: usize,
        /// Count known discrepancies as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Run all property suites.
    Selftest {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
    },
}

fn run(cli: Cli) -> Result<RunReport> {
    let g = &cli.global;
    let inputs = |files: &[PathBuf]| Inputs {
        files: files.to_vec(),
        random: g.random,
        dims: g.dims.as_ref().map(|d| (d[0], d[1])).unwrap_or((2, 2)),
        seed: g.seed,
        normalize: g.normalize,
        tol: g.tol,
    };
    match &cli.command {
        Command::Schmidt { files } => cli::cmd_schmidt(&inputs(files)),
        Command::Joint { files, method, side, strict } => {
            let method = match method {
                MethodArg::Svd => Method::Svd,
                MethodArg::Diag => Method::Diag,
                MethodArg::Auto => Method::Auto,
            };
            let side = match side {
                SideArg::A => Side::TracedOverB,
                SideArg::B => Side::TracedOverA,
            };
            cli::cmd_joint(&inputs(files), method, side, *strict)
        }
        Command::PurityCheck { files } => cli::cmd_purity(&inputs(files)),
        Command::BlochSectors { files, scan, optimize, restarts, iters, csv } => {
            let opts =
                BlochOptions { scan: *scan, optimize: *optimize, restarts: *restarts, iters: *iters, csv: csv.clone() };
            cli::cmd_bloch(&inputs(files), &opts)
        }
        Command::AppendixCheck { files, bases, strict } => cli::cmd_appendix(&inputs(files), *bases, *strict),
        Command::Selftest { full, .. } => {
            let mode = if *full { SelftestMode::Full } else { SelftestMode::Quick };
            cli::cmd_selftest(mode, g.seed, g.tol)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stamp = !cli.global.no_timestamp;
    match run(cli) {
        Ok(report) => {
            let report = if stamp { report.stamp() } else { report };
            let _ = writeln!(std::io::stdout(), "{}", report.to_json());
            if report.success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
