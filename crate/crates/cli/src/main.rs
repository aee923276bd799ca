//! `clearsearch`: command-line runner for the clearance solvers and experiments.

mod format;
mod grid;
mod net;
mod solve;

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

/// Exit status and message of a failed command.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    error: anyhow::Error,
}

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_PARSE: u8 = 4;

impl Failure {
    pub fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure { code, error: error.into() }
    }

    pub fn usage(msg: impl Display) -> Self {
        Failure::new(EXIT_USAGE, anyhow::anyhow!("{msg}"))
    }
}

impl From<clearsearch::Error> for Failure {
    fn from(e: clearsearch::Error) -> Self {
        use clearsearch::Error as E;
        let code = match e {
            E::InvalidParameter(_) | E::NoRealRoots { .. } | E::UnknownVertex(_) => EXIT_USAGE,
            E::InfeasibleBudget(_) => EXIT_INFEASIBLE,
            E::Parse { .. } => EXIT_PARSE,
            E::DegenerateSystem { .. } | E::Disconnected(_) => 1,
        };
        Failure::new(code, e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(1, e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new(1, e)
    }
}

pub type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "clearsearch", version, about = "Budgeted search with maximum clearance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal strategy on the line for a budget (--T) or a clearance target (--L).
    #[command(group(ArgGroup::new("goal").required(true)))]
    Line {
        #[arg(long)]
        rho: f64,
        #[arg(long = "T", group = "goal")]
        budget: Option<f64>,
        #[arg(long = "L", group = "goal")]
        target: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal strategy on the m-ray star.
    #[command(group(ArgGroup::new("goal").required(true)))]
    #[command(group(ArgGroup::new("ratio").required(true)))]
    Star {
        #[arg(long)]
        m: usize,
        #[arg(long, group = "ratio")]
        rho: Option<f64>,
        /// Competitive ratio as a multiple of the optimal one.
        #[arg(long = "R-mult", group = "ratio")]
        r_mult: Option<f64>,
        #[arg(long = "T", group = "goal")]
        budget: Option<f64>,
        #[arg(long = "L", group = "goal")]
        target: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV comparing the optimal star strategy with the two baselines over a grid.
    #[command(group(ArgGroup::new("grid").required(true)))]
    StarCompare {
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long = "R-mult", default_value_t = 1.0)]
        r_mult: f64,
        #[arg(long = "T", default_value_t = 1e8)]
        budget: f64,
        /// Budgets, e.g. `log:1:15:29`.
        #[arg(long = "T-grid", group = "grid")]
        t_grid: Option<String>,
        /// Ray counts, e.g. `lin:3:20:18`.
        #[arg(long = "m-grid", group = "grid")]
        m_grid: Option<String>,
        /// Ratio multiples, e.g. `lin:1:3:21`.
        #[arg(long = "R-grid", group = "grid")]
        r_grid: Option<String>,
        /// A named grid; overrides --m, --R-mult and --T.
        #[arg(long, group = "grid")]
        preset: Option<solve::Preset>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs Cpt(r) or Rpt(r) on a TNTP network and writes a JSON summary.
    NetRun {
        #[command(flatten)]
        net: net::NetArgs,
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Rpt)]
        mode: ModeArg,
        /// Directory for per-run `time,clearance` CSV files.
        #[arg(long)]
        curves: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV of mean competitive ratios of both strategies over a grid of r.
    NetSweep {
        #[command(flatten)]
        net: net::NetArgs,
        #[arg(long = "r-grid", default_value = "lin:1.2:4:15")]
        r_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Cpt,
    Rpt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatchingArg {
    Exact,
    Greedy,
}

/// Writes `text` to `out`, or to stdout when no file is given.
pub fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::new(1, anyhow::Error::new(e).context(format!("writing {}", path.display())))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn configure_threads() -> CmdResult {
    let Ok(value) = std::env::var("CLEARSEARCH_THREADS") else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("CLEARSEARCH_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::new(1, e))
}

fn run(cli: Cli) -> CmdResult {
    configure_threads()?;
    match cli.command {
        Command::Line { rho, budget, target, out } => solve::line(rho, budget, target, out.as_deref()),
        Command::Star { m, rho, r_mult, budget, target, out } => {
            solve::star(m, rho, r_mult, budget, target, out.as_deref())
        }
        Command::StarCompare { m, r_mult, budget, t_grid, m_grid, r_grid, preset, out } => {
            let grid = solve::CompareGrid::from_args(m, r_mult, budget, t_grid, m_grid, r_grid, preset)?;
            solve::star_compare(&grid, out.as_deref())
        }
        Command::NetRun { net, r, mode, curves, out } => net::net_run(&net, r, mode, curves.as_deref(), out.as_deref()),
        Command::NetSweep { net, r_grid, out } => net::net_sweep(&net, &r_grid, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
