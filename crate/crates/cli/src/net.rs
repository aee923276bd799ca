//! `net-run` and `net-sweep`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use clearsearch::network::{parse_tntp, simulate, Matching, Mode, Network, Run, RunConfig, RunReport};
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{csv_row, fmt_f64};
use crate::grid::parse_grid;
use crate::{emit, CmdResult, Failure, MatchingArg, ModeArg, EXIT_PARSE, EXIT_USAGE};

/// Where runs start: a fixed vertex id, or roots drawn uniformly from the vertices by
/// a PCG-XSH-RR 64/32 generator seeded with the given value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSpec {
    Label(u64),
    Random(u64),
}

impl FromStr for RootSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(seed) = s.strip_prefix("random:") {
            seed.parse().map(RootSpec::Random).map_err(|_| format!("seed {seed:?} is not an unsigned integer"))
        } else {
            s.parse().map(RootSpec::Label).map_err(|_| format!("expected a vertex id or random:SEED, got {s:?}"))
        }
    }
}

impl std::fmt::Display for RootSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RootSpec::Label(l) => write!(f, "{l}"),
            RootSpec::Random(s) => write!(f, "random:{s}"),
        }
    }
}

#[derive(Debug, Args)]
pub struct NetArgs {
    #[arg(long)]
    tntp: PathBuf,
    /// Vertex id, or `random:SEED`. Defaults to the smallest vertex id.
    #[arg(long)]
    root: Option<RootSpec>,
    #[arg(long = "T")]
    budget: f64,
    /// Rpt(r) only: tours do not return to their start.
    #[arg(long)]
    open_ended: bool,
    #[arg(long, value_enum, default_value_t = MatchingArg::Exact)]
    matching: MatchingArg,
    #[arg(long, default_value_t = 1)]
    runs: usize,
}

impl NetArgs {
    fn matching(&self) -> Matching {
        match self.matching {
            MatchingArg::Exact => Matching::Exact,
            MatchingArg::Greedy => Matching::Greedy,
        }
    }

    fn config(&self, r: f64, mode: ModeArg) -> RunConfig {
        let mode = match mode {
            ModeArg::Cpt => Mode::Cpt,
            ModeArg::Rpt => Mode::Rpt,
        };
        RunConfig { open_ended: self.open_ended, matching: self.matching(), ..RunConfig::new(r, self.budget, mode) }
    }
}

fn load(args: &NetArgs) -> Result<Network, Failure> {
    let text = std::fs::read_to_string(&args.tntp).map_err(|e| {
        Failure::new(1, anyhow::Error::new(e).context(format!("reading {}", args.tntp.display())))
    })?;
    parse_tntp(&text).map_err(|e| Failure::new(EXIT_PARSE, anyhow::Error::new(e).context(args.tntp.display().to_string())))
}

/// Vertex indices of the roots, one per run, in seed order.
fn roots(net: &Network, args: &NetArgs) -> Result<Vec<usize>, Failure> {
    if args.runs == 0 {
        return Err(Failure::usage("--runs must be at least 1"));
    }
    match args.root {
        None => Ok(vec![net.root(); args.runs]),
        Some(RootSpec::Label(label)) => {
            let v = net.vertex(label).ok_or_else(|| Failure::usage(format!("vertex {label} is not in the network")))?;
            Ok(vec![v; args.runs])
        }
        Some(RootSpec::Random(seed)) => {
            let candidates = net.non_isolated_vertices();
            if candidates.is_empty() {
                return Err(Failure::usage("the network has no edges"));
            }
            let mut rng = Pcg32::seed_from_u64(seed);
            Ok((0..args.runs).map(|_| candidates[rng.random_range(0..candidates.len())]).collect())
        }
    }
}

#[derive(Serialize)]
struct NetworkInfo {
    file: String,
    vertices: usize,
    edges: usize,
    total_length: f64,
}

impl NetworkInfo {
    fn new(net: &Network, path: &Path) -> Self {
        NetworkInfo {
            file: path.display().to_string(),
            vertices: net.n_vertices(),
            edges: net.edges().len(),
            total_length: net.total_length(),
        }
    }
}

#[derive(Serialize)]
struct Summary {
    runs: usize,
    mean_competitive_ratio: Option<f64>,
    sd_competitive_ratio: Option<f64>,
    #[serde(rename = "mean_clearance_at_T")]
    mean_clearance_at_t: f64,
    #[serde(rename = "mean_lower_bound_Rhat")]
    mean_lower_bound_rhat: f64,
    covered_all: usize,
}

#[derive(Serialize)]
struct NetRunOutput {
    network: NetworkInfo,
    root: String,
    config: RunConfig,
    summary: Summary,
    runs: Vec<RunReport>,
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

fn summarize(reports: &[RunReport]) -> Summary {
    let crs: Vec<f64> = reports.iter().filter_map(|r| r.competitive_ratio).collect();
    let mean_cr = mean(&crs);
    let sd = mean_cr.filter(|_| crs.len() > 1).map(|mu| {
        (crs.iter().map(|c| (c - mu).powi(2)).sum::<f64>() / (crs.len() - 1) as f64).sqrt()
    });
    let clearances: Vec<f64> = reports.iter().map(|r| r.clearance_at_budget).collect();
    let bounds: Vec<f64> = reports.iter().map(|r| r.lower_bound_rhat).collect();
    Summary {
        runs: reports.len(),
        mean_competitive_ratio: mean_cr,
        sd_competitive_ratio: sd,
        mean_clearance_at_t: mean(&clearances).unwrap_or(0.0),
        mean_lower_bound_rhat: mean(&bounds).unwrap_or(0.0),
        covered_all: reports.iter().filter(|r| r.covered_all).count(),
    }
}

fn curve_csv(run: &Run) -> String {
    let mut text = String::from("time,clearance\n");
    let curve = run.trace.curve();
    for &(t, c) in curve {
        text.push_str(&csv_row(&[fmt_f64(t), fmt_f64(c)]));
    }
    let end = run.report.time_used;
    if curve.last().is_some_and(|&(t, _)| t < end) {
        text.push_str(&csv_row(&[fmt_f64(end), fmt_f64(run.report.clearance_at_budget)]));
    }
    text
}

pub fn net_run(args: &NetArgs, r: f64, mode: ModeArg, curves: Option<&Path>, out: Option<&Path>) -> CmdResult {
    let net = load(args)?;
    let roots = roots(&net, args)?;
    let cfg = args.config(r, mode);
    let runs: Vec<Run> = roots.par_iter().map(|&root| simulate(&net, root, &cfg)).collect::<Result<_, _>>()?;
    if let Some(dir) = curves {
        std::fs::create_dir_all(dir)?;
        for (i, run) in runs.iter().enumerate() {
            let path = dir.join(format!("run_{i:03}_root_{}.csv", run.report.root));
            emit(Some(&path), &curve_csv(run))?;
        }
    }
    let reports: Vec<RunReport> = runs.into_iter().map(|run| run.report).collect();
    let output = NetRunOutput {
        network: NetworkInfo::new(&net, &args.tntp),
        root: args.root.map_or_else(|| net.label(net.root()).to_string(), |r| r.to_string()),
        config: cfg,
        summary: summarize(&reports),
        runs: reports,
    };
    let mut text = serde_json::to_string_pretty(&output)?;
    text.push('\n');
    emit(out, &text)
}

pub const SWEEP_HEADER: &str = "r,cr_cpt,cr_rpt";

pub fn net_sweep(args: &NetArgs, r_grid: &str, out: Option<&Path>) -> CmdResult {
    let rs = parse_grid(r_grid).map_err(|e| Failure::new(EXIT_USAGE, e))?;
    if let Some(r) = rs.iter().find(|&&r| !(r > 1.0)) {
        return Err(Failure::usage(format!("every r must exceed 1, got {r}")));
    }
    let net = load(args)?;
    let roots = roots(&net, args)?;
    let n_roots = roots.len();
    let jobs: Vec<(usize, ModeArg, usize)> = (0..rs.len())
        .flat_map(|i| [ModeArg::Cpt, ModeArg::Rpt].into_iter().flat_map(move |m| (0..n_roots).map(move |j| (i, m, j))))
        .collect();
    let ratios: Vec<f64> = jobs
        .par_iter()
        .map(|&(i, mode, j)| {
            let report = simulate(&net, roots[j], &args.config(rs[i], mode))?.report;
            Ok(report.competitive_ratio.unwrap_or(f64::NAN))
        })
        .collect::<Result<_, Failure>>()?;
    let mut text = format!("{SWEEP_HEADER}\n");
    for (i, &r) in rs.iter().enumerate() {
        let cell = |m: usize| mean(&ratios[(2 * i + m) * n_roots..(2 * i + m + 1) * n_roots]).unwrap();
        text.push_str(&csv_row(&[fmt_f64(r), fmt_f64(cell(0)), fmt_f64(cell(1))]));
    }
    emit(out, &text)
}
