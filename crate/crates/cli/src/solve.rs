//! `line`, `star` and `star-compare`.

use std::path::Path;

use clap::ValueEnum;
use clearsearch::aggressive::scaled_aggressive_m;
use clearsearch::line::{solve_line_earliest, solve_line_maxclear};
use clearsearch::star::{mixed_aggressive_star, scaled_geometric, solve_star_earliest, solve_star_maxclear};
use clearsearch::{check_constraints, ConstraintReport, CyclicStrategy, SearchParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{csv_row, fmt_f64};
use crate::grid::{parse_grid, parse_m_grid};
use crate::{emit, CmdResult, Failure};

#[derive(Serialize)]
struct SolveOutput {
    m: usize,
    rho: f64,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    budget: Option<f64>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    target: Option<f64>,
    lengths: Vec<f64>,
    clearance: f64,
    duration: f64,
    which: String,
    slacks: ConstraintReport,
}

impl SolveOutput {
    fn new(s: &CyclicStrategy, budget: Option<f64>, target: Option<f64>, which: String) -> Self {
        let duration = s.duration();
        SolveOutput {
            m: s.m(),
            rho: s.rho(),
            budget,
            target,
            lengths: s.lengths().to_vec(),
            clearance: s.clearance(),
            duration,
            which,
            slacks: check_constraints(s, budget.unwrap_or(duration)),
        }
    }
}

fn variant_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn emit_json(value: &impl Serialize, out: Option<&Path>) -> CmdResult {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

pub fn line(rho: f64, budget: Option<f64>, target: Option<f64>, out: Option<&Path>) -> CmdResult {
    let output = match (budget, target) {
        (Some(t), None) => {
            let sol = solve_line_maxclear(rho, t)?;
            SolveOutput::new(&sol.strategy, Some(t), None, variant_name(&sol.which))
        }
        (None, Some(l)) => {
            let sol = solve_line_earliest(rho, l)?;
            SolveOutput::new(&sol.strategy, None, Some(l), "earliest".into())
        }
        _ => return Err(Failure::usage("exactly one of --T and --L is required")),
    };
    emit_json(&output, out)
}

fn star_rho(m: usize, rho: Option<f64>, r_mult: Option<f64>) -> Result<f64, Failure> {
    match (rho, r_mult) {
        (Some(rho), None) => Ok(SearchParams::new(m, rho)?.rho),
        (None, Some(mult)) => Ok(SearchParams::from_ratio_multiple(m, mult)?.rho),
        _ => Err(Failure::usage("exactly one of --rho and --R-mult is required")),
    }
}

pub fn star(
    m: usize,
    rho: Option<f64>,
    r_mult: Option<f64>,
    budget: Option<f64>,
    target: Option<f64>,
    out: Option<&Path>,
) -> CmdResult {
    let rho = star_rho(m, rho, r_mult)?;
    let output = match (budget, target) {
        (Some(t), None) => {
            let sol = solve_star_maxclear(m, rho, t)?;
            SolveOutput::new(&sol.strategy, Some(t), None, variant_name(&sol.which))
        }
        (None, Some(l)) => {
            let sol = solve_star_earliest(m, rho, l)?;
            SolveOutput::new(&sol.strategy, None, Some(l), "earliest".into())
        }
        _ => return Err(Failure::usage("exactly one of --T and --L is required")),
    };
    emit_json(&output, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// m = 4, R = R*_4, T from 10 to 10^15.
    Fig1,
    /// m from 3 to 20, R = R*_m, T = 10^8.
    Fig2,
    /// m = 4, R from R*_4 to 3 R*_4, T = 10^4.
    Fig3,
    /// m in {3, 4, 5, 10, 20, 50, 100}, R/R*_m in {1, 2, 5, 10}, T = 10^16.
    Table2,
}

/// Grid points `(m, R/R*_m, T)` of a comparison.
pub struct CompareGrid {
    points: Vec<(usize, f64, f64)>,
}

impl CompareGrid {
    pub fn from_args(
        m: usize,
        r_mult: f64,
        budget: f64,
        t_grid: Option<String>,
        m_grid: Option<String>,
        r_grid: Option<String>,
        preset: Option<Preset>,
    ) -> Result<Self, Failure> {
        let usage = |e: anyhow::Error| Failure::new(crate::EXIT_USAGE, e);
        let points: Vec<(usize, f64, f64)> = if let Some(spec) = t_grid {
            parse_grid(&spec).map_err(usage)?.into_iter().map(|t| (m, r_mult, t)).collect()
        } else if let Some(spec) = m_grid {
            parse_m_grid(&spec).map_err(usage)?.into_iter().map(|m| (m, r_mult, budget)).collect()
        } else if let Some(spec) = r_grid {
            parse_grid(&spec).map_err(usage)?.into_iter().map(|r| (m, r, budget)).collect()
        } else {
            match preset.ok_or_else(|| Failure::usage("one of --T-grid, --m-grid, --R-grid, --preset is required"))? {
                Preset::Fig1 => parse_grid("log:1:15:29").unwrap().into_iter().map(|t| (4, 1.0, t)).collect(),
                Preset::Fig2 => (3..=20).map(|m| (m, 1.0, 1e8)).collect(),
                Preset::Fig3 => parse_grid("lin:1:3:21").unwrap().into_iter().map(|r| (4, r, 1e4)).collect(),
                Preset::Table2 => [3, 4, 5, 10, 20, 50, 100]
                    .into_iter()
                    .flat_map(|m| [1.0, 2.0, 5.0, 10.0].map(|r| (m, r, 1e16)))
                    .collect(),
            }
        };
        for &(m, r, _) in &points {
            if m < 2 {
                return Err(Failure::usage(format!("m must be >= 2, got {m}")));
            }
            if !(r >= 1.0) {
                return Err(Failure::usage(format!("R-mult must be >= 1, got {r}")));
            }
        }
        Ok(CompareGrid { points })
    }
}

pub const COMPARE_HEADER: &str =
    "m,rho,T,clr_optimal,clr_mixed_aggressive,clr_scaled_geometric,ratio_opt_over_geo,ratio_opt_over_scaled_aggressive";

fn compare_row(m: usize, r_mult: f64, t: f64) -> Result<String, Failure> {
    let rho = SearchParams::from_ratio_multiple(m, r_mult)?.rho;
    let opt = solve_star_maxclear(m, rho, t)?.clearance;
    let mixed = mixed_aggressive_star(m, rho, t)?.clearance();
    let geo = scaled_geometric(m, rho, t)?.clearance();
    let scaled = scaled_aggressive_m(m, rho, t)?.strategy.clearance();
    let fields = [m as f64, rho, t, opt, mixed, geo, opt / geo, opt / scaled];
    Ok(csv_row(&fields.map(fmt_f64)))
}

pub fn star_compare(grid: &CompareGrid, out: Option<&Path>) -> CmdResult {
    let rows: Vec<String> = grid.points.par_iter().map(|&(m, r, t)| compare_row(m, r, t)).collect::<Result<_, _>>()?;
    let mut text = format!("{COMPARE_HEADER}\n");
    text.extend(rows);
    emit(out, &text)
}
