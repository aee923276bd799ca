//! Maximum Clearance and Earliest Clearance on the unbounded line (`m = 2`).
//!
//! The optimum is always one of two aggressive-derived strategies: the longest
//! aggressive prefix that fits the budget, or the shortest prefix that exceeds it
//! shrunk to deplete the budget exactly. Earliest Clearance is the scaled variant of
//! the shortest prefix that reaches the target.

use serde::Serialize;

use crate::aggressive::{aggressive_prefix_m, scaled_aggressive_m, ScaledStrategy};
use crate::error::{invalid, Error, Result};
use crate::strategy::{check_rho, Aggressive, CyclicStrategy};

const M: usize = 2;

/// Which branch of the mixed aggressive strategy won.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineBranch {
    Prefix,
    Scaled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineSolution {
    pub strategy: CyclicStrategy,
    pub clearance: f64,
    pub which: LineBranch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EarliestSolution {
    pub strategy: CyclicStrategy,
    pub duration: f64,
}

fn check_line(rho: f64) -> Result<()> {
    if !(rho >= 4.0) {
        return Err(invalid(format!("line search needs rho >= 4, got {rho}")));
    }
    check_rho(M, rho)
}

/// `Z_T`: the longest aggressive prefix with duration at most `t`.
pub fn aggressive_prefix(rho: f64, t: f64) -> Result<CyclicStrategy> {
    check_line(rho)?;
    aggressive_prefix_m(M, rho, t)
}

/// The scaled aggressive strategy, depleting `t` exactly.
pub fn scaled_aggressive(rho: f64, t: f64) -> Result<ScaledStrategy> {
    check_line(rho)?;
    scaled_aggressive_m(M, rho, t)
}

/// The mixed aggressive strategy: the better of [`aggressive_prefix`] and
/// [`scaled_aggressive`], ties going to the unscaled prefix.
pub fn solve_line_maxclear(rho: f64, t: f64) -> Result<LineSolution> {
    check_line(rho)?;
    if !(t >= 1.0) {
        return Err(Error::InfeasibleBudget(t));
    }
    let prefix = aggressive_prefix(rho, t)?;
    let scaled = scaled_aggressive(rho, t)?.strategy;
    let (cp, cs) = (prefix.clearance(), scaled.clearance());
    let sol = if !prefix.is_empty() && cp >= cs {
        LineSolution { strategy: prefix, clearance: cp, which: LineBranch::Prefix }
    } else {
        LineSolution { strategy: scaled, clearance: cs, which: LineBranch::Scaled }
    };
    Ok(sol)
}

/// Fastest strategy reaching clearance `l`: the shortest aggressive prefix whose
/// clearance is at least `l`, shrunk so that its clearance is exactly `l`.
pub fn solve_line_earliest(rho: f64, l: f64) -> Result<EarliestSolution> {
    check_line(rho)?;
    if !(l >= 1.0) || !l.is_finite() {
        return Err(invalid(format!("clearance target must be a finite value >= 1, got {l}")));
    }
    let agg = Aggressive::new(M, rho)?;
    let mut terms: Vec<f64> = Vec::new();
    for z in agg.iter() {
        if !z.is_finite() {
            return Err(invalid("aggressive sequence overflowed before reaching the target"));
        }
        terms.push(z);
        let k = terms.len();
        let clearance: f64 = terms[k.saturating_sub(M)..].iter().sum();
        if clearance >= l {
            let gamma = l / clearance;
            let strategy = CyclicStrategy::from_parts_unchecked(M, rho, terms.iter().map(|z| z * gamma).collect());
            let duration = strategy.duration();
            return Ok(EarliestSolution { strategy, duration });
        }
    }
    unreachable!("the aggressive iterator is unbounded")
}
