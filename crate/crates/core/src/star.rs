//! Optimal Maximum Clearance and Earliest Clearance on the m-ray star, and the two
//! baselines they are compared against (scaled geometric and mixed aggressive).
//!
//! For a fixed number of steps `k >= m`, an optimal strategy makes every `(C_j)` and
//! `(E_j)` constraint tight, which leaves a one-dimensional family of solutions: a
//! ray through the origin of `R^k`. [`delta_direction`] computes its direction by
//! solving a banded system in `O(k m)`; the two candidates `X0` (with `(C0)` tight)
//! and `XB` (with `(B)` tight) are rescalings of it. Feasibility of `XB^(k)` is
//! monotone in `k`, so the best step count is found by binary search.

use serde::Serialize;

use crate::aggressive::{aggressive_prefix_m, check_budget, scaled_aggressive_m};
use crate::banded::BandedMatrix;
use crate::error::{invalid, Error, Result};
use crate::strategy::{char_roots, check_rho, CyclicStrategy, REL_TOL};

/// Cap on the step count explored by the searches, far beyond any budget that fits
/// in an `f64`.
const MAX_STEPS: usize = 1 << 22;

/// A direction of the tight-constraint line for `k` steps, with the scales that
/// make `(C0)` and `(B)` tight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaSolution {
    pub k: usize,
    /// Entrywise positive, normalized so that the largest (last) entry is 1.
    pub direction: Vec<f64>,
    /// Multiplier turning `direction` into `X0^(k)`.
    pub x0_scale: f64,
    /// Multiplier turning `direction` into `XB^(k)` for the budget it was built with.
    pub xb_scale: f64,
}

impl DeltaSolution {
    pub fn new(m: usize, rho: f64, k: usize, t: f64) -> Result<Self> {
        let direction = delta_direction(m, rho, k)?;
        let head: f64 = direction[..m - 1].iter().sum();
        let x0_scale = rho / head;
        let xb_scale = t / duration_of(&direction);
        Ok(DeltaSolution { k, direction, x0_scale, xb_scale })
    }
}

fn duration_of(x: &[f64]) -> f64 {
    let k = x.len();
    2.0 * x[..k - 1].iter().sum::<f64>() + x[k - 1]
}

fn clearance_of(m: usize, x: &[f64]) -> f64 {
    x[x.len().saturating_sub(m)..].iter().sum()
}

/// Positive solution of the `k - 1` homogeneous tight equations `(C_1..C_{k-m})`,
/// `(E_{k-m+1}..E_{k-1})`, normalized to `x_k = 1`.
///
/// The system is rewritten in banded form: `(C_1)` itself, the recurrence
/// `x_{i+m} = rho (x_{i+1} - x_i)` for `i` in `1..=k-m` (differences of consecutive
/// tight rows), the equalities `x_{k-m+1} = .. = x_{k-1}`, and the normalization.
pub fn delta_direction(m: usize, rho: f64, k: usize) -> Result<Vec<f64>> {
    check_rho(m, rho)?;
    if k < m {
        return Err(invalid(format!("tight-constraint system needs k >= m, got k = {k}, m = {m}")));
    }
    let mut a = BandedMatrix::zeros(k, 1, m - 1);
    let mut rhs = vec![0.0; k];
    // Row 0: S_m - rho x_1 = 0 (this is (C_1), or (E_1) when k = m).
    for c in 0..m {
        a.add(0, c, 1.0);
    }
    a.add(0, 0, -rho);
    let mut row = 1;
    for i in 0..k - m {
        a.add(row, i, rho);
        a.add(row, i + 1, -rho);
        a.add(row, i + m, 1.0);
        row += 1;
    }
    for j in k - m..k.saturating_sub(2) {
        a.add(row, j, 1.0);
        a.add(row, j + 1, -1.0);
        row += 1;
    }
    a.add(row, k - 1, 1.0);
    rhs[row] = 1.0;
    debug_assert_eq!(row, k - 1);

    let x = a.solve_refined(&rhs, 2).map_err(|s| Error::DegenerateSystem {
        k,
        reason: format!("singular at column {}", s.column),
    })?;
    if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::DegenerateSystem { k, reason: format!("entry {} is {v}", i + 1) });
    }
    let max = x.iter().copied().fold(0.0, f64::max);
    Ok(x.into_iter().map(|v| v / max).collect())
}

/// `X0^(k)`: the point of the tight line with `(C0)` tight. Feasibility for `(B)` is
/// the caller's concern.
pub fn solve_x0(m: usize, rho: f64, k: usize) -> Result<CyclicStrategy> {
    let d = delta_direction(m, rho, k)?;
    let head: f64 = d[..m - 1].iter().sum();
    Ok(CyclicStrategy::from_parts_unchecked(m, rho, scale(&d, rho / head)))
}

/// `XB^(k)`: the point of the tight line whose duration equals `t`. Feasibility for
/// `(C0)` is the caller's concern.
pub fn solve_xb(m: usize, rho: f64, t: f64, k: usize) -> Result<CyclicStrategy> {
    let d = delta_direction(m, rho, k)?;
    let gamma = t / duration_of(&d);
    Ok(CyclicStrategy::from_parts_unchecked(m, rho, scale(&d, gamma)))
}

fn scale(d: &[f64], gamma: f64) -> Vec<f64> {
    d.iter().map(|x| x * gamma).collect()
}

/// Duration and clearance of `X0^(k)`; `None` when the tight system degenerates.
fn x0_profile(m: usize, rho: f64, k: usize) -> Result<(f64, f64)> {
    let d = delta_direction(m, rho, k)?;
    let head: f64 = d[..m - 1].iter().sum();
    let s = rho / head;
    Ok((s * duration_of(&d), s * clearance_of(m, &d)))
}

/// Critical step counts: `kb` is the least `k >= m` with `XB^(k)` feasible for `(C0)`;
/// `k0` the greatest `k >= m` with `X0^(k)` feasible for `(B)`, absent when even
/// `X0^(m)` exceeds the budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CriticalK {
    pub k0: Option<usize>,
    pub kb: usize,
}

/// Smallest `k >= lo` satisfying a monotone predicate.
///
/// The bracket grows from below by a factor of 1.25 rather than from an upper guess:
/// far beyond the answer the leading entries of the tight-line direction fall under
/// the rounding floor and lose their sign, so probes stay within a small factor of it.
fn first_true(lo: usize, pred: impl Fn(usize) -> Result<bool>) -> Result<usize> {
    if pred(lo)? {
        return Ok(lo);
    }
    let mut lo = lo;
    loop {
        let hi = lo + (lo / 4).max(1);
        if hi > MAX_STEPS {
            return Err(invalid("step count search diverged"));
        }
        if pred(hi)? {
            return bisect(lo, hi, pred);
        }
        lo = hi;
    }
}

/// Given `pred(lo)` false and `pred(hi)` true, the least `k` in `(lo, hi]` with
/// `pred(k)`.
fn bisect(mut lo: usize, mut hi: usize, pred: impl Fn(usize) -> Result<bool>) -> Result<usize> {
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

pub fn find_critical_k(m: usize, rho: f64, t: f64) -> Result<CriticalK> {
    check_rho(m, rho)?;
    check_budget(t)?;
    let kb = first_true(m, |k| {
        Ok(x0_profile(m, rho, k)?.0 >= t * (1.0 - REL_TOL))
    })?;
    let (dur, _) = x0_profile(m, rho, kb)?;
    let k0 = if (dur - t).abs() <= REL_TOL * t {
        Some(kb)
    } else if kb > m {
        Some(kb - 1)
    } else {
        None
    };
    Ok(CriticalK { k0, kb })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StarBranch {
    /// `(C0)` tight.
    X0,
    /// `(B)` tight.
    XB,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarSolution {
    pub strategy: CyclicStrategy,
    pub clearance: f64,
    pub which: StarBranch,
}

/// Best strategy with `k < m` steps. Every step opens a new ray, so reaching the
/// unexplored rays later forces `S_k <= rho`; the first `k - 1` steps are as short as
/// `(E_j)` allows and the last one takes the rest.
fn small_k_candidate(m: usize, rho: f64, t: f64, k: usize) -> StarSolution {
    debug_assert!(k >= 1 && k < m);
    let kf = k as f64;
    let by_budget = t / (1.0 + (kf - 1.0) / rho);
    let total = rho.min(by_budget);
    let short = total / rho;
    let mut lengths = vec![short; k - 1];
    lengths.push(total - (kf - 1.0) * short);
    let which = if by_budget >= rho { StarBranch::X0 } else { StarBranch::XB };
    StarSolution { strategy: CyclicStrategy::from_parts_unchecked(m, rho, lengths), clearance: total, which }
}

/// Pareto-optimal Maximum Clearance strategy on the m-ray star.
pub fn solve_star_maxclear(m: usize, rho: f64, t: f64) -> Result<StarSolution> {
    check_rho(m, rho)?;
    if !(t >= 1.0) {
        return Err(Error::InfeasibleBudget(t));
    }
    check_budget(t)?;
    let crit = find_critical_k(m, rho, t)?;
    let mut candidates = Vec::with_capacity(m + 1);
    if let Some(k0) = crit.k0 {
        let s = solve_x0(m, rho, k0)?;
        candidates.push(StarSolution { clearance: s.clearance(), strategy: s, which: StarBranch::X0 });
    }
    candidates.extend((1..m).map(|k| small_k_candidate(m, rho, t, k)));
    let s = solve_xb(m, rho, t, crit.kb)?;
    candidates.push(StarSolution { clearance: s.clearance(), strategy: s, which: StarBranch::XB });

    let mut best = candidates.swap_remove(0);
    for c in candidates {
        if c.clearance > best.clearance {
            best = c;
        }
    }
    Ok(best)
}

/// Geometric strategy with base `zeta2`, cut at the first step whose duration reaches
/// `t` and scaled to deplete `t` exactly.
pub fn scaled_geometric(m: usize, rho: f64, t: f64) -> Result<CyclicStrategy> {
    check_rho(m, rho)?;
    check_budget(t)?;
    let b = char_roots(m, rho)?.zeta2;
    let mut lengths = Vec::new();
    let (mut head, mut x) = (0.0, 1.0);
    loop {
        x *= b;
        lengths.push(x);
        let duration = 2.0 * head + x;
        if duration >= t {
            let gamma = t / duration;
            return Ok(CyclicStrategy::from_parts_unchecked(m, rho, scale(&lengths, gamma)));
        }
        head += x;
        if lengths.len() >= MAX_STEPS {
            return Err(invalid("geometric strategy did not reach the budget"));
        }
    }
}

/// The better of the budgeted aggressive prefix and its scaled variant on the star.
pub fn mixed_aggressive_star(m: usize, rho: f64, t: f64) -> Result<CyclicStrategy> {
    let prefix = aggressive_prefix_m(m, rho, t)?;
    let scaled = scaled_aggressive_m(m, rho, t)?.strategy;
    if !prefix.is_empty() && prefix.clearance() >= scaled.clearance() {
        Ok(prefix)
    } else {
        Ok(scaled)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarEarliest {
    pub strategy: CyclicStrategy,
    pub duration: f64,
}

/// Fastest strategy on the star whose clearance reaches `l`: the tight-line point with
/// the fewest steps whose clearance constraint can be met without violating `(C0)`.
pub fn solve_star_earliest(m: usize, rho: f64, l: f64) -> Result<StarEarliest> {
    check_rho(m, rho)?;
    if !(l >= 1.0) || !l.is_finite() {
        return Err(invalid(format!("clearance target must be a finite value >= 1, got {l}")));
    }
    if l <= rho {
        let strategy = CyclicStrategy::from_parts_unchecked(m, rho, vec![l]);
        return Ok(StarEarliest { strategy, duration: l });
    }
    let k = first_true(m, |k| {
        Ok(x0_profile(m, rho, k)?.1 >= l * (1.0 - REL_TOL))
    })?;
    let d = delta_direction(m, rho, k)?;
    let strategy = CyclicStrategy::from_parts_unchecked(m, rho, scale(&d, l / clearance_of(m, &d)));
    Ok(StarEarliest { duration: strategy.duration(), strategy })
}
