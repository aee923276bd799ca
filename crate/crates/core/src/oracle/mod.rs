//! Brute-force reference solvers.
//!
//! Nothing here reuses the structure exploited by the fast solvers: the search LPs are
//! written out row by row and handed to a dense simplex, and postman tours are found by
//! enumerating every pairing of odd vertices over Floyd-Warshall distances.

mod cpp;
pub mod simplex;

pub use cpp::brute_cpp;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::strategy::rho_star;
use simplex::{maximize, Constraint, LpOutcome};

/// Best objective over all step counts tried, with the maximizer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleOptimum {
    pub k: usize,
    pub value: f64,
    pub lengths: Vec<f64>,
}

fn check(m: usize, rho: f64, k_max: usize) -> Result<()> {
    let rs = rho_star(m)?;
    if !(rho >= rs * (1.0 - 1e-12)) {
        return Err(invalid(format!("rho = {rho} is below rho*_{m} = {rs}")));
    }
    if k_max == 0 {
        return Err(invalid("k_max must be at least 1"));
    }
    Ok(())
}

fn prefix_row(k: usize, upto: usize) -> Vec<f64> {
    (0..k).map(|i| if i < upto { 1.0 } else { 0.0 }).collect()
}

/// Competitiveness, extendability and monotonicity rows for `k` steps on `m` rays.
///
/// With `k >= m`: `S_{m-1} <= rho`, `S_{j+m-1} <= rho x_j` for `j <= k-m`, and
/// `S_k <= rho x_j` for the last `m-1` steps before `k`. With `k < m` some rays are
/// never opened, so the next visit to one of them (at unit depth) costs `2 S_k + 1`,
/// giving `S_k <= rho`, and extendability past every turn gives `S_k <= rho x_j`.
fn search_rows(m: usize, rho: f64, k: usize) -> Vec<Constraint> {
    let mut rows = Vec::new();
    if k >= m {
        rows.push(Constraint::le(prefix_row(k, m - 1), rho));
        for j in 1..=k - m {
            let mut r = prefix_row(k, j + m - 1);
            r[j - 1] -= rho;
            rows.push(Constraint::le(r, 0.0));
        }
        for j in k - m + 1..k {
            let mut r = prefix_row(k, k);
            r[j - 1] -= rho;
            rows.push(Constraint::le(r, 0.0));
        }
    } else {
        rows.push(Constraint::le(prefix_row(k, k), rho));
        for j in 1..k {
            let mut r = prefix_row(k, k);
            r[j - 1] -= rho;
            rows.push(Constraint::le(r, 0.0));
        }
    }
    for i in 0..k.saturating_sub(1) {
        let mut r = vec![0.0; k];
        r[i] = 1.0;
        r[i + 1] = -1.0;
        rows.push(Constraint::le(r, 0.0));
    }
    rows
}

fn duration_row(k: usize) -> Vec<f64> {
    (0..k).map(|i| if i + 1 < k { 2.0 } else { 1.0 }).collect()
}

fn clearance_row(m: usize, k: usize) -> Vec<f64> {
    (0..k).map(|i| if i + m >= k { 1.0 } else { 0.0 }).collect()
}

/// Maximum clearance within budget `t` over every step count `k <= k_max`, by solving
/// each step count's LP with the dense simplex. Step counts whose LP is infeasible or
/// unbounded are skipped; `None` if all of them are.
pub fn lp_oracle_maxclear(m: usize, rho: f64, t: f64, k_max: usize) -> Result<Option<OracleOptimum>> {
    check(m, rho, k_max)?;
    let mut best: Option<OracleOptimum> = None;
    for k in 1..=k_max {
        let mut rows = search_rows(m, rho, k);
        rows.push(Constraint::le(duration_row(k), t));
        if let LpOutcome::Optimal { x, objective } = maximize(&clearance_row(m, k), &rows) {
            if best.as_ref().map_or(true, |b| objective > b.value) {
                best = Some(OracleOptimum { k, value: objective, lengths: x });
            }
        }
    }
    Ok(best)
}

/// Minimum duration reaching clearance `l` over every step count `k <= k_max`.
pub fn lp_oracle_earliest(m: usize, rho: f64, l: f64, k_max: usize) -> Result<Option<OracleOptimum>> {
    check(m, rho, k_max)?;
    let mut best: Option<OracleOptimum> = None;
    for k in 1..=k_max {
        let mut rows = search_rows(m, rho, k);
        rows.push(Constraint::ge(clearance_row(m, k), l));
        let cost: Vec<f64> = duration_row(k).iter().map(|v| -v).collect();
        if let LpOutcome::Optimal { x, objective } = maximize(&cost, &rows) {
            let duration = -objective;
            if best.as_ref().map_or(true, |b| duration < b.value) {
                best = Some(OracleOptimum { k, value: duration, lengths: x });
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_examples() {
        let o = lp_oracle_maxclear(2, 4.0, 64.0, 5).unwrap().unwrap();
        assert!((o.value - 44.0).abs() < 1e-9, "{o:?}");
        let o = lp_oracle_maxclear(2, 4.0, 4.0, 3).unwrap().unwrap();
        assert!((o.value - 4.0).abs() < 1e-9, "{o:?}");
        let o = lp_oracle_maxclear(2, 4.0, 50.0, 4).unwrap().unwrap();
        assert!((o.value - 34.375).abs() < 1e-9, "{o:?}");
    }

    #[test]
    fn earliest_line_examples() {
        let o = lp_oracle_earliest(2, 4.0, 44.0, 5).unwrap().unwrap();
        assert!((o.value - 64.0).abs() < 1e-9, "{o:?}");
        let o = lp_oracle_earliest(2, 4.0, 16.0, 5).unwrap().unwrap();
        assert!((o.value - 20.0).abs() < 1e-9, "{o:?}");
    }

    #[test]
    fn optimum_beats_a_feasible_point() {
        // (1, 2, 4) is geometric with base 2, feasible for rho = 4 and T = 100.
        let o = lp_oracle_maxclear(2, 4.0, 100.0, 6).unwrap().unwrap();
        assert!(o.value >= 6.0);
    }

    #[test]
    fn rejects_small_rho() {
        assert!(lp_oracle_maxclear(3, 6.0, 10.0, 4).is_err());
    }
}
