//! Budgeted variants of the aggressive strategy: the longest prefix that fits the
//! budget, and the prefix shrunk so that it depletes the budget exactly.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::strategy::{check_rho, Aggressive, CyclicStrategy};

/// A strategy shrunk by `gamma <= 1` so that its duration equals the budget.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaledStrategy {
    pub strategy: CyclicStrategy,
    pub gamma: f64,
}

pub(crate) fn check_budget(t: f64) -> Result<()> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(invalid(format!("budget must be a finite value >= 1, got {t}")));
    }
    Ok(())
}

/// Walks the aggressive sequence until the running duration reaches `t`. Returns the
/// terms up to and including the first one whose duration is `>= t`, together with
/// that duration.
fn walk_until(m: usize, rho: f64, t: f64) -> Result<(Vec<f64>, f64)> {
    let agg = Aggressive::new(m, rho)?;
    let mut terms = Vec::new();
    let mut head = 0.0;
    for z in agg.iter() {
        let duration = 2.0 * head + z;
        terms.push(z);
        if duration >= t {
            return Ok((terms, duration));
        }
        head += z;
        if !z.is_finite() {
            break;
        }
    }
    Err(invalid("aggressive sequence overflowed before exhausting the budget"))
}

/// Longest prefix of the aggressive strategy whose duration is at most `t`; empty when
/// even the first step exceeds the budget.
pub fn aggressive_prefix_m(m: usize, rho: f64, t: f64) -> Result<CyclicStrategy> {
    check_rho(m, rho)?;
    check_budget(t)?;
    let (mut terms, duration) = walk_until(m, rho, t)?;
    if duration > t {
        terms.pop();
    }
    Ok(CyclicStrategy::from_parts_unchecked(m, rho, terms))
}

/// Aggressive prefix of minimal length `l` with duration `>= t`, scaled by
/// `gamma = t / duration` so that it depletes the budget exactly.
pub fn scaled_aggressive_m(m: usize, rho: f64, t: f64) -> Result<ScaledStrategy> {
    check_rho(m, rho)?;
    check_budget(t)?;
    let (terms, duration) = walk_until(m, rho, t)?;
    let gamma = t / duration;
    let lengths = terms.into_iter().map(|z| z * gamma).collect();
    Ok(ScaledStrategy { strategy: CyclicStrategy::from_parts_unchecked(m, rho, lengths), gamma })
}
