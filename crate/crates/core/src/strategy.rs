//! Cyclic strategies on the m-ray star and the closed-form machinery shared by the
//! line and star solvers: the optimal ratio `rho*_m`, the roots of the
//! characteristic polynomial `t^m - rho t + rho`, the aggressive sequence and the
//! constraint checker for the per-step-count LPs.
//!
//! Throughout, the competitive ratio is `R = 1 + 2 rho` and a cyclic strategy
//! searches ray `i mod m` to depth `x_i` in step `i`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Relative tolerance used for every feasibility and tightness comparison.
pub const REL_TOL: f64 = 1e-9;

/// Residual bound for the characteristic roots, scaled by `max(1, rho)`.
pub const ROOT_TOL: f64 = 1e-12;

const BISECTION_STEPS: usize = 200;

/// Parameters of a budgeted star search problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchParams {
    pub m: usize,
    pub rho: f64,
    pub budget: Option<f64>,
    pub target: Option<f64>,
}

impl SearchParams {
    pub fn new(m: usize, rho: f64) -> Result<Self> {
        check_rho(m, rho)?;
        Ok(SearchParams { m, rho, budget: None, target: None })
    }

    /// Builds parameters from a competitive-ratio multiple: `R = mult * R*_m`.
    pub fn from_ratio_multiple(m: usize, mult: f64) -> Result<Self> {
        if !(mult >= 1.0) {
            return Err(invalid(format!("ratio multiple must be >= 1, got {mult}")));
        }
        let ratio = mult * (1.0 + 2.0 * rho_star(m)?);
        // R*_m * mult can land a hair below R*_m for mult = 1 after rounding.
        let rho = ((ratio - 1.0) / 2.0).max(rho_star(m)?);
        Self::new(m, rho)
    }

    pub fn with_budget(mut self, t: f64) -> Result<Self> {
        if !(t >= 1.0) {
            return Err(invalid(format!("budget must be >= 1, got {t}")));
        }
        self.budget = Some(t);
        Ok(self)
    }

    pub fn with_target(mut self, l: f64) -> Result<Self> {
        if !(l >= 1.0) {
            return Err(invalid(format!("clearance target must be >= 1, got {l}")));
        }
        self.target = Some(l);
        Ok(self)
    }

    /// Competitive ratio `R = 1 + 2 rho`.
    pub fn ratio(&self) -> f64 {
        1.0 + 2.0 * self.rho
    }
}

/// The two positive roots of `t^m - rho t + rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootPair {
    pub zeta1: f64,
    pub zeta2: f64,
    /// True iff the roots coincide, which happens exactly at `rho = rho*_m`.
    pub double_root: bool,
}

/// `rho*_m = m^m / (m-1)^(m-1)`, the smallest admissible half-excess ratio.
pub fn rho_star(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(invalid(format!("ray count must be >= 2, got {m}")));
    }
    let mf = m as f64;
    // m * (m/(m-1))^(m-1) avoids overflowing m^m.
    Ok(mf * (mf / (mf - 1.0)).powi(m as i32 - 1))
}

pub(crate) fn check_rho(m: usize, rho: f64) -> Result<()> {
    let rs = rho_star(m)?;
    if !rho.is_finite() || rho < rs * (1.0 - ROOT_TOL) {
        return Err(Error::NoRealRoots { m, rho, rho_star: rs });
    }
    Ok(())
}

fn char_poly(m: usize, rho: f64, t: f64) -> f64 {
    t.powi(m as i32) - rho * t + rho
}

/// Positive roots `zeta1 <= zeta2` of the characteristic polynomial, by bisection on
/// `[1, m/(m-1)]` and `[m/(m-1), rho^(1/(m-1))]`.
pub fn char_roots(m: usize, rho: f64) -> Result<RootPair> {
    check_rho(m, rho)?;
    let mf = m as f64;
    let mid = mf / (mf - 1.0);
    let tol = ROOT_TOL * rho.max(1.0);
    if char_poly(m, rho, mid) >= -tol {
        return Ok(RootPair { zeta1: mid, zeta2: mid, double_root: true });
    }
    let upper = rho.powf(1.0 / (mf - 1.0)).max(mid);
    // p > 0 on the left of zeta1 and on the right of zeta2.
    let zeta1 = bisect(|t| char_poly(m, rho, t), 1.0, mid, tol, true);
    let zeta2 = bisect(|t| char_poly(m, rho, t), mid, upper, tol, false);
    Ok(RootPair { zeta1, zeta2, double_root: false })
}

/// Bisection on a bracket where the function changes sign once. `positive_left`
/// says which side of the root the function is positive on.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64, positive_left: bool) -> f64 {
    let mut best = (lo + hi) / 2.0;
    for _ in 0..BISECTION_STEPS {
        let mid = (lo + hi) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        best = mid;
        if v == 0.0 {
            break;
        }
        if (v > 0.0) == positive_left {
            lo = mid;
        } else {
            hi = mid;
        }
        if v.abs() < tol * 1e-3 {
            break;
        }
    }
    // Pick the bracket end with the smallest residual.
    [lo, best, hi]
        .into_iter()
        .min_by(|a, b| f(*a).abs().total_cmp(&f(*b).abs()))
        .unwrap_or(best)
}

/// Competitive ratio `1 + 2 b^m / (b - 1)` of the geometric strategy with base `b`.
pub fn geometric_cr(m: usize, b: f64) -> Result<f64> {
    if !(b > 1.0) {
        return Err(invalid(format!("geometric base must be > 1, got {b}")));
    }
    Ok(1.0 + 2.0 * b.powi(m as i32) / (b - 1.0))
}

/// Closed form of the aggressive strategy `z_{i+m} = rho (z_{i+1} - z_i)`.
#[derive(Debug, Clone, Copy)]
pub struct Aggressive {
    m: usize,
    form: AggressiveForm,
}

#[derive(Debug, Clone, Copy)]
enum AggressiveForm {
    /// `z_i = ((m + i - 1)/(m - 1)) r^i` with `r = m/(m-1)`.
    Double { r: f64 },
    /// `z_i = a zeta2^i + b zeta1^i`.
    Distinct { a: f64, b: f64, zeta1: f64, zeta2: f64 },
}

impl Aggressive {
    pub fn new(m: usize, rho: f64) -> Result<Self> {
        let roots = char_roots(m, rho)?;
        let form = if roots.double_root {
            AggressiveForm::Double { r: roots.zeta1 }
        } else {
            // Two initial conditions: S_{m-1} = rho and S_m = rho z_1.
            let (z1, z2) = (roots.zeta1, roots.zeta2);
            let geo = |t: f64, n: usize| (1..=n).map(|i| t.powi(i as i32)).sum::<f64>();
            let (a11, a12) = (geo(z2, m - 1), geo(z1, m - 1));
            let (a21, a22) = (geo(z2, m) - rho * z2, geo(z1, m) - rho * z1);
            let det = a11 * a22 - a12 * a21;
            if det == 0.0 || !det.is_finite() {
                return Err(Error::DegenerateSystem {
                    k: 0,
                    reason: "aggressive initial conditions are singular".into(),
                });
            }
            let a = rho * a22 / det;
            let b = -rho * a21 / det;
            AggressiveForm::Distinct { a, b, zeta1: z1, zeta2: z2 }
        };
        Ok(Aggressive { m, form })
    }

    /// The `i`-th term, 1-based.
    pub fn term(&self, i: usize) -> f64 {
        let ii = i as i32;
        match self.form {
            AggressiveForm::Double { r } => {
                let m = self.m as f64;
                (m + i as f64 - 1.0) / (m - 1.0) * r.powi(ii)
            }
            AggressiveForm::Distinct { a, b, zeta1, zeta2 } => a * zeta2.powi(ii) + b * zeta1.powi(ii),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (1..).map(move |i| self.term(i))
    }
}

/// The first `n` terms of the aggressive strategy.
pub fn aggressive_sequence(m: usize, rho: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(invalid("sequence length must be >= 1"));
    }
    let agg = Aggressive::new(m, rho)?;
    Ok(agg.iter().take(n).collect())
}

/// A finite cyclic strategy: step `i` searches ray `i mod m` to depth `lengths[i]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CyclicStrategy {
    m: usize,
    rho: f64,
    lengths: Vec<f64>,
}

impl CyclicStrategy {
    /// Validates positivity and strict progress on each ray.
    pub fn new(m: usize, rho: f64, lengths: Vec<f64>) -> Result<Self> {
        if m < 2 {
            return Err(invalid(format!("ray count must be >= 2, got {m}")));
        }
        if let Some(x) = lengths.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
            return Err(invalid(format!("search lengths must be positive and finite, got {x}")));
        }
        for i in 0..lengths.len().saturating_sub(m) {
            if !(lengths[i + m] > lengths[i]) {
                return Err(invalid(format!(
                    "step {} does not search farther than step {} on the same ray",
                    i + m + 1,
                    i + 1
                )));
            }
        }
        Ok(CyclicStrategy { m, rho, lengths })
    }

    pub(crate) fn from_parts_unchecked(m: usize, rho: f64, lengths: Vec<f64>) -> Self {
        CyclicStrategy { m, rho, lengths }
    }

    pub fn empty(m: usize, rho: f64) -> Self {
        CyclicStrategy { m, rho, lengths: Vec::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn into_lengths(self) -> Vec<f64> {
        self.lengths
    }

    /// Number of steps `k`.
    pub fn steps(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Partial sum `S_j` of the first `j` lengths.
    pub fn partial_sum(&self, j: usize) -> f64 {
        self.lengths[..j.min(self.lengths.len())].iter().sum()
    }

    pub fn duration(&self) -> f64 {
        eval_cyclic(self).duration
    }

    pub fn clearance(&self) -> f64 {
        eval_cyclic(self).clearance
    }

    /// Multiplies every length by `gamma > 0`.
    pub fn scaled(&self, gamma: f64) -> Self {
        CyclicStrategy {
            m: self.m,
            rho: self.rho,
            lengths: self.lengths.iter().map(|x| x * gamma).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub duration: f64,
    pub clearance: f64,
}

/// Duration `2 S_{k-1} + x_k` and clearance (the last `min(m, k)` lengths).
pub fn eval_cyclic(s: &CyclicStrategy) -> Evaluation {
    let x = &s.lengths;
    let k = x.len();
    if k == 0 {
        return Evaluation { duration: 0.0, clearance: 0.0 };
    }
    let head: f64 = x[..k - 1].iter().sum();
    let clearance = x[k.saturating_sub(s.m)..].iter().sum();
    Evaluation { duration: 2.0 * head + x[k - 1], clearance }
}

/// Signed slacks of every constraint of the per-step-count LP, with the same slacks
/// divided by the magnitude of the compared quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub slack_c0: f64,
    pub slack_c: Vec<f64>,
    pub slack_e: Vec<f64>,
    pub slack_m: Vec<f64>,
    pub slack_b: f64,
    pub relative: RelativeSlacks,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeSlacks {
    pub c0: f64,
    pub c: Vec<f64>,
    pub e: Vec<f64>,
    pub m: Vec<f64>,
    pub b: f64,
}

impl RelativeSlacks {
    fn all(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.c0)
            .chain(self.c.iter().copied())
            .chain(self.e.iter().copied())
            .chain(self.m.iter().copied())
            .chain(std::iter::once(self.b))
    }

    /// Largest relative slack among the homogeneous `(C_j)` and `(E_j)` rows.
    pub fn max_abs_ce(&self) -> f64 {
        self.c.iter().chain(&self.e).fold(0.0, |acc, s| acc.max(s.abs()))
    }
}

fn rel(slack: f64, a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        slack
    } else {
        slack / scale
    }
}

/// Evaluates `(C0)`, `(C_j)`, `(E_j)`, `(M_i)` and `(B)` for `s` under budget `t`.
///
/// For `k < m` the `(C0)` row sums the available `k` lengths; it then also covers
/// targets at unit distance on the rays not yet visited.
pub fn check_constraints(s: &CyclicStrategy, t: f64) -> ConstraintReport {
    let x = &s.lengths;
    let (m, rho, k) = (s.m, s.rho, x.len());
    let mut prefix = Vec::with_capacity(k + 1);
    prefix.push(0.0);
    for v in x {
        prefix.push(prefix.last().unwrap() + v);
    }
    let sum = |j: usize| prefix[j.min(k)];

    let s0 = sum(m - 1);
    let slack_c0 = rho - s0;
    let rel_c0 = rel(slack_c0, rho, s0);

    let mut slack_c = Vec::new();
    let mut rel_c = Vec::new();
    for j in 1..=k.saturating_sub(m) {
        let (lhs, rhs) = (sum(j + m - 1), rho * x[j - 1]);
        slack_c.push(rhs - lhs);
        rel_c.push(rel(rhs - lhs, lhs, rhs));
    }

    let mut slack_e = Vec::new();
    let mut rel_e = Vec::new();
    let total = sum(k);
    for j in (k.saturating_sub(m) + 1).max(1)..k {
        let rhs = rho * x[j - 1];
        slack_e.push(rhs - total);
        rel_e.push(rel(rhs - total, total, rhs));
    }

    let mut slack_m = Vec::new();
    let mut rel_m = Vec::new();
    for i in 1..k {
        let d = x[i] - x[i - 1];
        slack_m.push(d);
        rel_m.push(rel(d, x[i], x[i - 1]));
    }

    let duration = eval_cyclic(s).duration;
    let slack_b = t - duration;
    let relative = RelativeSlacks { c0: rel_c0, c: rel_c, e: rel_e, m: rel_m, b: rel(slack_b, t, duration) };
    let feasible = relative.all().all(|r| r >= -REL_TOL);
    ConstraintReport { slack_c0, slack_c, slack_e, slack_m, slack_b, relative, feasible }
}
