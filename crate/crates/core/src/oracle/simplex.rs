//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Meant for tiny reference problems only: every pivot touches the whole tableau.

const EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Constraint { coeffs, relation: Relation::Le, rhs }
    }

    pub fn ge(coeffs: Vec<f64>, rhs: f64) -> Self {
        Constraint { coeffs, relation: Relation::Ge, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `max cost . x` for the current basis.
    fn reduced(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        d.push(0.0);
        for (row, &b) in self.a.iter().zip(&self.basis) {
            let cb = cost[b];
            if cb != 0.0 {
                for (dj, v) in d.iter_mut().zip(row) {
                    *dj -= cb * v;
                }
            }
        }
        d
    }

    /// Runs the primal simplex on `max cost . x` over columns `< allowed`. Returns false
    /// if the problem is unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> bool {
        loop {
            let d = self.reduced(cost);
            let Some(enter) = (0..allowed).find(|&j| d[j] > EPS) else {
                return true;
            };
            let rhs = self.cols;
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if row[enter] > EPS {
                    let ratio = row[rhs] / row[enter];
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - EPS || (ratio <= lr + EPS && self.basis[i] < self.basis[li]) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Maximizes `c . x` subject to `constraints` and `x >= 0`.
pub fn maximize(c: &[f64], constraints: &[Constraint]) -> LpOutcome {
    let n = c.len();
    let rows = constraints.len();
    let n_slack = constraints.iter().filter(|k| k.relation != Relation::Eq).count();

    // Normalize every row to a nonnegative right-hand side first; the column layout
    // is then [structural | slack/surplus | artificial].
    let mut normalized: Vec<(Vec<f64>, Relation, f64)> = constraints
        .iter()
        .map(|k| {
            assert_eq!(k.coeffs.len(), n, "constraint width");
            if k.rhs < 0.0 {
                let rel = match k.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (k.coeffs.iter().map(|v| -v).collect(), rel, -k.rhs)
            } else {
                (k.coeffs.clone(), k.relation, k.rhs)
            }
        })
        .collect();
    let n_art = normalized.iter().filter(|(_, rel, _)| *rel != Relation::Le).count();
    let cols = n + n_slack + n_art;

    let mut a = vec![vec![0.0; cols + 1]; rows];
    let mut basis = vec![0; rows];
    let (mut slack, mut art) = (n, n + n_slack);
    for (i, (coeffs, rel, rhs)) in normalized.drain(..).enumerate() {
        a[i][..n].copy_from_slice(&coeffs);
        a[i][cols] = rhs;
        match rel {
            Relation::Le => {
                a[i][slack] = 1.0;
                basis[i] = slack;
                slack += 1;
            }
            Relation::Ge => {
                a[i][slack] = -1.0;
                slack += 1;
                a[i][art] = 1.0;
                basis[i] = art;
                art += 1;
            }
            Relation::Eq => {
                a[i][art] = 1.0;
                basis[i] = art;
                art += 1;
            }
        }
    }
    let mut tab = Tableau { a, basis, cols };

    if n_art > 0 {
        let mut phase1 = vec![0.0; cols];
        for v in phase1[n + n_slack..].iter_mut() {
            *v = -1.0;
        }
        tab.optimize(&phase1, cols);
        let infeasibility: f64 = tab
            .basis
            .iter()
            .zip(&tab.a)
            .filter(|(b, _)| **b >= n + n_slack)
            .map(|(_, row)| row[cols])
            .sum();
        let scale = constraints.iter().map(|k| k.rhs.abs()).fold(1.0, f64::max);
        if infeasibility > 1e-9 * scale {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        for r in 0..rows {
            if tab.basis[r] >= n + n_slack {
                if let Some(c) = (0..n + n_slack).find(|&j| tab.a[r][j].abs() > EPS) {
                    tab.pivot(r, c);
                }
            }
        }
    }

    let mut cost = vec![0.0; cols];
    cost[..n].copy_from_slice(c);
    // Artificial columns are excluded from entering in phase two.
    if !tab.optimize(&cost, n + n_slack) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![0.0; n];
    for (row, &b) in tab.a.iter().zip(&tab.basis) {
        if b < n {
            x[b] = row[cols];
        }
    }
    let objective = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { x, objective }
}
