//! Square banded linear systems solved by Gaussian elimination with partial pivoting.
//!
//! Row `i` stores columns `i - kl ..= i + ku + kl`; the extra `kl` columns on the
//! right absorb the fill-in produced by row interchanges.

#[derive(Debug, Clone)]
pub(crate) struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Singular {
    pub column: usize,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandedMatrix { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    #[inline]
    fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(col + self.kl >= row && col <= row + self.ku + self.kl, "({row}, {col}) outside band");
        row * self.width + (col + self.kl - row)
    }

    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        assert!(col + self.kl >= row && col <= row + self.ku, "({row}, {col}) outside declared band");
        let i = self.index(row, col);
        self.data[i] += value;
    }

    #[inline]
    fn get(&self, row: usize, col: usize) -> f64 {
        self.data[self.index(row, col)]
    }

    /// `A x` for the entries inside the declared band.
    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|r| {
                let lo = r.saturating_sub(self.kl);
                let hi = (r + self.ku).min(self.n - 1);
                (lo..=hi).map(|c| self.get(r, c) * x[c]).sum()
            })
            .collect()
    }

    /// Solves `A x = b` and then applies `steps` rounds of iterative refinement, which
    /// makes every row's residual small relative to that row's own magnitude.
    pub fn solve_refined(&self, rhs: &[f64], steps: usize) -> Result<Vec<f64>, Singular> {
        let mut x = self.clone().solve(rhs.to_vec())?;
        for _ in 0..steps {
            let ax = self.mul(&x);
            let residual: Vec<f64> = rhs.iter().zip(&ax).map(|(b, y)| b - y).collect();
            let dx = self.clone().solve(residual)?;
            for (xi, d) in x.iter_mut().zip(dx) {
                *xi += d;
            }
        }
        Ok(x)
    }

    /// Solves `A x = b`, consuming the matrix.
    pub fn solve(mut self, mut rhs: Vec<f64>) -> Result<Vec<f64>, Singular> {
        let (n, kl) = (self.n, self.kl);
        let reach = kl + self.ku;
        assert_eq!(rhs.len(), n);
        for j in 0..n {
            let last_row = (j + kl).min(n - 1);
            let pivot = (j..=last_row)
                .max_by(|&a, &b| self.get(a, j).abs().total_cmp(&self.get(b, j).abs()))
                .unwrap();
            if self.get(pivot, j) == 0.0 {
                return Err(Singular { column: j });
            }
            let last_col = (j + reach).min(n - 1);
            if pivot != j {
                for c in j..=last_col {
                    let (a, b) = (self.index(j, c), self.index(pivot, c));
                    self.data.swap(a, b);
                }
                rhs.swap(j, pivot);
            }
            let diag = self.get(j, j);
            for i in j + 1..=last_row {
                let f = self.get(i, j) / diag;
                if f == 0.0 {
                    continue;
                }
                for c in j..=last_col {
                    let v = self.get(j, c);
                    let idx = self.index(i, c);
                    self.data[idx] -= f * v;
                }
                rhs[i] -= f * rhs[j];
            }
        }
        let mut x = vec![0.0; n];
        for j in (0..n).rev() {
            let last_col = (j + reach).min(n - 1);
            let mut acc = rhs[j];
            for c in j + 1..=last_col {
                acc -= self.get(j, c) * x[c];
            }
            x[j] = acc / self.get(j, j);
        }
        Ok(x)
    }
}
