//! Minimum-weight perfect matching on the complete graph over odd-degree nodes.

use serde::{Deserialize, Serialize};

/// Largest node count matched exactly; beyond it [`Matching::Exact`] falls back to the
/// greedy heuristic.
pub const EXACT_MATCHING_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Matching {
    /// Bitmask dynamic programming, exact up to [`EXACT_MATCHING_LIMIT`] nodes.
    #[default]
    Exact,
    /// Nearest pairs first, then pairwise exchanges until none improves.
    Greedy,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub exact: bool,
}

/// Pairs up nodes `0..n` (with `n` even) minimizing the total of `w`.
pub(crate) fn min_weight_pairing(n: usize, w: &[Vec<f64>], mode: Matching) -> Pairing {
    assert!(n % 2 == 0, "perfect matching needs an even node count, got {n}");
    if n == 0 {
        return Pairing { pairs: Vec::new(), exact: true };
    }
    if mode == Matching::Exact && n <= EXACT_MATCHING_LIMIT {
        Pairing { pairs: exact(n, w), exact: true }
    } else {
        Pairing { pairs: greedy(n, w), exact: false }
    }
}

fn exact(n: usize, w: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let full = (1usize << n) - 1;
    let mut cost = vec![f64::INFINITY; full + 1];
    let mut prev = vec![u32::MAX; full + 1];
    cost[0] = 0.0;
    for mask in 0..full {
        let c = cost[mask];
        if !c.is_finite() {
            continue;
        }
        let i = (!mask).trailing_zeros() as usize;
        for j in i + 1..n {
            if mask & (1 << j) != 0 {
                continue;
            }
            let next = mask | (1 << i) | (1 << j);
            let nc = c + w[i][j];
            if nc < cost[next] {
                cost[next] = nc;
                prev[next] = mask as u32;
            }
        }
    }
    let mut pairs = Vec::with_capacity(n / 2);
    let mut mask = full;
    while mask != 0 {
        let p = prev[mask] as usize;
        let diff = mask ^ p;
        let i = diff.trailing_zeros() as usize;
        let j = (usize::BITS - 1 - diff.leading_zeros()) as usize;
        pairs.push((i, j));
        mask = p;
    }
    pairs.reverse();
    pairs
}

fn greedy(n: usize, w: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let mut candidates: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    candidates.sort_by(|a, b| w[a.0][a.1].total_cmp(&w[b.0][b.1]).then(a.cmp(b)));
    let mut used = vec![false; n];
    let mut pairs = Vec::with_capacity(n / 2);
    for (i, j) in candidates {
        if !used[i] && !used[j] {
            used[i] = true;
            used[j] = true;
            pairs.push((i, j));
        }
    }

    let mut improved = true;
    let mut passes = 0;
    while improved && passes < 100 {
        improved = false;
        passes += 1;
        for x in 0..pairs.len() {
            for y in x + 1..pairs.len() {
                let ((a, b), (c, d)) = (pairs[x], pairs[y]);
                let now = w[a][b] + w[c][d];
                let cross = w[a][c] + w[b][d];
                let swap = w[a][d] + w[b][c];
                if cross < now - 1e-12 * now.abs() && cross <= swap {
                    pairs[x] = (a, c);
                    pairs[y] = (b, d);
                    improved = true;
                } else if swap < now - 1e-12 * now.abs() {
                    pairs[x] = (a, d);
                    pairs[y] = (b, c);
                    improved = true;
                }
            }
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(p: &[(usize, usize)], w: &[Vec<f64>]) -> f64 {
        p.iter().map(|&(i, j)| w[i][j]).sum()
    }

    fn points(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|a| xs.iter().map(|b| (a - b).abs()).collect()).collect()
    }

    #[test]
    fn exact_pairs_neighbours_on_a_line() {
        let w = points(&[0.0, 1.0, 5.0, 6.0, 20.0, 22.0]);
        let p = min_weight_pairing(6, &w, Matching::Exact);
        assert!(p.exact);
        assert_eq!(total(&p.pairs, &w), 4.0);
    }

    #[test]
    fn greedy_is_flagged_and_falls_back_above_limit() {
        let xs: Vec<f64> = (0..22).map(|i| (i * i) as f64).collect();
        let w = points(&xs);
        let p = min_weight_pairing(22, &w, Matching::Exact);
        assert!(!p.exact);
        assert_eq!(p.pairs.len(), 11);
    }

    #[test]
    fn exchanges_fix_a_greedy_trap() {
        // Greedy takes the middle pair (1, 2) first and is left with (0, 3).
        let w = points(&[0.0, 2.0, 3.0, 5.0]);
        assert_eq!(total(&greedy(4, &w), &w), 4.0);
    }

    #[test]
    fn exact_matches_enumeration() {
        let xs = [0.3, 7.1, 2.2, 9.9, 4.4, 4.5, 8.0, 1.0];
        let w: Vec<Vec<f64>> = xs.iter().map(|a| xs.iter().map(|b| (a - b) * (a - b) + 1.0).collect()).collect();
        fn best(rest: &[usize], w: &[Vec<f64>]) -> f64 {
            if rest.is_empty() {
                return 0.0;
            }
            (1..rest.len())
                .map(|k| {
                    let others: Vec<usize> = rest[1..].iter().copied().filter(|&x| x != rest[k]).collect();
                    w[rest[0]][rest[k]] + best(&others, w)
                })
                .fold(f64::INFINITY, f64::min)
        }
        let p = min_weight_pairing(8, &w, Matching::Exact);
        assert!((total(&p.pairs, &w) - best(&(0..8).collect::<Vec<_>>(), &w)).abs() < 1e-12);
    }
}
