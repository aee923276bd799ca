use crate::error::{invalid, Error, Result};
use crate::network::Network;

const MAX_ODD: usize = 16;

/// Length of a shortest closed walk from `start` traversing every edge: total edge
/// length plus the cheapest pairing of odd-degree vertices, found by trying every
/// pairing over Floyd-Warshall distances.
pub fn brute_cpp(net: &Network, start: usize) -> Result<f64> {
    let n = net.n_vertices();
    if start >= n {
        return Err(Error::UnknownVertex(format!("vertex index {start}")));
    }
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    let mut degree = vec![0usize; n];
    for e in net.edges() {
        degree[e.u] += 1;
        degree[e.v] += 1;
        if e.len < d[e.u][e.v] {
            d[e.u][e.v] = e.len;
            d[e.v][e.u] = e.len;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    if net.edges().iter().any(|e| !d[start][e.u].is_finite()) {
        return Err(Error::Disconnected(format!("not every edge is reachable from vertex {}", net.label(start))));
    }
    let odd: Vec<usize> = (0..n).filter(|&v| degree[v] % 2 == 1).collect();
    if odd.len() > MAX_ODD {
        return Err(invalid(format!("{} odd vertices is too many to enumerate", odd.len())));
    }
    fn best(rest: &[usize], d: &[Vec<f64>]) -> f64 {
        let Some((&first, others)) = rest.split_first() else { return 0.0 };
        let mut min = f64::INFINITY;
        for (k, &partner) in others.iter().enumerate() {
            let left: Vec<usize> = others.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &v)| v).collect();
            min = min.min(d[first][partner] + best(&left, d));
        }
        min
    }
    Ok(net.total_length() + best(&odd, &d))
}
