//! Dijkstra over adjacency lists of `(edge, neighbour)` pairs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ShortestPaths {
    pub dist: Vec<f64>,
    /// `(edge, previous node)` on a shortest path from the nearest source.
    pub pred: Vec<Option<(usize, usize)>>,
}

/// One traversal of a path: `edge` walked from node `from` to node `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Hop {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
}

impl ShortestPaths {
    /// Hops of a shortest path from the sources to `target`, in walking order.
    pub fn path_to(&self, target: usize) -> Vec<Hop> {
        let mut hops = Vec::new();
        let mut v = target;
        while let Some((e, p)) = self.pred[v] {
            hops.push(Hop { edge: e, from: p, to: v });
            v = p;
        }
        hops.reverse();
        hops
    }
}

/// Multi-source Dijkstra; `len` gives the length of an edge id.
pub(crate) fn dijkstra(adj: &[Vec<(usize, usize)>], len: impl Fn(usize) -> f64, sources: &[usize]) -> ShortestPaths {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s] = 0.0;
        heap.push(Entry { dist: 0.0, node: s });
    }
    while let Some(Entry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(e, w) in &adj[node] {
            let nd = d + len(e);
            if nd < dist[w] {
                dist[w] = nd;
                pred[w] = Some((e, node));
                heap.push(Entry { dist: nd, node: w });
            }
        }
    }
    ShortestPaths { dist, pred }
}
