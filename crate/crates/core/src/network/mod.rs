//! Search on undirected edge-weighted networks.
//!
//! The searcher explores balls `Q[r^i]` of geometrically growing radius around the
//! root, one per round. Each round walks a postman tour: a Chinese Postman Tour of the
//! whole ball, or (in `rpt` mode) the cheaper of that and a Rural Postman Tour that only
//! has to cover the ring the ball gained over the previous round.

mod euler;
mod matching;
mod paths;
mod run;
mod tntp;
mod tours;
mod trace;
mod truncate;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{invalid, Error, Result};

pub use matching::Matching;
pub use run::{cr_lower_bound, run_strategy, simulate, LowerBound, Mode, RoundReport, Run, RunConfig, RunReport, Witness};
pub use tntp::parse_tntp;
pub use tours::{cpt_tour, rpt_tour, Step, Tour, TourKind, TourOptions};
pub use trace::{competitive_ratio, CompetitiveRatio, FirstVisit, TraversalTrace};
pub use truncate::{truncate, EdgeCover, Piece, TruncatedNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: f64,
}

/// A point of the network: a vertex, or a position on an edge measured from `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Point {
    Vertex { vertex: usize },
    OnEdge { edge: usize, offset: f64 },
}

impl Point {
    pub fn vertex(v: usize) -> Self {
        Point::Vertex { vertex: v }
    }
}

/// A point described by external vertex labels, for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Location {
    Vertex { label: u64 },
    Edge { u: u64, v: u64, offset: f64 },
}

impl Location {
    pub fn of(net: &Network, p: Point) -> Self {
        match p {
            Point::Vertex { vertex } => Location::Vertex { label: net.label(vertex) },
            Point::OnEdge { edge, offset } => {
                let e = net.edge(edge);
                Location::Edge { u: net.label(e.u), v: net.label(e.v), offset }
            }
        }
    }
}

/// Undirected multigraph with positive edge lengths and a distinguished root.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    labels: Vec<u64>,
    index: HashMap<u64, usize>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
    root: usize,
}

/// Relative slack used when comparing positions along an edge.
pub(crate) fn offset_eps(len: f64) -> f64 {
    1e-9 * len.max(1.0)
}

impl Network {
    /// Builds a network over vertices `0..labels.len()`; `labels` are the external ids.
    pub fn new(labels: Vec<u64>, edges: Vec<Edge>, root: usize) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, &l) in labels.iter().enumerate() {
            if index.insert(l, i).is_some() {
                return Err(invalid(format!("duplicate vertex label {l}")));
            }
        }
        if root >= n {
            return Err(Error::UnknownVertex(format!("root index {root}")));
        }
        let mut adj = vec![Vec::new(); n];
        for (e, edge) in edges.iter().enumerate() {
            if edge.u >= n || edge.v >= n {
                return Err(Error::UnknownVertex(format!("endpoint of edge {e}")));
            }
            if !(edge.len > 0.0) || !edge.len.is_finite() {
                return Err(invalid(format!("edge {e} has non-positive length {}", edge.len)));
            }
            adj[edge.u].push((e, edge.v));
            if edge.u != edge.v {
                adj[edge.v].push((e, edge.u));
            }
        }
        Ok(Network { labels, index, edges, adj, root })
    }

    /// Builds a network from `(label, label, length)` triples. Vertices are numbered
    /// in increasing label order.
    pub fn from_labeled_edges(edges: &[(u64, u64, f64)], root: u64) -> Result<Self> {
        let mut labels: Vec<u64> = edges.iter().flat_map(|&(a, b, _)| [a, b]).chain([root]).collect();
        labels.sort_unstable();
        labels.dedup();
        let pos: HashMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let edges = edges.iter().map(|&(a, b, len)| Edge { u: pos[&a], v: pos[&b], len }).collect();
        Network::new(labels, edges, pos[&root])
    }

    /// The same network rooted at the vertex with external id `label`.
    pub fn with_root_label(mut self, label: u64) -> Result<Self> {
        self.root = self.vertex(label).ok_or_else(|| Error::UnknownVertex(label.to_string()))?;
        Ok(self)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn vertex(&self, label: u64) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// `(edge, neighbour)` pairs; a self-loop is listed once.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().map(|&(e, _)| if self.edges[e].u == self.edges[e].v { 2 } else { 1 }).sum()
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.len).sum()
    }

    /// Shortest-path distance from `source` to every vertex (infinite if unreachable).
    pub fn distances_from(&self, source: usize) -> Vec<f64> {
        paths::dijkstra(&self.adj, |e| self.edges[e].len, &[source]).dist
    }

    /// Distance of a point on `edge` from the source of `dist`.
    pub fn point_distance(&self, dist: &[f64], edge: usize, offset: f64) -> f64 {
        let e = &self.edges[edge];
        (dist[e.u] + offset).min(dist[e.v] + e.len - offset)
    }

    /// Normalizes a position on an edge, snapping the ends to the endpoint vertices.
    pub fn point_on(&self, edge: usize, offset: f64) -> Point {
        let e = &self.edges[edge];
        let eps = offset_eps(e.len);
        if offset <= eps {
            Point::vertex(e.u)
        } else if offset >= e.len - eps {
            Point::vertex(e.v)
        } else {
            Point::OnEdge { edge, offset }
        }
    }

    /// True when every edge is reachable from `source`.
    pub fn edges_reachable_from(&self, source: usize) -> bool {
        let d = self.distances_from(source);
        self.edges.iter().all(|e| d[e.u].is_finite())
    }

    /// Vertices with at least one incident edge, in index order.
    pub fn non_isolated_vertices(&self) -> Vec<usize> {
        (0..self.n_vertices()).filter(|&v| !self.adj[v].is_empty()).collect()
    }
}
