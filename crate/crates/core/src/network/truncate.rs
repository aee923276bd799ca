//! The ball `Q[r]` of all points within distance `r` of the root, as a graph of its own.
//!
//! Edges crossing the radius are cut into the parts that lie inside; the cut points
//! become leaf vertices. The graph is further split at the boundary of an optional
//! inner ball so that every piece lies either entirely inside it or entirely outside.

use std::collections::HashMap;

use serde::Serialize;

use crate::network::paths::{dijkstra, ShortestPaths};
use crate::network::{offset_eps, Network, Point};

/// For every edge, the sorted disjoint offset intervals lying within a radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeCover {
    pub radius: f64,
    pub intervals: Vec<Vec<(f64, f64)>>,
}

impl EdgeCover {
    pub fn empty(net: &Network) -> Self {
        EdgeCover { radius: 0.0, intervals: vec![Vec::new(); net.edges().len()] }
    }

    /// Points of each edge within `radius`, given vertex distances `dist` from the root.
    pub fn new(net: &Network, dist: &[f64], radius: f64) -> Self {
        let intervals = net
            .edges()
            .iter()
            .map(|e| {
                let (du, dv, len) = (dist[e.u], dist[e.v], e.len);
                let eps = offset_eps(len);
                if du + dv + len <= 2.0 * radius + eps {
                    return vec![(0.0, len)];
                }
                let mut out = Vec::new();
                let from_u = radius - du;
                if from_u > eps {
                    out.push((0.0, from_u.min(len)));
                }
                let from_v = radius - dv;
                if from_v > eps {
                    out.push(((len - from_v).max(0.0), len));
                }
                out
            })
            .collect();
        EdgeCover { radius, intervals }
    }

    /// Total retained length.
    pub fn length(&self) -> f64 {
        self.intervals.iter().flatten().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, edge: usize, x: f64) -> bool {
        self.intervals[edge].iter().any(|&(a, b)| a <= x && x <= b)
    }

    /// True when every edge is retained in full.
    pub fn is_full(&self, net: &Network) -> bool {
        self.intervals.iter().zip(net.edges()).all(|(iv, e)| iv.len() == 1 && iv[0] == (0.0, e.len))
    }
}

/// A stretch `[a, b]` of an original edge, joining graph nodes `from` (at `a`) and
/// `to` (at `b`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub edge: usize,
    pub a: f64,
    pub b: f64,
    pub from: usize,
    pub to: usize,
    /// False when the piece lies inside the inner ball.
    pub required: bool,
}

impl Piece {
    pub fn len(&self) -> f64 {
        self.b - self.a
    }
}

#[derive(Debug, Clone)]
pub struct TruncatedNetwork {
    pub radius: f64,
    /// Graph nodes, as points of the original network.
    pub nodes: Vec<Point>,
    pub pieces: Vec<Piece>,
    /// Points where the radius cuts an edge, as `(edge, offset)`.
    pub boundary_points: Vec<(usize, f64)>,
    /// Shortest-path distance from the root in the full network, per original vertex.
    pub dist_from_root: Vec<f64>,
    adj: Vec<Vec<(usize, usize)>>,
    node_index: HashMap<NodeKey, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum NodeKey {
    Vertex(usize),
    OnEdge(usize, u64),
}

fn key(p: &Point) -> NodeKey {
    match *p {
        Point::Vertex { vertex } => NodeKey::Vertex(vertex),
        Point::OnEdge { edge, offset } => NodeKey::OnEdge(edge, offset.to_bits()),
    }
}

impl TruncatedNetwork {
    /// Builds the graph of `outer`, cut additionally at the ends of `inner` and at
    /// `extra` points lying inside `outer`.
    pub fn build(net: &Network, dist: &[f64], outer: &EdgeCover, inner: Option<&EdgeCover>, extra: &[Point]) -> Self {
        let mut sub = TruncatedNetwork {
            radius: outer.radius,
            nodes: Vec::new(),
            pieces: Vec::new(),
            boundary_points: Vec::new(),
            dist_from_root: dist.to_vec(),
            adj: Vec::new(),
            node_index: HashMap::new(),
        };
        for v in 0..net.n_vertices() {
            if dist[v] <= outer.radius + offset_eps(outer.radius) {
                sub.node(Point::vertex(v));
            }
        }
        for (e, ivs) in outer.intervals.iter().enumerate() {
            let edge = net.edge(e);
            let eps = offset_eps(edge.len);
            for &(a, b) in ivs {
                for x in [a, b] {
                    if x > eps && x < edge.len - eps {
                        sub.boundary_points.push((e, x));
                    }
                }
                let mut cuts = vec![a, b];
                if let Some(inner) = inner {
                    cuts.extend(inner.intervals[e].iter().flat_map(|&(c, d)| [c, d]).filter(|&x| x > a && x < b));
                }
                cuts.extend(extra.iter().filter_map(|p| match *p {
                    Point::OnEdge { edge, offset } if edge == e && offset > a && offset < b => Some(offset),
                    _ => None,
                }));
                cuts.sort_by(f64::total_cmp);
                cuts.dedup_by(|x, y| (*x - *y).abs() <= eps);
                for w in cuts.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    if hi - lo <= eps {
                        continue;
                    }
                    let from = sub.node(net.point_on(e, lo));
                    let to = sub.node(net.point_on(e, hi));
                    let mid = 0.5 * (lo + hi);
                    let required = inner.map_or(true, |c| !c.contains(e, mid));
                    let (lo, hi) = (snap(lo, edge.len), snap(hi, edge.len));
                    let id = sub.pieces.len();
                    sub.pieces.push(Piece { edge: e, a: lo, b: hi, from, to, required });
                    sub.adj[from].push((id, to));
                    if from != to {
                        sub.adj[to].push((id, from));
                    }
                }
            }
        }
        for p in extra {
            if let Point::Vertex { .. } = p {
                sub.node(*p);
            }
        }
        sub
    }

    fn node(&mut self, p: Point) -> usize {
        let k = key(&p);
        if let Some(&i) = self.node_index.get(&k) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(p);
        self.adj.push(Vec::new());
        self.node_index.insert(k, i);
        i
    }

    /// Node at point `p`, if `p` is one (up to the cut-merging tolerance).
    pub fn node_of(&self, p: &Point) -> Option<usize> {
        if let Some(&i) = self.node_index.get(&key(p)) {
            return Some(i);
        }
        let Point::OnEdge { edge, offset } = *p else { return None };
        let eps = self.pieces.iter().find(|q| q.edge == edge).map(|q| offset_eps(q.b))?;
        self.pieces.iter().filter(|q| q.edge == edge).find_map(|q| {
            if (q.a - offset).abs() <= eps {
                Some(q.from)
            } else if (q.b - offset).abs() <= eps {
                Some(q.to)
            } else {
                None
            }
        })
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::len).sum()
    }

    pub fn required_length(&self) -> f64 {
        self.pieces.iter().filter(|p| p.required).map(Piece::len).sum()
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }


    pub(crate) fn shortest_paths(&self, sources: &[usize]) -> ShortestPaths {
        dijkstra(&self.adj, |p| self.pieces[p].len(), sources)
    }
}

fn snap(x: f64, len: f64) -> f64 {
    let eps = offset_eps(len);
    if x <= eps {
        0.0
    } else if x >= len - eps {
        len
    } else {
        x
    }
}

/// `Q[r]` around the network's root.
pub fn truncate(net: &Network, r: f64) -> TruncatedNetwork {
    let dist = net.distances_from(net.root());
    let cover = EdgeCover::new(net, &dist, r);
    TruncatedNetwork::build(net, &dist, &cover, None, &[])
}
