//! Chinese and Rural Postman tours on a truncated network.
//!
//! Both follow the same recipe: make the graph of pieces to be walked Eulerian by
//! adding shortest paths between odd-degree nodes, then read off an Euler circuit. The
//! rural tour first connects the components of required pieces along a minimum
//! spanning tree of their shortest-path distances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::euler::{euler_circuit, MultiEdge};
use crate::network::matching::{min_weight_pairing, Matching};
use crate::network::paths::Hop;
use crate::network::truncate::TruncatedNetwork;
use crate::network::{Network, Point};

/// Walk along `edge` from offset `from` to offset `to`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Step {
    pub edge: usize,
    pub from: f64,
    pub to: f64,
}

impl Step {
    pub fn len(&self) -> f64 {
        (self.to - self.from).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TourKind {
    Cpt,
    Rpt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tour {
    pub kind: TourKind,
    pub start: Point,
    pub steps: Vec<Step>,
    pub total_length: f64,
    /// False when the odd-node matching fell back to the heuristic.
    pub exact_matching: bool,
}

impl Tour {
    fn empty(kind: TourKind, start: Point) -> Self {
        Tour { kind, start, steps: Vec::new(), total_length: 0.0, exact_matching: true }
    }

    /// Where the walk ends.
    pub fn end(&self, net: &Network) -> Point {
        match self.steps.last() {
            Some(s) => net.point_on(s.edge, s.to),
            None => self.start,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TourOptions {
    pub matching: Matching,
    /// Stop after the last piece that still had to be covered instead of returning.
    pub open_ended: bool,
}

/// Multigraph over the truncated network's nodes whose edges are pieces, each
/// oriented as the piece is (`from -> to`).
struct Walkable {
    edges: Vec<MultiEdge>,
    piece: Vec<usize>,
}

impl Walkable {
    fn new() -> Self {
        Walkable { edges: Vec::new(), piece: Vec::new() }
    }

    fn add_piece(&mut self, sub: &TruncatedNetwork, p: usize) {
        let q = &sub.pieces[p];
        self.edges.push((q.from, q.to));
        self.piece.push(p);
    }

    fn add_hops(&mut self, sub: &TruncatedNetwork, hops: &[Hop]) {
        for h in hops {
            self.add_piece(sub, h.edge);
        }
    }

    fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Adds shortest paths pairing up the odd-degree nodes; returns whether the
    /// matching was exact.
    fn make_even(&mut self, sub: &TruncatedNetwork, matching: Matching) -> bool {
        let odd: Vec<usize> =
            self.degrees(sub.n_nodes()).iter().enumerate().filter(|(_, d)| *d % 2 == 1).map(|(v, _)| v).collect();
        let trees: Vec<_> = odd.iter().map(|&v| sub.shortest_paths(&[v])).collect();
        let w: Vec<Vec<f64>> = trees.iter().map(|t| odd.iter().map(|&v| t.dist[v]).collect()).collect();
        let pairing = min_weight_pairing(odd.len(), &w, matching);
        for &(i, j) in &pairing.pairs {
            let hops = trees[i].path_to(odd[j]);
            self.add_hops(sub, &hops);
        }
        pairing.exact
    }

    fn circuit(&self, sub: &TruncatedNetwork, start: usize) -> Vec<(usize, bool)> {
        let walk = euler_circuit(sub.n_nodes(), &self.edges, start)
            .expect("walkable graph is connected and even by construction");
        walk.into_iter().map(|(e, fwd)| (self.piece[e], fwd)).collect()
    }
}

fn start_node(sub: &TruncatedNetwork, start: &Point) -> Result<usize> {
    sub.node_of(start).ok_or_else(|| Error::UnknownVertex(format!("{start:?} is not a node of Q[{}]", sub.radius)))
}

fn check_reachable(sub: &TruncatedNetwork, dist: &[f64], pieces: impl Iterator<Item = usize>) -> Result<()> {
    for p in pieces {
        if !dist[sub.pieces[p].from].is_finite() {
            let q = &sub.pieces[p];
            return Err(Error::Disconnected(format!("piece [{}, {}] of edge {} cannot be reached", q.a, q.b, q.edge)));
        }
    }
    Ok(())
}

fn piece_len(sub: &TruncatedNetwork, (p, _): &(usize, bool)) -> f64 {
    sub.pieces[*p].len()
}

/// Cuts the walk right after the last step that covers a new required piece.
fn trim(sub: &TruncatedNetwork, walk: &mut Vec<(usize, bool)>, required: impl Fn(usize) -> bool) {
    let mut seen = vec![false; sub.pieces.len()];
    let mut last = 0;
    for (i, &(p, _)) in walk.iter().enumerate() {
        if required(p) && !seen[p] {
            seen[p] = true;
            last = i + 1;
        }
    }
    walk.truncate(last);
}

fn to_tour(sub: &TruncatedNetwork, kind: TourKind, start: Point, walk: &[(usize, bool)], exact: bool) -> Tour {
    let steps: Vec<Step> = walk
        .iter()
        .map(|&(p, fwd)| {
            let q = &sub.pieces[p];
            if fwd {
                Step { edge: q.edge, from: q.a, to: q.b }
            } else {
                Step { edge: q.edge, from: q.b, to: q.a }
            }
        })
        .collect();
    let total_length = steps.iter().map(Step::len).sum();
    Tour { kind, start, steps, total_length, exact_matching: exact }
}

/// Chinese Postman Tour of every piece of `sub`, starting at `start`.
pub fn cpt_tour(sub: &TruncatedNetwork, start: &Point, opts: &TourOptions) -> Result<Tour> {
    let s = start_node(sub, start)?;
    if sub.pieces.is_empty() {
        return Ok(Tour::empty(TourKind::Cpt, *start));
    }
    let from_s = sub.shortest_paths(&[s]);
    check_reachable(sub, &from_s.dist, 0..sub.pieces.len())?;

    let mut g = Walkable::new();
    for p in 0..sub.pieces.len() {
        g.add_piece(sub, p);
    }
    let exact = g.make_even(sub, opts.matching);
    let mut walk = g.circuit(sub, s);
    if opts.open_ended {
        trim(sub, &mut walk, |_| true);
    }
    Ok(to_tour(sub, TourKind::Cpt, *start, &walk, exact))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Rural Postman Tour covering the pieces of `sub` marked required, starting at
/// `start`: components of required pieces are joined along a minimum spanning tree of
/// shortest paths, odd nodes are matched, and an Euler circuit is read off. In
/// open-ended mode the start is not part of the tree; the walk enters the circuit at
/// the node that makes the path there plus the circuit (cut after its last required
/// piece) shortest.
pub fn rpt_tour(sub: &TruncatedNetwork, start: &Point, opts: &TourOptions) -> Result<Tour> {
    let s = start_node(sub, start)?;
    let required: Vec<usize> = (0..sub.pieces.len()).filter(|&p| sub.pieces[p].required).collect();
    if required.is_empty() {
        return Ok(Tour::empty(TourKind::Rpt, *start));
    }
    let from_s = sub.shortest_paths(&[s]);
    check_reachable(sub, &from_s.dist, required.iter().copied())?;

    let n = sub.n_nodes();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut touched = vec![false; n];
    for &p in &required {
        let q = &sub.pieces[p];
        touched[q.from] = true;
        touched[q.to] = true;
        let (a, b) = (find(&mut parent, q.from), find(&mut parent, q.to));
        parent[a] = b;
    }
    if !opts.open_ended {
        touched[s] = true;
    }
    let mut comp_of_root = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if touched[v] {
            let r = find(&mut parent, v);
            if comp_of_root[r] == usize::MAX {
                comp_of_root[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[comp_of_root[r]].push(v);
        }
    }

    let mut g = Walkable::new();
    for &p in &required {
        g.add_piece(sub, p);
    }

    let c = comps.len();
    if c > 1 {
        // Distances between components, and the nearest node of `j` seen from `i`.
        let mut dist = vec![vec![f64::INFINITY; c]; c];
        let mut nearest = vec![vec![usize::MAX; c]; c];
        for i in 0..c {
            let sp = sub.shortest_paths(&comps[i]);
            for (j, nodes) in comps.iter().enumerate() {
                for &v in nodes {
                    if sp.dist[v] < dist[i][j] {
                        dist[i][j] = sp.dist[v];
                        nearest[i][j] = v;
                    }
                }
            }
        }
        // Prim from component 0.
        let mut in_tree = vec![false; c];
        let mut best = vec![(f64::INFINITY, usize::MAX); c];
        in_tree[0] = true;
        for j in 1..c {
            best[j] = (dist[0][j], 0);
        }
        let mut tree_edges = Vec::with_capacity(c - 1);
        for _ in 1..c {
            let (j, &(_, from)) = best
                .iter()
                .enumerate()
                .filter(|(j, _)| !in_tree[*j])
                .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
                .unwrap();
            in_tree[j] = true;
            tree_edges.push((from, j));
            for k in 0..c {
                if !in_tree[k] && dist[j][k] < best[k].0 {
                    best[k] = (dist[j][k], j);
                }
            }
        }
        tree_edges.sort_unstable();
        let mut i = 0;
        while i < tree_edges.len() {
            let from = tree_edges[i].0;
            let sp = sub.shortest_paths(&comps[from]);
            while i < tree_edges.len() && tree_edges[i].0 == from {
                let hops = sp.path_to(nearest[from][tree_edges[i].1]);
                g.add_hops(sub, &hops);
                i += 1;
            }
        }
    }
    let exact = g.make_even(sub, opts.matching);

    if !opts.open_ended {
        let walk = g.circuit(sub, s);
        return Ok(to_tour(sub, TourKind::Rpt, *start, &walk, exact));
    }

    let entry = sub.pieces[required[0]].from;
    let circuit = g.circuit(sub, entry);
    let total_required = required.len();
    // Node where each step of the circuit begins.
    let mut at = Vec::with_capacity(circuit.len());
    let mut v = entry;
    for &(p, fwd) in &circuit {
        at.push(v);
        let q = &sub.pieces[p];
        v = if fwd { q.to } else { q.from };
    }
    let is_required = |p: usize| sub.pieces[p].required;
    let len = circuit.len();
    let mut stamp = vec![usize::MAX; sub.pieces.len()];
    let mut best: Option<(f64, usize, usize)> = None;
    for rot in 0..len {
        let mut cost = from_s.dist[at[rot]];
        let (mut covered, mut steps) = (0, 0);
        while covered < total_required {
            if best.is_some_and(|b| cost >= b.0) {
                break;
            }
            let item = circuit[(rot + steps) % len];
            cost += piece_len(sub, &item);
            if is_required(item.0) && stamp[item.0] != rot {
                stamp[item.0] = rot;
                covered += 1;
            }
            steps += 1;
        }
        if covered == total_required && best.map_or(true, |b| cost < b.0) {
            best = Some((cost, rot, steps));
        }
    }
    let (_, rot, steps) = best.expect("some rotation covers every required piece");
    let mut walk: Vec<(usize, bool)> = from_s
        .path_to(at[rot])
        .iter()
        .map(|h| (h.edge, sub.pieces[h.edge].from == h.from))
        .collect();
    walk.extend((0..steps).map(|i| circuit[(rot + i) % len]));
    Ok(to_tour(sub, TourKind::Rpt, *start, &walk, exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::truncate::{truncate, EdgeCover};

    fn whole(net: &Network) -> TruncatedNetwork {
        truncate(net, 1e9)
    }

    fn assert_valid(net: &Network, tour: &Tour) {
        let mut at = tour.start;
        for s in &tour.steps {
            assert_eq!(net.point_on(s.edge, s.from), at, "{tour:?}");
            at = net.point_on(s.edge, s.to);
        }
        let sum: f64 = tour.steps.iter().map(Step::len).sum();
        assert!((sum - tour.total_length).abs() < 1e-9);
    }

    #[test]
    fn triangle_and_path() {
        let tri = Network::from_labeled_edges(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], 0).unwrap();
        let t = cpt_tour(&whole(&tri), &Point::vertex(0), &TourOptions::default()).unwrap();
        assert_eq!(t.total_length, 3.0);
        assert_valid(&tri, &t);
        assert_eq!(t.end(&tri), Point::vertex(0));

        let path = Network::from_labeled_edges(&[(0, 1, 1.0), (1, 2, 1.0)], 0).unwrap();
        let t = cpt_tour(&whole(&path), &Point::vertex(0), &TourOptions::default()).unwrap();
        assert_eq!(t.total_length, 4.0);
        assert_valid(&path, &t);
        let open = TourOptions { open_ended: true, ..Default::default() };
        assert_eq!(cpt_tour(&whole(&path), &Point::vertex(0), &open).unwrap().total_length, 2.0);
    }

    #[test]
    fn rural_tour_on_a_far_edge() {
        let net = Network::from_labeled_edges(&[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], 0).unwrap();
        let dist = net.distances_from(0);
        let outer = EdgeCover::new(&net, &dist, 3.0);
        let inner = EdgeCover::new(&net, &dist, 2.0);
        let sub = TruncatedNetwork::build(&net, &dist, &outer, Some(&inner), &[]);
        let t = rpt_tour(&sub, &Point::vertex(0), &TourOptions::default()).unwrap();
        assert_eq!(t.total_length, 6.0);
        assert_valid(&net, &t);
        let open = TourOptions { open_ended: true, ..Default::default() };
        let t = rpt_tour(&sub, &Point::vertex(0), &open).unwrap();
        assert_eq!(t.total_length, 3.0);
        assert_valid(&net, &t);
        assert_eq!(t.end(&net), Point::vertex(3));
    }

    #[test]
    fn empty_requirements_give_an_empty_tour() {
        let net = Network::from_labeled_edges(&[(0, 1, 1.0)], 0).unwrap();
        let dist = net.distances_from(0);
        let c = EdgeCover::new(&net, &dist, 5.0);
        let sub = TruncatedNetwork::build(&net, &dist, &c, Some(&c), &[]);
        let t = rpt_tour(&sub, &Point::vertex(0), &TourOptions::default()).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.total_length, 0.0);
    }

    #[test]
    fn unknown_start_is_an_error() {
        let net = Network::from_labeled_edges(&[(0, 1, 5.0)], 0).unwrap();
        let sub = truncate(&net, 1.0);
        assert!(cpt_tour(&sub, &Point::vertex(1), &TourOptions::default()).is_err());
    }
}
