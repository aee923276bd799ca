#![allow(dead_code)]

use clearsearch::network::Network;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;

/// Random connected multigraph on `n` vertices: a random spanning tree plus extra
/// edges (parallel edges allowed) up to `m` edges in total. Lengths lie in [0.5, 5].
pub fn random_connected(seed: u64, n: usize, m: usize) -> Network {
    assert!(n >= 2 && m >= n - 1);
    let mut rng = Pcg32::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m);
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u as u64, v as u64, rng.random_range(0.5..5.0)));
    }
    while edges.len() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.push((u as u64, v as u64, rng.random_range(0.5..5.0)));
        }
    }
    Network::from_labeled_edges(&edges, 0).unwrap()
}

/// A random graph with the given seed, between 2 and `max_nodes` vertices and at most
/// `max_edges` edges.
pub fn random_small(seed: u64, max_nodes: usize, max_edges: usize) -> Network {
    let mut rng = Pcg32::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = rng.random_range(2..=max_nodes);
    let m = rng.random_range(n - 1..=max_edges.max(n - 1));
    random_connected(seed, n, m)
}

pub fn odd_vertices(net: &Network) -> usize {
    (0..net.n_vertices()).filter(|&v| net.degree(v) % 2 == 1).count()
}
