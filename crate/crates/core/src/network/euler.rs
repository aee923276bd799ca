//! Euler circuits of connected multigraphs with even degrees (Hierholzer).

/// Edge `(a, b)` of a multigraph over nodes `0..n`.
pub(crate) type MultiEdge = (usize, usize);

/// Closed walk from `start` using every edge once, as `(edge index, traversed a -> b)`.
/// Returns `None` if some degree is odd or some edge is not reachable from `start`.
pub(crate) fn euler_circuit(n: usize, edges: &[MultiEdge], start: usize) -> Option<Vec<(usize, bool)>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((i, b));
        adj[b].push((i, a));
    }
    if adj.iter().any(|l| l.len() % 2 == 1) {
        return None;
    }
    let mut used = vec![false; edges.len()];
    let mut cursor = vec![0usize; n];
    // Stack of (node, edge used to enter it).
    let mut stack: Vec<(usize, Option<(usize, bool)>)> = vec![(start, None)];
    let mut out = Vec::with_capacity(edges.len());
    while let Some(&(v, via)) = stack.last() {
        let mut advanced = false;
        while cursor[v] < adj[v].len() {
            let (e, w) = adj[v][cursor[v]];
            cursor[v] += 1;
            if used[e] {
                continue;
            }
            used[e] = true;
            let forward = edges[e].0 == v && (edges[e].1 == w);
            stack.push((w, Some((e, forward))));
            advanced = true;
            break;
        }
        if !advanced {
            stack.pop();
            if let Some(step) = via {
                out.push(step);
            }
        }
    }
    if out.len() != edges.len() {
        return None;
    }
    out.reverse();
    Some(out)
}
