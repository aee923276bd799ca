//! Unit-speed simulation of walks: first-visit times of every point, the clearance
//! curve, and the exact competitive ratio.

use serde::Serialize;

use crate::network::tours::{Step, Tour};
use crate::network::{offset_eps, Network, Point};

/// A stretch of an edge seen for the first time, walked from offset `from` to offset
/// `to` starting at time `t_from`; the point at `x` is first visited at
/// `t_from + |x - from|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstVisit {
    pub edge: usize,
    pub from: f64,
    pub to: f64,
    pub t_from: f64,
}

impl FirstVisit {
    pub fn time_at(&self, x: f64) -> f64 {
        self.t_from + (x - self.from).abs()
    }

    pub fn len(&self) -> f64 {
        (self.to - self.from).abs()
    }
}

#[derive(Debug, Clone)]
pub struct TraversalTrace {
    root: usize,
    visited: Vec<Vec<(f64, f64)>>,
    first_visits: Vec<FirstVisit>,
    /// Breakpoints `(time, cleared length)` of the piecewise-linear clearance curve.
    curve: Vec<(f64, f64)>,
    time: f64,
    cleared: f64,
    position: Point,
}

impl TraversalTrace {
    /// A searcher standing at `root` at time 0.
    pub fn new(net: &Network, root: usize) -> Self {
        TraversalTrace {
            root,
            visited: vec![Vec::new(); net.edges().len()],
            first_visits: Vec::new(),
            curve: vec![(0.0, 0.0)],
            time: 0.0,
            cleared: 0.0,
            position: Point::vertex(root),
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn clearance(&self) -> f64 {
        self.cleared
    }

    pub fn position(&self) -> Point {
        self.position
    }

    pub fn first_visits(&self) -> &[FirstVisit] {
        &self.first_visits
    }

    pub fn curve(&self) -> &[(f64, f64)] {
        &self.curve
    }

    /// Cleared length at time `t` (constant after the last breakpoint).
    pub fn clearance_at(&self, t: f64) -> f64 {
        let c = &self.curve;
        let i = c.partition_point(|p| p.0 <= t);
        if i == 0 {
            return 0.0;
        }
        if i == c.len() {
            return c[i - 1].1;
        }
        let ((t0, c0), (t1, c1)) = (c[i - 1], c[i]);
        if t1 == t0 {
            c1
        } else {
            c0 + (c1 - c0) * (t - t0) / (t1 - t0)
        }
    }

    /// Walks `step`, stopping at time `deadline`. Returns false if it was cut short.
    pub fn traverse(&mut self, net: &Network, step: &Step, deadline: f64) -> bool {
        let len = step.len();
        let avail = (deadline - self.time).max(0.0);
        let (travelled, end) = if len <= avail {
            (len, step.to)
        } else if step.to >= step.from {
            (avail, step.from + avail)
        } else {
            (avail, step.from - avail)
        };
        let forward = end >= step.from;
        let (lo, hi) = if forward { (step.from, end) } else { (end, step.from) };
        let eps = offset_eps(net.edge(step.edge).len);

        let mut gaps = Vec::new();
        let mut cursor = lo;
        for &(a, b) in &self.visited[step.edge] {
            if b <= cursor {
                continue;
            }
            if a >= hi {
                break;
            }
            if a > cursor {
                gaps.push((cursor, a));
            }
            cursor = cursor.max(b);
        }
        if cursor < hi {
            gaps.push((cursor, hi));
        }
        if !forward {
            gaps.reverse();
        }
        for (a, b) in gaps {
            if b - a <= eps {
                continue;
            }
            let (from, to) = if forward { (a, b) } else { (b, a) };
            let t_from = self.time + (from - step.from).abs();
            self.first_visits.push(FirstVisit { edge: step.edge, from, to, t_from });
            if self.curve.last().is_some_and(|&(t, _)| t < t_from) {
                self.curve.push((t_from, self.cleared));
            }
            self.cleared += b - a;
            self.curve.push((t_from + (b - a), self.cleared));
        }
        merge(&mut self.visited[step.edge], (lo, hi), eps);

        self.time += travelled;
        self.position = net.point_on(step.edge, end);
        travelled == len
    }

    /// Walks every step of `tour` in order until `deadline`. Returns false if the
    /// deadline cut the tour short.
    pub fn follow(&mut self, net: &Network, tour: &Tour, deadline: f64) -> bool {
        tour.steps.iter().all(|s| self.traverse(net, s, deadline))
    }
}

fn merge(intervals: &mut Vec<(f64, f64)>, (lo, hi): (f64, f64), eps: f64) {
    let mut out = Vec::with_capacity(intervals.len() + 1);
    let (mut lo, mut hi) = (lo, hi);
    let mut placed = false;
    for &(a, b) in intervals.iter() {
        if b < lo - eps {
            out.push((a, b));
        } else if a > hi + eps {
            if !placed {
                out.push((lo, hi));
                placed = true;
            }
            out.push((a, b));
        } else {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    if !placed {
        out.push((lo, hi));
    }
    *intervals = out;
}

/// Worst ratio of first-visit time to distance from the root over all visited points,
/// and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompetitiveRatio {
    pub ratio: f64,
    pub witness: Point,
    pub distance: f64,
    pub time: f64,
}

/// Exact competitive ratio of the visits recorded in `trace`, with distances clamped
/// below at 1. The ratio can be below 1 only if nothing beyond unit distance was
/// reached, i.e. when the budget ran out almost at once.
///
/// Along a first-visit stretch the time is linear and the distance is the minimum of
/// two linear functions, so the ratio is monotone between breakpoints and its supremum
/// is attained at stretch ends, the distance breakpoint, or where the clamp starts.
pub fn competitive_ratio(trace: &TraversalTrace, net: &Network) -> Option<CompetitiveRatio> {
    let dist = net.distances_from(trace.root());
    let mut best: Option<CompetitiveRatio> = None;
    for fv in trace.first_visits() {
        let e = net.edge(fv.edge);
        let (du, dv) = (dist[e.u], dist[e.v]);
        let (lo, hi) = (fv.from.min(fv.to), fv.from.max(fv.to));
        let inside = |x: f64| x > lo && x < hi;
        let candidates = [fv.from, fv.to, (dv + e.len - du) / 2.0, 1.0 - du, e.len + dv - 1.0];
        for (i, &x) in candidates.iter().enumerate() {
            if i >= 2 && !inside(x) {
                continue;
            }
            let d = net.point_distance(&dist, fv.edge, x);
            let t = fv.time_at(x);
            let ratio = t / d.max(1.0);
            if best.map_or(true, |b| ratio > b.ratio) {
                best = Some(CompetitiveRatio { ratio, witness: net.point_on(fv.edge, x), distance: d, time: t });
            }
        }
    }
    best
}
