mod common;

use clearsearch::network::{
    competitive_ratio, cpt_tour, cr_lower_bound, rpt_tour, simulate, truncate, EdgeCover, Matching, Mode, Network,
    Point, RunConfig, Step, Tour, TourOptions, TruncatedNetwork,
};
use clearsearch::oracle::brute_cpp;
use common::{odd_vertices, random_connected, random_small};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Consecutive steps meet, the length adds up and every required piece is walked.
fn assert_valid_tour(net: &Network, sub: &TruncatedNetwork, tour: &Tour, required_only: bool) {
    let mut at = tour.start;
    for s in &tour.steps {
        assert_eq!(net.point_on(s.edge, s.from), at, "steps do not meet: {tour:?}");
        at = net.point_on(s.edge, s.to);
    }
    let sum: f64 = tour.steps.iter().map(Step::len).sum();
    assert!(close(sum, tour.total_length, 1e-12));
    for p in sub.pieces.iter().filter(|p| p.required || !required_only) {
        let walked = tour.steps.iter().any(|s| {
            s.edge == p.edge && close(s.from.min(s.to), p.a, 1e-12) && close(s.from.max(s.to), p.b, 1e-12)
        });
        assert!(walked, "piece {p:?} never walked");
    }
}

/// Exact rural postman optimum by enumerating how often each edge is walked (0, 1 or 2
/// times; required edges at least once).
fn brute_rpp(net: &Network, required: &[bool], start: usize) -> f64 {
    let m = net.edges().len();
    assert!(m <= 9);
    let mut best = f64::INFINITY;
    let mut mult = vec![0u8; m];
    let total = 3usize.pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let mut ok = true;
        for e in 0..m {
            mult[e] = (c % 3) as u8;
            c /= 3;
            if required[e] && mult[e] == 0 {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let n = net.n_vertices();
        let mut deg = vec![0u32; n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut cost = 0.0;
        for (e, edge) in net.edges().iter().enumerate() {
            if mult[e] > 0 {
                deg[edge.u] += mult[e] as u32;
                deg[edge.v] += mult[e] as u32;
                cost += mult[e] as f64 * edge.len;
                let (a, b) = (find(&mut parent, edge.u), find(&mut parent, edge.v));
                parent[a] = b;
            }
        }
        if cost >= best || deg.iter().any(|d| d % 2 == 1) {
            continue;
        }
        let root = find(&mut parent, start);
        let connected = net.edges().iter().enumerate().all(|(e, edge)| mult[e] == 0 || find(&mut parent, edge.u) == root);
        if connected {
            best = cost;
        }
    }
    best
}

#[test]
fn cpt_matches_brute_force_on_random_graphs() {
    let mut checked = 0;
    for seed in 0..100u64 {
        let net = random_small(seed, 9, 12);
        assert!(odd_vertices(&net) <= 10);
        let sub = truncate(&net, 1e12);
        let tour = cpt_tour(&sub, &Point::vertex(0), &TourOptions::default()).unwrap();
        assert_valid_tour(&net, &sub, &tour, false);
        assert!(tour.exact_matching);
        let brute = brute_cpp(&net, 0).unwrap();
        assert!(close(tour.total_length, brute, 1e-9), "seed {seed}: {} vs {brute}", tour.total_length);
        checked += 1;
    }
    assert_eq!(checked, 100);
}

#[test]
fn greedy_matching_is_never_better_than_exact() {
    for seed in 0..40u64 {
        let net = random_small(seed, 10, 16);
        let sub = truncate(&net, 1e12);
        let exact = cpt_tour(&sub, &Point::vertex(0), &TourOptions::default()).unwrap();
        let greedy_opts = TourOptions { matching: Matching::Greedy, open_ended: false };
        let greedy = cpt_tour(&sub, &Point::vertex(0), &greedy_opts).unwrap();
        assert_valid_tour(&net, &sub, &greedy, false);
        assert!(greedy.total_length >= exact.total_length - 1e-9);
    }
}

#[test]
fn rural_tours_are_valid_and_within_three_halves() {
    for seed in 0..60u64 {
        let net = random_small(seed, 6, 8);
        let dist = net.distances_from(0);
        let far = dist.iter().cloned().fold(0.0, f64::max);
        let mut sub = truncate(&net, 1e12);
        // Required: edges whose nearer end is beyond a third of the eccentricity.
        let required: Vec<bool> =
            net.edges().iter().map(|e| dist[e.u].min(dist[e.v]) > far / 3.0).collect();
        for p in sub.pieces.iter_mut() {
            p.required = required[p.edge];
        }
        let tour = rpt_tour(&sub, &Point::vertex(0), &TourOptions::default()).unwrap();
        assert_valid_tour(&net, &sub, &tour, true);
        assert_eq!(tour.end(&net), Point::vertex(0));
        let opt = brute_rpp(&net, &required, 0);
        assert!(tour.total_length <= 1.5 * opt + 1e-9, "seed {seed}: {} vs optimum {opt}", tour.total_length);
        assert!(tour.total_length >= opt - 1e-9);

        let open = TourOptions { open_ended: true, ..Default::default() };
        let open_tour = rpt_tour(&sub, &Point::vertex(0), &open).unwrap();
        assert_valid_tour(&net, &sub, &open_tour, true);
        assert!(open_tour.total_length <= tour.total_length + 1e-9);
    }
}

#[test]
fn rural_tour_with_everything_required_is_no_longer_than_cpt() {
    for seed in 0..40u64 {
        let net = random_small(seed, 8, 12);
        let sub = truncate(&net, 1e12);
        let cpt = cpt_tour(&sub, &Point::vertex(0), &TourOptions::default()).unwrap();
        let rpt = rpt_tour(&sub, &Point::vertex(0), &TourOptions::default()).unwrap();
        assert!(rpt.total_length <= cpt.total_length + 1e-9);
    }
}

#[test]
fn truncated_tours_stay_inside_the_ball() {
    for seed in 0..30u64 {
        let net = random_small(seed, 10, 15);
        let dist = net.distances_from(0);
        for radius in [1.0, 2.5, 4.0, 7.0] {
            let outer = EdgeCover::new(&net, &dist, radius);
            let inner = EdgeCover::new(&net, &dist, radius / 2.0);
            let sub = TruncatedNetwork::build(&net, &dist, &outer, Some(&inner), &[]);
            assert!(close(sub.length(), outer.length(), 1e-12));
            let cpt = cpt_tour(&sub, &Point::vertex(0), &TourOptions::default()).unwrap();
            assert_valid_tour(&net, &sub, &cpt, false);
            let rpt = rpt_tour(&sub, &Point::vertex(0), &TourOptions::default()).unwrap();
            assert_valid_tour(&net, &sub, &rpt, true);
            for s in cpt.steps.iter().chain(&rpt.steps) {
                for x in [s.from, s.to, (s.from + s.to) / 2.0] {
                    assert!(net.point_distance(&dist, s.edge, x) <= radius * (1.0 + 1e-9));
                }
            }
        }
    }
}

#[test]
fn rpt_rounds_finish_no_later_than_cpt_rounds() {
    for seed in 0..40u64 {
        let net = random_small(seed, 12, 20);
        let budget = 3.0 * net.total_length();
        for r in [1.5, 2.0, 3.0] {
            let cpt = simulate(&net, 0, &RunConfig::new(r, budget, Mode::Cpt)).unwrap().report;
            for open_ended in [false, true] {
                let cfg = RunConfig { open_ended, ..RunConfig::new(r, budget, Mode::Rpt) };
                let rpt = simulate(&net, 0, &cfg).unwrap().report;
                for (a, b) in cpt.rounds.iter().zip(&rpt.rounds) {
                    assert_eq!(a.index, b.index);
                    if a.completed && b.completed {
                        assert!(b.end_time <= a.end_time + 1e-9, "seed {seed} r {r}: {b:?} vs {a:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn rpt_with_r2_is_within_four_times_the_lower_bound() {
    for seed in 0..50u64 {
        let net = random_small(1000 + seed, 12, 18);
        let budget = 10.0 * net.total_length();
        let run = simulate(&net, 0, &RunConfig::new(2.0, budget, Mode::Rpt)).unwrap();
        assert!(run.report.covered_all);
        let cr = run.report.competitive_ratio.unwrap();
        assert!(run.report.lower_bound_exact);
        assert!(cr >= 1.0 - 1e-12);
        assert!(cr <= 4.0 * run.report.lower_bound_rhat + 1e-9, "seed {seed}: {cr} vs {}", run.report.lower_bound_rhat);
    }
}

/// First-visit times of `samples` evenly spaced points per edge, found by replaying the
/// tours step by step; returns `(time, weight)` sorted by time.
fn sampled_first_visits(net: &Network, tours: &[Tour], budget: f64, samples: usize) -> Vec<(f64, f64)> {
    let mut first: Vec<Vec<f64>> = net.edges().iter().map(|_| vec![f64::INFINITY; samples]).collect();
    let mut t = 0.0;
    'walk: for tour in tours {
        for s in &tour.steps {
            if t >= budget {
                break 'walk;
            }
            let len = net.edge(s.edge).len;
            let walked = s.len().min(budget - t);
            let (lo, hi) = if s.to >= s.from { (s.from, s.from + walked) } else { (s.from - walked, s.from) };
            let spacing = len / samples as f64;
            let j0 = ((lo / spacing - 0.5).ceil().max(0.0)) as usize;
            let mut j = j0;
            while j < samples {
                let x = (j as f64 + 0.5) * spacing;
                if x > hi {
                    break;
                }
                let tx = t + (x - s.from).abs();
                if tx < first[s.edge][j] {
                    first[s.edge][j] = tx;
                }
                j += 1;
            }
            t += walked;
        }
    }
    let mut out: Vec<(f64, f64)> = first
        .iter()
        .enumerate()
        .flat_map(|(e, ts)| {
            let w = net.edge(e).len / samples as f64;
            ts.iter().filter(|t| t.is_finite()).map(move |&t| (t, w))
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

#[test]
fn clearance_curve_matches_a_sampled_replay() {
    let cases: Vec<(Network, f64, Mode, bool)> = vec![
        (random_connected(7, 30, 50), 0.6, Mode::Rpt, false),
        (random_connected(8, 20, 35), 1.5, Mode::Cpt, false),
        (random_connected(9, 25, 40), 0.8, Mode::Rpt, true),
        (random_connected(10, 12, 20), 3.0, Mode::Rpt, false),
    ];
    for (net, budget_factor, mode, open_ended) in cases {
        let budget = budget_factor * net.total_length();
        let cfg = RunConfig { open_ended, ..RunConfig::new(2.0, budget, mode) };
        let run = simulate(&net, 0, &cfg).unwrap();
        let sampled = sampled_first_visits(&net, &run.tours, budget, 10_000);
        let end = run.report.time_used;
        let mut acc = 0.0;
        let mut i = 0;
        for k in 0..=400 {
            let tau = 1.0 + (end - 1.0) * k as f64 / 400.0;
            while i < sampled.len() && sampled[i].0 <= tau {
                acc += sampled[i].1;
                i += 1;
            }
            let exact = run.trace.clearance_at(tau);
            assert!((acc - exact).abs() <= 0.01 * exact, "t = {tau}: sampled {acc} vs {exact}");
        }
        assert!(close(run.trace.clearance(), run.report.clearance_at_budget, 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clearance_curve_is_monotone_with_unit_slope(seed in 0u64..10_000, factor in 0.05f64..2.0, rpt in any::<bool>()) {
        let net = random_small(seed, 10, 16);
        let mode = if rpt { Mode::Rpt } else { Mode::Cpt };
        let run = simulate(&net, 0, &RunConfig::new(2.0, factor * net.total_length(), mode)).unwrap();
        let curve = run.trace.curve();
        prop_assert_eq!(curve[0], (0.0, 0.0));
        for w in curve.windows(2) {
            let ((t0, c0), (t1, c1)) = (w[0], w[1]);
            prop_assert!(t1 >= t0 && c1 >= c0);
            prop_assert!(c1 - c0 <= (t1 - t0) * (1.0 + 1e-9) + 1e-9);
        }
        prop_assert!(run.report.time_used <= factor * net.total_length() * (1.0 + 1e-12));
        let last_ball = run.report.rounds.last().map_or(0.0, |r| r.ball_length);
        prop_assert!(run.report.clearance_at_budget <= last_ball * (1.0 + 1e-9));
        // Once length 1 is cleared, some point was first reached at time >= 1.
        if run.report.clearance_at_budget >= 1.0 {
            prop_assert!(competitive_ratio(&run.trace, &net).unwrap().ratio >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn ball_length_grows_with_the_radius(seed in 0u64..10_000, r1 in 0.1f64..20.0, dr in 0.0f64..20.0) {
        let net = random_small(seed, 12, 20);
        prop_assert!(truncate(&net, r1).length() <= truncate(&net, r1 + dr).length() + 1e-9);
    }

    #[test]
    fn brute_cpp_exceeds_total_length_unless_eulerian(seed in 0u64..10_000) {
        let net = random_small(seed, 8, 12);
        let cpp = brute_cpp(&net, 0).unwrap();
        let total = net.total_length();
        if odd_vertices(&net) == 0 {
            prop_assert!(close(cpp, total, 1e-12));
        } else {
            prop_assert!(cpp > total);
        }
    }

    #[test]
    fn lower_bound_grows_with_rounds(seed in 0u64..10_000, r in 1.2f64..4.0) {
        let net = random_small(seed, 10, 15);
        let mut prev = 0.0;
        for rounds in 1..8 {
            let b = cr_lower_bound(&net, 0, r, rounds, Matching::Exact).unwrap();
            prop_assert!(b.value >= prev);
            prev = b.value;
        }
    }
}
