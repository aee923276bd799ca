//! The iterative-deepening strategies: round `i` searches the ball of radius `r^i`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::network::matching::Matching;
use crate::network::tours::{cpt_tour, rpt_tour, Tour, TourKind, TourOptions};
use crate::network::trace::{competitive_ratio, TraversalTrace};
use crate::network::truncate::{EdgeCover, TruncatedNetwork};
use crate::network::{Location, Network, Point};

/// Safety cap on the number of radii tried, skipped ones included.
const MAX_ROUNDS: u32 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Chinese Postman Tour of the whole ball every round.
    Cpt,
    /// The cheaper of that and a Rural Postman Tour of the newly added ring.
    Rpt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub r: f64,
    #[serde(rename = "T")]
    pub budget: f64,
    pub mode: Mode,
    pub open_ended: bool,
    pub matching: Matching,
}

impl RunConfig {
    pub fn new(r: f64, budget: f64, mode: Mode) -> Self {
        RunConfig { r, budget, mode, open_ended: false, matching: Matching::Exact }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundReport {
    pub index: u32,
    pub radius: f64,
    pub kind: TourKind,
    pub tour_length: f64,
    pub cpt_length: f64,
    /// Length of the rural candidate (rpt mode only).
    pub rpt_length: Option<f64>,
    pub start_time: f64,
    pub end_time: f64,
    pub completed: bool,
    /// Length of the ball searched in this round.
    pub ball_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub location: Location,
    pub distance: f64,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub mode: Mode,
    pub open_ended: bool,
    pub matching: Matching,
    pub r: f64,
    #[serde(rename = "T")]
    pub budget: f64,
    pub root: u64,
    pub network_length: f64,
    pub rounds: Vec<RoundReport>,
    #[serde(rename = "clearance_at_T")]
    pub clearance_at_budget: f64,
    pub time_used: f64,
    pub covered_all: bool,
    pub competitive_ratio: Option<f64>,
    pub witness: Option<Witness>,
    #[serde(rename = "lower_bound_Rhat")]
    pub lower_bound_rhat: f64,
    /// True when every tour behind the lower bound used exact matching.
    pub lower_bound_exact: bool,
    /// True when every tour walked used exact matching.
    pub exact_matching: bool,
    pub stop: Location,
}

/// A finished run: the report plus everything needed to replay or inspect it.
#[derive(Debug, Clone)]
pub struct Run {
    pub report: RunReport,
    pub trace: TraversalTrace,
    pub tours: Vec<Tour>,
}

fn check_config(net: &Network, root: usize, cfg: &RunConfig) -> Result<()> {
    if !(cfg.r > 1.0) || !cfg.r.is_finite() {
        return Err(invalid(format!("radius base r must be a finite value > 1, got {}", cfg.r)));
    }
    if !(cfg.budget > 0.0) || cfg.budget.is_nan() {
        return Err(invalid(format!("budget must be positive, got {}", cfg.budget)));
    }
    if root >= net.n_vertices() {
        return Err(Error::UnknownVertex(format!("vertex index {root}")));
    }
    if !net.edges_reachable_from(root) {
        return Err(Error::Disconnected(format!("some edges cannot be reached from vertex {}", net.label(root))));
    }
    Ok(())
}

fn new_length_eps(cover: &EdgeCover) -> f64 {
    1e-9 * cover.length().max(1.0)
}

/// Runs the strategy from `root` until the budget is spent or the whole network has
/// been searched.
pub fn simulate(net: &Network, root: usize, cfg: &RunConfig) -> Result<Run> {
    check_config(net, root, cfg)?;
    let dist = net.distances_from(root);
    let opts = TourOptions { matching: cfg.matching, open_ended: cfg.open_ended && cfg.mode == Mode::Rpt };
    let mut trace = TraversalTrace::new(net, root);
    let mut inner = EdgeCover::empty(net);
    let mut rounds = Vec::new();
    let mut tours = Vec::new();
    let mut covered_all = false;
    let mut last_index = 0;
    let mut finished = false;

    for i in 1..=MAX_ROUNDS {
        let radius = cfg.r.powi(i as i32);
        let outer = EdgeCover::new(net, &dist, radius);
        if outer.length() - inner.length() <= new_length_eps(&outer) {
            if outer.is_full(net) {
                covered_all = true;
                finished = true;
                break;
            }
            continue;
        }
        last_index = i;
        let position = trace.position();
        let sub = TruncatedNetwork::build(net, &dist, &outer, Some(&inner), &[position]);
        let cpt = cpt_tour(&sub, &position, &opts)?;
        let (tour, rpt_length) = match cfg.mode {
            Mode::Cpt => (cpt.clone(), None),
            Mode::Rpt => {
                let rpt = rpt_tour(&sub, &position, &opts)?;
                let len = rpt.total_length;
                (if len < cpt.total_length { rpt } else { cpt.clone() }, Some(len))
            }
        };
        let start_time = trace.time();
        let completed = trace.follow(net, &tour, cfg.budget);
        rounds.push(RoundReport {
            index: i,
            radius,
            kind: tour.kind,
            tour_length: tour.total_length,
            cpt_length: cpt.total_length,
            rpt_length,
            start_time,
            end_time: trace.time(),
            completed,
            ball_length: outer.length(),
        });
        tours.push(tour);
        if outer.is_full(net) {
            covered_all = completed;
        }
        if !completed || trace.time() >= cfg.budget || covered_all {
            finished = true;
            break;
        }
        inner = outer;
    }
    if !finished {
        return Err(invalid(format!("r = {} is too close to 1: no progress after {MAX_ROUNDS} radii", cfg.r)));
    }

    let bound = cr_lower_bound(net, root, cfg.r, last_index.max(1), cfg.matching)?;
    let cr = competitive_ratio(&trace, net);
    let report = RunReport {
        mode: cfg.mode,
        open_ended: opts.open_ended,
        matching: cfg.matching,
        r: cfg.r,
        budget: cfg.budget,
        root: net.label(root),
        network_length: net.total_length(),
        clearance_at_budget: trace.clearance(),
        time_used: trace.time(),
        covered_all,
        competitive_ratio: cr.map(|c| c.ratio),
        witness: cr.map(|c| Witness { location: Location::of(net, c.witness), distance: c.distance, time: c.time }),
        lower_bound_rhat: bound.value,
        lower_bound_exact: bound.exact,
        exact_matching: tours.iter().all(|t| t.exact_matching),
        stop: Location::of(net, trace.position()),
        rounds,
    };
    Ok(Run { report, trace, tours })
}

/// [`simulate`], keeping only the report.
pub fn run_strategy(net: &Network, root: usize, cfg: &RunConfig) -> Result<RunReport> {
    simulate(net, root, cfg).map(|run| run.report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: f64,
    /// False if some postman tour behind the bound used heuristic matching, in which
    /// case the value is not a certified bound.
    pub exact: bool,
}

/// `max_{i <= rounds} l_i / r^i`, where `l_i` is the length of a Chinese Postman Tour of
/// the ball of radius `r^i` around `root`. Any strategy that searches the network has
/// competitive ratio at least this large.
pub fn cr_lower_bound(net: &Network, root: usize, r: f64, rounds: u32, matching: Matching) -> Result<LowerBound> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(invalid(format!("radius base r must be a finite value > 1, got {r}")));
    }
    if rounds == 0 {
        return Err(invalid("the lower bound needs at least one round"));
    }
    if root >= net.n_vertices() {
        return Err(Error::UnknownVertex(format!("vertex index {root}")));
    }
    let dist = net.distances_from(root);
    let opts = TourOptions { matching, open_ended: false };
    let mut bound = LowerBound { value: 0.0, exact: true };
    for i in 1..=rounds {
        let radius = r.powi(i as i32);
        let cover = EdgeCover::new(net, &dist, radius);
        let sub = TruncatedNetwork::build(net, &dist, &cover, None, &[]);
        let tour = cpt_tour(&sub, &Point::vertex(root), &opts)?;
        bound.value = bound.value.max(tour.total_length / radius);
        bound.exact &= tour.exact_matching;
        if cover.is_full(net) {
            // Later terms share the same tour length over a larger radius.
            break;
        }
    }
    Ok(bound)
}
