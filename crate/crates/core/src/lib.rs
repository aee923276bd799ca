//! Budgeted online search with maximum clearance.
//!
//! A searcher starts at the root of an environment and has a time budget `T`. It must
//! stay `R`-competitive (any hidden target at distance `d` is found by time `R d`)
//! while covering as much of the environment as possible before the budget runs out.
//!
//! - [`line`] and [`star`] compute Pareto-optimal strategies on the unbounded line and
//!   the m-ray star, together with the baselines they are compared against.
//! - [`network`] implements iterative-deepening heuristics on edge-weighted graphs
//!   (Chinese and Rural Postman tours over growing balls) and exact evaluation of
//!   their clearance and competitive ratio.
//! - [`oracle`] holds brute-force reference solvers used to cross-check the above.
//!
//! ```
//! use clearsearch::line::solve_line_maxclear;
//!
//! let best = solve_line_maxclear(4.0, 64.0)?;
//! assert_eq!(best.strategy.lengths(), &[4.0, 12.0, 32.0]);
//! assert_eq!(best.clearance, 44.0);
//! # Ok::<(), clearsearch::Error>(())
//! ```

pub mod aggressive;
mod banded;
pub mod error;
pub mod line;
pub mod network;
pub mod oracle;
pub mod star;
pub mod strategy;

pub use error::{Error, Result};
pub use strategy::{
    aggressive_sequence, char_roots, check_constraints, eval_cyclic, geometric_cr, rho_star, ConstraintReport,
    CyclicStrategy, RootPair, SearchParams,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    pub struct Intro;
    #[doc = include_str!("../../../book/src/line.md")]
    pub struct Line;
    #[doc = include_str!("../../../book/src/star.md")]
    pub struct Star;
    #[doc = include_str!("../../../book/src/networks.md")]
    pub struct Networks;
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub struct Oracle;
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
}
