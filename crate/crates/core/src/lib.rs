//! Solvers for one-sided crossing minimization (OSCM).
//!
//! Given a bipartite graph whose fixed layer `A` is ordered `1..=n0`, find an
//! order of the free layer `B` that minimizes straight-line edge crossings.
//!
//! The crate provides:
//! - [`model`]: instances, orderings and the PACE 2024 `p ocr` text format,
//! - [`crossings`]: pairwise crossing numbers and crossing counts,
//! - [`heuristics`]: constructive and improvement heuristics,
//! - [`reduction`]: data reduction rules over a partial pair orientation,
//! - [`lp`]: the linear relaxation with lazily separated triangle rows,
//! - [`bnb`]: the exact branch-and-bound-and-cut driver,
//! - [`oracle`]: brute force and random instance generation for testing.

pub mod bnb;
pub mod crossings;
mod error;
pub mod heuristics;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod reduction;

pub use bnb::{solve_exact, SolveReport, SolverConfig};
pub use crossings::CrossingMatrix;
pub use error::{Error, Result};
pub use heuristics::{solve_heuristic, HeuristicConfig};
pub use model::{Instance, Ordering, ParseError, Solution};
pub use reduction::FixState;
