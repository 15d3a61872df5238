//! Upper bounds: probabilistic beam search for a fixed cycle time, the
//! interval search around it, and a local search polish.
//!
//! Randomness comes from `ChaCha8Rng`; every beam run of an interval search
//! uses the caller's seed with its own stream number, so a seed reproduces
//! a run as long as it is not cut short by the clock.

mod beam;
mod ipbs;
mod local_search;
mod partial;

use thiserror::Error;

use crate::instance::{Instance, Load};

pub use beam::{beam_search_feasible, initial_upper_bound, BeamParams};
pub use ipbs::{ipbs, IpbsOutcome, IpbsParams, SweepRecord};
pub use local_search::local_search;
pub use partial::{MinRlb, PartialAssignment};

pub const DEFAULT_WIDTH: usize = 125;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeuristicError {
    #[error("no feasible line found even without a cycle time limit")]
    NoLineFound,
}

/// Minimum positional weight: own minimum time plus the minimum times of
/// all successors.
pub fn max_pw_priority(inst: &Instance, task: usize) -> Load {
    let succ: Load = inst.succs_star(task).ones().map(|s| inst.min_time(s) as Load).sum();
    inst.min_time(task) as Load + succ
}
