//! Exact search: task-oriented depth-first branch-and-bound over partial
//! assignments, with a worker order graph keeping station sequences
//! consistent, plus an exhaustive oracle for tiny instances.

mod oracle;
mod reduce;
mod search;
mod state;

pub use oracle::{brute_force_optimal, brute_force_solution, OracleError, ORACLE_LIMIT};
pub use reduce::{apply_reduction_rules, Reduction};
pub use search::{branch_and_bound, select_branch_task, BnbConfig, BnbResult, BnbStatus};
pub use state::{SearchState, WorkerOrderGraph};
