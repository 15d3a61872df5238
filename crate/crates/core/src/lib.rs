//! Solvers for the assembly line worker assignment and balancing problem
//! with a fixed number of stations (ALWABP-2): heterogeneous workers are
//! placed on stations and tasks are assigned to workers so that the
//! precedence constraints hold and the cycle time, the largest worker
//! load, is minimal.
//!
//! * [`instance`]: data model, text format, DAG helpers, seeded generator.
//! * [`bounds`]: lower bounds from the SALBP-2 and `R||Cmax` relaxations.
//! * [`heuristic`]: probabilistic beam search, interval search and local search.
//! * [`bnb`]: task-oriented branch-and-bound and a brute-force oracle.
//! * [`export`]: MIP models in LP format and a solution checker for them.

// index loops over dense matrices read better than iterator chains here
#![allow(clippy::needless_range_loop)]

pub mod bnb;
pub mod bounds;
pub mod export;
pub mod heuristic;
pub mod instance;

pub use instance::{check_solution, parse_instance, write_instance, Instance, Load, Solution, Time, Variability};
