//! Interval search over candidate cycle times.

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{beam, initial_upper_bound, local_search, HeuristicError};
use crate::bounds::{all_bounds, BoundsConfig};
use crate::instance::{Instance, Load, Solution};

#[derive(Debug, Clone, PartialEq)]
pub struct IpbsParams {
    pub width: usize,
    pub factor: usize,
    /// The sweep covers `[max(lower, floor(p * upper)), upper - 1]`.
    pub interval: f64,
    pub t_min: Duration,
    pub t_max: Duration,
    /// Sweeps of an unchanged interval before giving up.
    pub repetitions: usize,
    pub seed: u64,
    /// Known lower bound; computed from the root bound set when `None`.
    pub lower_bound: Option<Load>,
    pub bounds: BoundsConfig,
}

impl Default for IpbsParams {
    fn default() -> Self {
        Self {
            width: super::DEFAULT_WIDTH,
            factor: 5,
            interval: 0.95,
            t_min: Duration::from_secs(6),
            t_max: Duration::from_secs(900),
            repetitions: 20,
            seed: 42,
            lower_bound: None,
            bounds: BoundsConfig::root(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub cycle_time: Load,
    pub feasible: bool,
    pub elapsed_ms: u128,
}

impl fmt::Display for SweepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let outcome = if self.feasible { "feasible" } else { "failed" };
        write!(f, "C {} {} {}", self.cycle_time, outcome, self.elapsed_ms)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IpbsOutcome {
    pub solution: Solution,
    pub lower_bound: Load,
    pub initial: Load,
    pub sweeps: usize,
    pub log: Vec<SweepRecord>,
}

pub fn ipbs(inst: &Instance, params: &IpbsParams) -> Result<IpbsOutcome, HeuristicError> {
    assert!(params.interval > 0.0 && params.interval < 1.0);
    assert!(params.repetitions >= 1);
    let start = Instant::now();
    let lower = params
        .lower_bound
        .unwrap_or_else(|| all_bounds(inst, &params.bounds).best);
    let mut best = initial_upper_bound(inst, params.seed).ok_or(HeuristicError::NoLineFound)?;
    let initial = best.cycle_time;
    let mut log = Vec::new();
    let mut sweeps = 0;
    let mut stale = 0;
    let mut call = 0u64;
    let out_of_time = |elapsed: Duration| elapsed >= params.t_max && elapsed >= params.t_min;

    'search: while best.cycle_time > lower {
        let elapsed = start.elapsed();
        if (stale >= params.repetitions || elapsed >= params.t_max) && elapsed >= params.t_min {
            break;
        }
        let floor = ((params.interval * best.cycle_time as f64).floor() as Load).max(lower);
        let before = best.cycle_time;
        let mut c = before - 1;
        while c >= floor && c >= 1 {
            if out_of_time(start.elapsed()) {
                break 'search;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(call);
            call += 1;
            let found = beam::search(inst, params.width, params.factor, c, &mut rng);
            log.push(SweepRecord {
                cycle_time: c,
                feasible: found.is_some(),
                elapsed_ms: start.elapsed().as_millis(),
            });
            match found {
                Some(sol) => {
                    c = sol.cycle_time.min(c) - 1;
                    best = sol;
                    if best.cycle_time <= lower {
                        break;
                    }
                }
                None => c -= 1,
            }
        }
        sweeps += 1;
        stale = if best.cycle_time < before { 0 } else { stale + 1 };
    }

    let solution = local_search(inst, &best);
    Ok(IpbsOutcome {
        solution,
        lower_bound: lower,
        initial,
        sweeps,
        log,
    })
}
