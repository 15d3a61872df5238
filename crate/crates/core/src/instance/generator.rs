//! Seeded instance generation.
//!
//! Worker 1 keeps the base times of an underlying single-worker line; every
//! other worker draws integer times uniformly from `[1, p]` (low variability)
//! or `[1, 2p]` (high variability). A fixed fraction of task/worker cells is
//! then made infeasible, never removing the last feasible worker of a task.
//!
//! All randomness comes from `ChaCha8Rng` seeded with `seed_from_u64`, so a
//! seed reproduces the same instance on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Instance, InstanceError, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variability {
    Low,
    High,
}

impl std::str::FromStr for Variability {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Ok(Variability::Low),
            "high" => Ok(Variability::High),
            other => Err(format!("unknown variability '{other}' (expected low|high)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("infeasibility fraction {0} outside [0, 1)")]
    BadFraction(f64),
    #[error("base time of task {0} must be positive")]
    ZeroBaseTime(usize),
    #[error("cannot mark {wanted} cells infeasible while keeping a feasible worker per task")]
    TooManyInfeasible { wanted: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Number of infeasible cells: `round(fraction * cells)`, half rounded up.
pub fn infeasible_cell_count(fraction: f64, cells: usize) -> usize {
    (fraction * cells as f64 + 0.5).floor() as usize
}

pub fn generate_instance(
    base_times: &[Time],
    base_edges: &[(usize, usize)],
    n_workers: usize,
    variability: Variability,
    infeasibility: f64,
    seed: u64,
) -> Result<Instance, GenerateError> {
    if !(0.0..1.0).contains(&infeasibility) {
        return Err(GenerateError::BadFraction(infeasibility));
    }
    if let Some(t) = base_times.iter().position(|&p| p == 0) {
        return Err(GenerateError::ZeroBaseTime(t));
    }
    if n_workers == 0 {
        return Err(InstanceError::NoWorkers.into());
    }
    let n_tasks = base_times.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut times = Vec::with_capacity(n_tasks * n_workers);
    for &p in base_times {
        times.push(Some(p));
        let high = match variability {
            Variability::Low => p,
            Variability::High => p.saturating_mul(2),
        };
        for _ in 1..n_workers {
            times.push(Some(rng.gen_range(1..=high)));
        }
    }

    let cells = n_tasks * n_workers;
    let wanted = infeasible_cell_count(infeasibility, cells);
    if wanted > n_tasks * (n_workers - 1) {
        return Err(GenerateError::TooManyInfeasible { wanted });
    }
    let mut feasible_left = vec![n_workers; n_tasks];
    let mut marked = 0;
    let max_draws = 100 * cells + 1000;
    let mut draws = 0;
    while marked < wanted {
        draws += 1;
        if draws > max_draws {
            return Err(GenerateError::TooManyInfeasible { wanted });
        }
        let cell = rng.gen_range(0..cells);
        let task = cell / n_workers;
        if times[cell].is_none() || feasible_left[task] == 1 {
            continue;
        }
        times[cell] = None;
        feasible_left[task] -= 1;
        marked += 1;
    }

    Ok(Instance::new(n_tasks, n_workers, times, base_edges)?)
}

/// Random single-worker base line: times uniform in `[1, max_time]`, each
/// pair `a < b` linked with probability `density`, then transitively reduced
/// by `Instance::new`.
pub fn random_base(n_tasks: usize, density: f64, max_time: Time, seed: u64) -> (Vec<Time>, Vec<(usize, usize)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let times = (0..n_tasks).map(|_| rng.gen_range(1..=max_time.max(1))).collect();
    let mut edges = Vec::new();
    for a in 0..n_tasks {
        for b in a + 1..n_tasks {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                edges.push((a, b));
            }
        }
    }
    (times, edges)
}

/// Parameters of one member of the small verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteMember {
    pub index: usize,
    pub n_tasks: usize,
    pub n_workers: usize,
    pub variability: Variability,
    pub infeasibility: f64,
    pub density: f64,
    pub seed: u64,
}

/// Seeded small instances: `|T|` in 4..=9, `|W|` in 2..=3, both variability
/// levels and infeasibility in {0, 0.1, 0.2}, cycling through the factor
/// combinations so every level is covered.
pub fn small_suite(count: usize, seed: u64) -> Vec<(SuiteMember, Instance)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fractions = [0.0, 0.1, 0.2];
    let mut out = Vec::with_capacity(count);
    let mut index = 0;
    while out.len() < count {
        let member = SuiteMember {
            index,
            n_tasks: rng.gen_range(4..=9),
            n_workers: 2 + index % 2,
            variability: if (index / 2) % 2 == 0 {
                Variability::Low
            } else {
                Variability::High
            },
            infeasibility: fractions[(index / 4) % 3],
            density: *[0.2, 0.35, 0.6].choose(&mut rng).unwrap(),
            seed: rng.gen(),
        };
        index += 1;
        let (times, edges) = random_base(member.n_tasks, member.density, 12, member.seed);
        match generate_instance(
            &times,
            &edges,
            member.n_workers,
            member.variability,
            member.infeasibility,
            member.seed ^ 0x9e37_79b9_7f4a_7c15,
        ) {
            Ok(inst) => out.push((member, inst)),
            Err(GenerateError::TooManyInfeasible { .. }) => continue,
            Err(e) => panic!("suite generation failed: {e}"),
        }
    }
    out
}
