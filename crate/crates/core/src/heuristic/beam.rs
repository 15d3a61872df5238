//! Probabilistic beam search for a fixed candidate cycle time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::max_pw_priority;
use super::partial::{MinRlb, PartialAssignment};
use crate::instance::{Instance, Load, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeamParams {
    pub width: usize,
    pub factor: usize,
    pub cycle_time: Load,
    pub seed: u64,
}

pub fn beam_search_feasible(inst: &Instance, params: &BeamParams) -> Option<Solution> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    search(inst, params.width, params.factor, params.cycle_time, &mut rng)
}

/// Fills the station just opened for `worker`, drawing available tasks that
/// fit the residual capacity with probability proportional to `weights`.
fn fill_station(
    inst: &Instance,
    partial: &mut PartialAssignment,
    worker: usize,
    cycle_time: Load,
    weights: &[Load],
    rng: &mut impl Rng,
) {
    let mut ready: Vec<usize> = (0..inst.n_tasks()).filter(|&t| partial.is_available(t)).collect();
    let mut fitting = Vec::with_capacity(ready.len());
    loop {
        let load = partial.load(worker);
        fitting.clear();
        fitting.extend(ready.iter().copied().filter(|&t| {
            partial
                .effective_time(inst, t, worker)
                .is_some_and(|p| load + p as Load <= cycle_time)
        }));
        if fitting.is_empty() {
            return;
        }
        let total: Load = fitting.iter().map(|&t| weights[t]).sum();
        let mut pick = rng.gen_range(0..total);
        let task = *fitting
            .iter()
            .find(|&&t| {
                if pick < weights[t] {
                    true
                } else {
                    pick -= weights[t];
                    false
                }
            })
            .unwrap();
        partial.assign(inst, task, worker);
        ready.retain(|&t| t != task);
        ready.extend(inst.succs(task).iter().copied().filter(|&s| partial.is_available(s)));
    }
}

pub(crate) fn search(
    inst: &Instance,
    width: usize,
    factor: usize,
    cycle_time: Load,
    rng: &mut impl Rng,
) -> Option<Solution> {
    assert!(width >= 1 && factor >= 1 && cycle_time >= 1);
    let weights: Vec<Load> = (0..inst.n_tasks()).map(|t| max_pw_priority(inst, t)).collect();
    let mut root = PartialAssignment::new(inst);
    if root.is_complete() {
        return Some(root.into_solution(inst));
    }
    root.strengthen(inst);
    let mut beam = vec![root];
    for _ in 0..inst.n_stations() {
        let mut children: Vec<(MinRlb, PartialAssignment)> = Vec::new();
        for parent in &beam {
            for _ in 0..factor {
                for w in (0..inst.n_workers()).filter(|&w| !parent.is_worker_used(w)) {
                    let mut child = parent.clone();
                    child.open_station(w);
                    fill_station(inst, &mut child, w, cycle_time, &weights, rng);
                    if child.is_complete() && !child.is_dead() {
                        return Some(child.into_solution(inst));
                    }
                    child.strengthen(inst);
                    let score = child.min_rlb(inst);
                    if score != MinRlb::Infinite {
                        children.push((score, child));
                    }
                }
            }
        }
        // stable: equal scores keep generation order
        children.sort_by_key(|c| c.0);
        children.truncate(width);
        beam = children.into_iter().map(|(_, c)| c).collect();
        if beam.is_empty() {
            break;
        }
    }
    None
}

/// One beam run with branch factor one at a capacity every worker can meet.
pub fn initial_upper_bound(inst: &Instance, seed: u64) -> Option<Solution> {
    let params = BeamParams {
        width: super::DEFAULT_WIDTH,
        factor: 1,
        cycle_time: inst.max_time_sum().max(1),
        seed,
    };
    beam_search_feasible(inst, &params)
}
