//! Reduction rules applied after each branching assignment.
//!
//! * R1: an assigned task is excluded from every other worker.
//! * R2: continuity. Tasks between two tasks of a worker join it; the
//!   successors (predecessors) of an excluded successor (predecessor) of a
//!   worker's task are excluded from that worker.
//! * R3: `(t', w)` is excluded when `t` is on `w` and `t`, `t'` and every
//!   task between them would load `w` to at least the incumbent.
//!
//! Rules run on a worklist of workers until nothing changes.

use fixedbitset::FixedBitSet;

use super::state::SearchState;
use crate::instance::Load;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    Alive,
    Dead,
}

/// Applies R1 to R3 after `task` was assigned to `worker`. Changes are
/// recorded on the state's trail.
pub fn apply_reduction_rules(state: &mut SearchState<'_>, task: usize, worker: usize, gub: Load) -> Reduction {
    let inst = state.instance();
    let n_workers = inst.n_workers();
    let mut pending = FixedBitSet::with_capacity(n_workers);
    let mut queue = vec![worker];
    pending.insert(worker);

    for w in (0..n_workers).filter(|&w| w != worker) {
        state.exclude(task, w);
    }

    while let Some(w) = queue.pop() {
        pending.set(w, false);
        let mark = state.trail_len();
        let Some(forced) = reduce_worker(state, w, gub) else {
            return Reduction::Dead;
        };
        if state.trail_len() != mark && !pending.put(w) {
            queue.push(w);
        }
        if forced {
            // a forced task is excluded everywhere else, which feeds R2 of
            // every other worker
            for v in (0..n_workers).filter(|&v| v != w && !state.tasks_on(v).is_clear()) {
                if !pending.put(v) {
                    queue.push(v);
                }
            }
        }
    }

    if state.unassigned().any(|t| state.effective_min(t).is_none()) {
        return Reduction::Dead;
    }
    Reduction::Alive
}

/// One pass of R2 and R3 for `w`. `None` means a contradiction; otherwise
/// whether a task was forced onto `w`.
fn reduce_worker(state: &mut SearchState<'_>, w: usize, gub: Load) -> Option<bool> {
    let inst = state.instance();
    let n = inst.n_tasks();
    if state.tasks_on(w).is_clear() {
        return Some(false);
    }
    let mut forced_any = false;
    loop {
        let mut after = FixedBitSet::with_capacity(n);
        let mut before = FixedBitSet::with_capacity(n);
        for i in state.tasks_on(w).ones() {
            after.union_with(inst.succs_star(i));
            before.union_with(inst.preds_star(i));
        }

        let mut between = after.clone();
        between.intersect_with(&before);
        between.difference_with(state.tasks_on(w));
        let Some(j) = between.ones().next() else {
            break;
        };
        if state.worker_of(j).is_some() || state.effective_time(j, w).is_none() || !state.assignment_is_valid(j, w) {
            return None;
        }
        state.set_assignment(j, w);
        for v in 0..inst.n_workers() {
            if v != w {
                state.exclude(j, v);
            }
        }
        forced_any = true;
    }

    let mut after = FixedBitSet::with_capacity(n);
    let mut before = FixedBitSet::with_capacity(n);
    for i in state.tasks_on(w).ones() {
        after.union_with(inst.succs_star(i));
        before.union_with(inst.preds_star(i));
    }
    let mut blocked = FixedBitSet::with_capacity(n);
    for j in after.ones().filter(|&j| state.effective_time(j, w).is_none()) {
        blocked.union_with(inst.succs_star(j));
    }
    for j in before.ones().filter(|&j| state.effective_time(j, w).is_none()) {
        blocked.union_with(inst.preds_star(j));
    }
    if !blocked.is_disjoint(state.tasks_on(w)) {
        return None;
    }
    for k in blocked.ones() {
        state.exclude(k, w);
    }

    let on_w: Vec<usize> = state.tasks_on(w).ones().collect();
    let candidates: Vec<usize> = state
        .unassigned()
        .filter(|&t| state.effective_time(t, w).is_some())
        .collect();
    for t2 in candidates {
        let p2 = state.effective_time(t2, w).unwrap() as Load;
        let too_long = on_w.iter().any(|&t| {
            let p = inst.time(t, w).unwrap() as Load;
            let mut between = inst.preds_star(t).clone();
            between.intersect_with(inst.succs_star(t2));
            let mut other = inst.succs_star(t).clone();
            other.intersect_with(inst.preds_star(t2));
            between.union_with(&other);
            let mut total = p + p2;
            for u in between.ones() {
                match state.effective_time(u, w) {
                    Some(pu) => total += pu as Load,
                    None => return true,
                }
            }
            total >= gub
        });
        if too_long {
            state.exclude(t2, w);
        }
    }
    Some(forced_any)
}
