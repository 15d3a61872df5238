//! Station-by-station partial lines used by the beam search.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;

use crate::instance::{Instance, Load, Solution, Time};

/// Restricted lower bound `Σ_{t ∈ T_u} p⁻_t(W_u) / |W_u|` kept as an exact
/// fraction; `Infinite` marks a partial line that cannot be completed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinRlb {
    Finite { num: Load, den: Load },
    Infinite,
}

impl MinRlb {
    pub fn as_f64(self) -> f64 {
        match self {
            MinRlb::Finite { num, den } => num as f64 / den as f64,
            MinRlb::Infinite => f64::INFINITY,
        }
    }
}

impl Ord for MinRlb {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MinRlb::Infinite, MinRlb::Infinite) => Ordering::Equal,
            (MinRlb::Infinite, _) => Ordering::Greater,
            (_, MinRlb::Infinite) => Ordering::Less,
            (MinRlb::Finite { num: a, den: b }, MinRlb::Finite { num: c, den: d }) => {
                (*a as u128 * *d as u128).cmp(&(*c as u128 * *b as u128))
            }
        }
    }
}

impl PartialOrd for MinRlb {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    station_workers: Vec<usize>,
    worker_of: Vec<Option<usize>>,
    loads: Vec<Load>,
    worker_used: FixedBitSet,
    /// Per worker: tasks it may no longer execute (times of `None` included).
    excluded: Vec<FixedBitSet>,
    /// Per worker: tasks assigned to it.
    on_worker: Vec<FixedBitSet>,
    unassigned_preds: Vec<u32>,
    n_assigned: usize,
    dead: bool,
}

impl PartialAssignment {
    pub fn new(inst: &Instance) -> Self {
        let (n, m) = (inst.n_tasks(), inst.n_workers());
        let excluded = (0..m)
            .map(|w| {
                let mut set = FixedBitSet::with_capacity(n);
                set.extend((0..n).filter(|&t| inst.time(t, w).is_none()));
                set
            })
            .collect();
        Self {
            station_workers: Vec::with_capacity(m),
            worker_of: vec![None; n],
            loads: vec![0; m],
            worker_used: FixedBitSet::with_capacity(m),
            excluded,
            on_worker: vec![FixedBitSet::with_capacity(n); m],
            unassigned_preds: (0..n).map(|t| inst.preds(t).len() as u32).collect(),
            n_assigned: 0,
            dead: false,
        }
    }

    pub fn n_stations_built(&self) -> usize {
        self.station_workers.len()
    }

    pub fn station_workers(&self) -> &[usize] {
        &self.station_workers
    }

    pub fn worker_of(&self, task: usize) -> Option<usize> {
        self.worker_of[task]
    }

    pub fn load(&self, worker: usize) -> Load {
        self.loads[worker]
    }

    pub fn is_worker_used(&self, worker: usize) -> bool {
        self.worker_used.contains(worker)
    }

    pub fn is_dead(&self) -> bool {
        self.dead
    }

    pub fn is_complete(&self) -> bool {
        self.n_assigned == self.worker_of.len()
    }

    /// Unassigned with every predecessor assigned.
    pub fn is_available(&self, task: usize) -> bool {
        self.worker_of[task].is_none() && self.unassigned_preds[task] == 0
    }

    /// Time of `task` on `worker` after strengthening exclusions.
    pub fn effective_time(&self, inst: &Instance, task: usize, worker: usize) -> Option<Time> {
        if self.excluded[worker].contains(task) {
            None
        } else {
            inst.time(task, worker)
        }
    }

    pub fn open_station(&mut self, worker: usize) {
        assert!(!self.worker_used.contains(worker), "worker {worker} already placed");
        self.worker_used.insert(worker);
        self.station_workers.push(worker);
    }

    /// Records `task` on `worker`; marks the line dead if the worker cannot
    /// execute it.
    pub fn assign(&mut self, inst: &Instance, task: usize, worker: usize) {
        debug_assert!(self.worker_of[task].is_none());
        match self.effective_time(inst, task, worker) {
            Some(p) => self.loads[worker] += p as Load,
            None => self.dead = true,
        }
        self.worker_of[task] = Some(worker);
        self.on_worker[worker].insert(task);
        self.n_assigned += 1;
        for &s in inst.succs(task) {
            self.unassigned_preds[s] -= 1;
        }
    }

    /// Continuity logic to a fixpoint: tasks between two tasks of a worker
    /// join that worker, and the successors (predecessors) of an excluded
    /// successor (predecessor) of a worker's task are excluded too.
    pub fn strengthen(&mut self, inst: &Instance) {
        let n = inst.n_tasks();
        let mut changed = true;
        while changed && !self.dead {
            changed = false;
            for w in 0..self.loads.len() {
                if self.on_worker[w].is_clear() {
                    continue;
                }
                let mut after = FixedBitSet::with_capacity(n);
                let mut before = FixedBitSet::with_capacity(n);
                for i in self.on_worker[w].ones() {
                    after.union_with(inst.succs_star(i));
                    before.union_with(inst.preds_star(i));
                }

                let mut between = after.clone();
                between.intersect_with(&before);
                between.difference_with(&self.on_worker[w]);
                for j in between.ones() {
                    if self.worker_of[j].is_some() {
                        self.dead = true;
                        return;
                    }
                    self.assign(inst, j, w);
                    changed = true;
                }
                if self.dead {
                    return;
                }

                let mut blocked = FixedBitSet::with_capacity(n);
                let mut bad = after.clone();
                bad.intersect_with(&self.excluded[w]);
                for j in bad.ones() {
                    blocked.union_with(inst.succs_star(j));
                }
                let mut bad = before;
                bad.intersect_with(&self.excluded[w]);
                for j in bad.ones() {
                    blocked.union_with(inst.preds_star(j));
                }
                if !blocked.is_subset(&self.excluded[w]) {
                    self.excluded[w].union_with(&blocked);
                    changed = true;
                }
                if !self.excluded[w].is_disjoint(&self.on_worker[w]) {
                    self.dead = true;
                    return;
                }
            }
        }
    }

    /// Restricted lower bound over unplaced workers and unassigned tasks.
    pub fn min_rlb(&self, inst: &Instance) -> MinRlb {
        if self.dead {
            return MinRlb::Infinite;
        }
        if self.is_complete() {
            return MinRlb::Finite { num: 0, den: 1 };
        }
        let free: Vec<usize> = (0..self.loads.len())
            .filter(|&w| !self.worker_used.contains(w))
            .collect();
        if free.is_empty() {
            return MinRlb::Infinite;
        }
        let mut num: Load = 0;
        for t in (0..inst.n_tasks()).filter(|&t| self.worker_of[t].is_none()) {
            match free.iter().filter_map(|&w| self.effective_time(inst, t, w)).min() {
                Some(p) => num += p as Load,
                None => return MinRlb::Infinite,
            }
        }
        MinRlb::Finite {
            num,
            den: free.len() as Load,
        }
    }

    /// The finished line; unplaced workers take the trailing stations in
    /// ascending order.
    pub fn into_solution(self, inst: &Instance) -> Solution {
        assert!(self.is_complete() && !self.dead);
        let mut order = self.station_workers;
        order.extend((0..inst.n_workers()).filter(|&w| !self.worker_used.contains(w)));
        let assignment = self.worker_of.into_iter().map(Option::unwrap).collect();
        Solution::new(inst, order, assignment).expect("assigned tasks have finite times")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::fig1;

    #[test]
    fn min_rlb_values() {
        let inst = fig1();
        let mut partial = PartialAssignment::new(&inst);
        assert_eq!(partial.min_rlb(&inst), MinRlb::Finite { num: 15, den: 3 });
        partial.open_station(2);
        partial.assign(&inst, 0, 2);
        partial.assign(&inst, 2, 2);
        assert_eq!(partial.min_rlb(&inst), MinRlb::Finite { num: 10, den: 2 });
        assert_eq!(partial.load(2), 5);
    }

    #[test]
    fn complete_line_scores_zero() {
        let inst = fig1();
        let mut partial = PartialAssignment::new(&inst);
        for (t, w) in [(0, 2), (2, 2), (1, 0), (3, 0), (4, 1), (5, 1)] {
            partial.assign(&inst, t, w);
        }
        assert_eq!(partial.min_rlb(&inst), MinRlb::Finite { num: 0, den: 1 });
    }

    #[test]
    fn score_ordering_is_exact() {
        let a = MinRlb::Finite { num: 10, den: 2 };
        let b = MinRlb::Finite { num: 15, den: 3 };
        let c = MinRlb::Finite { num: 11, den: 2 };
        assert_eq!(a.cmp(&b), Ordering::Equal);
        assert!(a < c && c < MinRlb::Infinite);
    }

    #[test]
    fn strengthen_forces_tasks_between() {
        let inst = fig1();
        let mut partial = PartialAssignment::new(&inst);
        partial.assign(&inst, 0, 0);
        partial.assign(&inst, 3, 0);
        partial.strengthen(&inst);
        assert_eq!(partial.worker_of(2), Some(0));
        assert!(!partial.is_dead());
    }

    #[test]
    fn infeasible_cell_kills_the_line() {
        let inst = fig1();
        let mut partial = PartialAssignment::new(&inst);
        partial.assign(&inst, 0, 1);
        partial.strengthen(&inst);
        assert!(partial.is_dead());
        assert_eq!(partial.min_rlb(&inst), MinRlb::Infinite);
    }

    #[test]
    fn strengthen_on_empty_is_identity() {
        let inst = fig1();
        let mut partial = PartialAssignment::new(&inst);
        let before = partial.clone();
        partial.strengthen(&inst);
        assert_eq!(partial, before);
    }

    #[test]
    fn excluded_successor_blocks_its_successors() {
        // chain t1 -> t2 -> t3, worker 1 cannot execute t2
        let inst = Instance::new(
            3,
            2,
            vec![Some(1), Some(1), None, Some(1), Some(1), Some(1)],
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        let mut partial = PartialAssignment::new(&inst);
        partial.assign(&inst, 0, 0);
        partial.strengthen(&inst);
        assert_eq!(partial.effective_time(&inst, 2, 0), None);
        assert_eq!(partial.effective_time(&inst, 2, 1), Some(1));
    }
}
