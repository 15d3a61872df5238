//! First-improvement local search on critical stations.
//!
//! The objective is `(cycle time, number of critical stations)` compared
//! lexicographically; a critical station has load equal to the cycle time.

use crate::instance::{Instance, Load, Solution};

type Objective = (Load, usize);

struct Line<'a> {
    inst: &'a Instance,
    assignment: Vec<usize>,
    order: Vec<usize>,
    station: Vec<usize>,
    loads: Vec<Load>,
}

impl<'a> Line<'a> {
    fn new(inst: &'a Instance, sol: &Solution) -> Self {
        Self {
            inst,
            assignment: sol.assignment.clone(),
            order: sol.worker_order.clone(),
            station: sol.station_of_worker(),
            loads: sol.loads(inst),
        }
    }

    fn objective(&self) -> Objective {
        let max = self.loads.iter().copied().max().unwrap_or(0);
        (max, self.loads.iter().filter(|&&l| l == max).count())
    }

    fn critical_workers(&self) -> Vec<usize> {
        let max = self.objective().0;
        (0..self.loads.len()).filter(|&w| self.loads[w] == max).collect()
    }

    fn time(&self, task: usize, worker: usize) -> Load {
        self.inst.time(task, worker).expect("assigned cells are feasible") as Load
    }

    /// Moves `task` to `worker` without any check.
    fn set(&mut self, task: usize, worker: usize) {
        let old = self.assignment[task];
        self.loads[old] -= self.time(task, old);
        self.loads[worker] += self.time(task, worker);
        self.assignment[task] = worker;
    }

    /// Direct precedence arcs of `task` respect the station order.
    fn placed_legally(&self, task: usize) -> bool {
        let here = self.station[self.assignment[task]];
        self.inst
            .preds(task)
            .iter()
            .all(|&p| self.station[self.assignment[p]] <= here)
            && self
                .inst
                .succs(task)
                .iter()
                .all(|&s| here <= self.station[self.assignment[s]])
    }

    /// Applies the moves if every target cell is feasible and precedence
    /// still holds; returns the previous workers for undo.
    fn try_apply(&mut self, moves: &[(usize, usize)]) -> Option<Vec<(usize, usize)>> {
        if moves.iter().any(|&(t, w)| self.inst.time(t, w).is_none()) {
            return None;
        }
        let undo: Vec<(usize, usize)> = moves.iter().map(|&(t, _)| (t, self.assignment[t])).collect();
        for &(t, w) in moves {
            self.set(t, w);
        }
        if moves.iter().all(|&(t, _)| self.placed_legally(t)) {
            Some(undo)
        } else {
            self.revert(&undo);
            None
        }
    }

    fn revert(&mut self, undo: &[(usize, usize)]) {
        for &(t, w) in undo.iter().rev() {
            self.set(t, w);
        }
    }

    fn tasks_of(&self, workers: &[usize]) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&t| workers.contains(&self.assignment[t]))
            .collect()
    }

    fn shift(&mut self) -> bool {
        let before = self.objective();
        for t in self.tasks_of(&self.critical_workers()) {
            for w in 0..self.loads.len() {
                if w == self.assignment[t] {
                    continue;
                }
                if let Some(undo) = self.try_apply(&[(t, w)]) {
                    if self.objective() < before {
                        return true;
                    }
                    self.revert(&undo);
                }
            }
        }
        false
    }

    fn swap(&mut self) -> bool {
        let before = self.objective();
        for t in self.tasks_of(&self.critical_workers()) {
            for u in 0..self.assignment.len() {
                let (wt, wu) = (self.assignment[t], self.assignment[u]);
                if wt == wu {
                    continue;
                }
                if let Some(undo) = self.try_apply(&[(t, wu), (u, wt)]) {
                    if self.objective() < before {
                        return true;
                    }
                    self.revert(&undo);
                }
            }
        }
        false
    }

    fn double_shift(&mut self) -> bool {
        let before = self.objective();
        for t in self.tasks_of(&self.critical_workers()) {
            for w in 0..self.loads.len() {
                if w == self.assignment[t] {
                    continue;
                }
                let Some(first) = self.try_apply(&[(t, w)]) else {
                    continue;
                };
                for u in self.tasks_of(&self.critical_workers()) {
                    for v in 0..self.loads.len() {
                        if v == self.assignment[u] {
                            continue;
                        }
                        if let Some(second) = self.try_apply(&[(u, v)]) {
                            if self.objective() < before {
                                return true;
                            }
                            self.revert(&second);
                        }
                    }
                }
                self.revert(&first);
            }
        }
        false
    }

    /// Exchanges the workers of two stations; each takes over the other's
    /// tasks, so station contents and precedence are untouched.
    fn exchange(&mut self, a: usize, b: usize) {
        let (v, w) = (self.order[a], self.order[b]);
        for t in 0..self.assignment.len() {
            if self.assignment[t] == v {
                self.assignment[t] = w;
            } else if self.assignment[t] == w {
                self.assignment[t] = v;
            }
        }
        self.order.swap(a, b);
        self.station.swap(v, w);
        let load = |worker: usize| -> Load {
            (0..self.assignment.len())
                .filter(|&t| self.assignment[t] == worker)
                .map(|t| self.time(t, worker))
                .sum()
        };
        let (lv, lw) = (load(v), load(w));
        self.loads[v] = lv;
        self.loads[w] = lw;
    }

    fn worker_swap(&mut self) -> bool {
        let before = self.objective();
        let n = self.order.len();
        for a in 0..n {
            for b in a + 1..n {
                let (v, w) = (self.order[a], self.order[b]);
                let fits = (0..self.assignment.len()).all(|t| match self.assignment[t] {
                    x if x == v => self.inst.time(t, w).is_some(),
                    x if x == w => self.inst.time(t, v).is_some(),
                    _ => true,
                });
                if !fits {
                    continue;
                }
                self.exchange(a, b);
                if self.objective() < before {
                    return true;
                }
                self.exchange(a, b);
            }
        }
        false
    }
}

/// Repeats shift, swap, double shift and worker exchange moves, restarting
/// after every accepted move, until none improves the objective.
pub fn local_search(inst: &Instance, sol: &Solution) -> Solution {
    let mut line = Line::new(inst, sol);
    while line.shift() || line.swap() || line.double_shift() || line.worker_swap() {}
    Solution::new(inst, line.order, line.assignment).expect("moves keep every cell feasible")
}
