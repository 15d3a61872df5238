//! Problem data: tasks, heterogeneous workers, the task time matrix and
//! the precedence graph, plus the `Solution` type shared by every solver.
//!
//! Tasks and workers are 0-based in memory and 1-based in every file format
//! and report.

pub mod dag;
mod format;
pub mod generator;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dag::{transitive_closure, transitive_reduction, DagError};
pub use format::{parse_instance, write_instance, ParseError, ParseErrorKind};
pub use generator::{generate_instance, GenerateError, Variability};

/// Execution time of one task by one worker.
pub type Time = u32;
/// Sums of times: station loads, cycle times, bounds.
pub type Load = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance needs at least one worker")]
    NoWorkers,
    #[error("time matrix has {got} cells, expected {expected}")]
    MatrixShape { got: usize, expected: usize },
    #[error("task {0} has a zero execution time")]
    ZeroTime(usize),
    #[error("task {0} has no feasible worker")]
    NoFeasibleWorker(usize),
    #[error(transparent)]
    Dag(#[from] DagError),
}

/// An ALWABP instance. Immutable once built.
///
/// `times` is row-major by task: `times[t * n_workers + w]`, `None` marks a
/// task the worker cannot execute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n_tasks: usize,
    n_workers: usize,
    times: Vec<Option<Time>>,
    edges: Vec<(usize, usize)>,
    closure: Vec<(usize, usize)>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    preds_star: Vec<FixedBitSet>,
    succs_star: Vec<FixedBitSet>,
    min_times: Vec<Time>,
}

impl Instance {
    /// Validates and normalizes: `edges` may contain redundant arcs, the
    /// stored graph is its transitive reduction.
    pub fn new(
        n_tasks: usize,
        n_workers: usize,
        times: Vec<Option<Time>>,
        edges: &[(usize, usize)],
    ) -> Result<Self, InstanceError> {
        if n_workers == 0 {
            return Err(InstanceError::NoWorkers);
        }
        if times.len() != n_tasks * n_workers {
            return Err(InstanceError::MatrixShape {
                got: times.len(),
                expected: n_tasks * n_workers,
            });
        }
        let mut min_times = Vec::with_capacity(n_tasks);
        for t in 0..n_tasks {
            let row = &times[t * n_workers..(t + 1) * n_workers];
            if row.contains(&Some(0)) {
                return Err(InstanceError::ZeroTime(t));
            }
            match row.iter().flatten().min() {
                Some(&m) => min_times.push(m),
                None => return Err(InstanceError::NoFeasibleWorker(t)),
            }
        }
        let reduced = dag::transitive_reduction(edges, n_tasks)?;
        let succs_star = dag::reachability(&reduced, n_tasks)?;
        let mut preds_star = vec![FixedBitSet::with_capacity(n_tasks); n_tasks];
        for (a, row) in succs_star.iter().enumerate() {
            for b in row.ones() {
                preds_star[b].insert(a);
            }
        }
        let closure = succs_star
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.ones().map(move |b| (a, b)))
            .collect();
        let mut preds = vec![Vec::new(); n_tasks];
        let mut succs = vec![Vec::new(); n_tasks];
        for &(a, b) in &reduced {
            succs[a].push(b);
            preds[b].push(a);
        }
        Ok(Self {
            n_tasks,
            n_workers,
            times,
            edges: reduced,
            closure,
            preds,
            succs,
            preds_star,
            succs_star,
            min_times,
        })
    }

    pub fn n_tasks(&self) -> usize {
        self.n_tasks
    }

    pub fn n_workers(&self) -> usize {
        self.n_workers
    }

    /// Number of stations, always equal to the number of workers.
    pub fn n_stations(&self) -> usize {
        self.n_workers
    }

    #[inline]
    pub fn time(&self, task: usize, worker: usize) -> Option<Time> {
        self.times[task * self.n_workers + worker]
    }

    pub fn times(&self) -> &[Option<Time>] {
        &self.times
    }

    /// Transitively reduced precedence arcs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Transitive closure of the precedence graph, sorted.
    pub fn closure(&self) -> &[(usize, usize)] {
        &self.closure
    }

    pub fn preds(&self, task: usize) -> &[usize] {
        &self.preds[task]
    }

    pub fn succs(&self, task: usize) -> &[usize] {
        &self.succs[task]
    }

    /// All (transitive) predecessors of `task`.
    pub fn preds_star(&self, task: usize) -> &FixedBitSet {
        &self.preds_star[task]
    }

    /// All (transitive) successors of `task`.
    pub fn succs_star(&self, task: usize) -> &FixedBitSet {
        &self.succs_star[task]
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.succs_star[a].contains(b)
    }

    /// Minimum time of `task` over all workers able to execute it.
    pub fn min_time(&self, task: usize) -> Time {
        self.min_times[task]
    }

    pub fn min_times(&self) -> &[Time] {
        &self.min_times
    }

    /// Workers able to execute `task`.
    pub fn feasible_workers(&self, task: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_workers).filter(move |&w| self.time(task, w).is_some())
    }

    /// Tasks `worker` is able to execute.
    pub fn feasible_tasks(&self, worker: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_tasks).filter(move |&t| self.time(t, worker).is_some())
    }

    /// Same times, every precedence arc reversed.
    pub fn reversed(&self) -> Instance {
        let edges: Vec<_> = self.edges.iter().map(|&(a, b)| (b, a)).collect();
        Instance::new(self.n_tasks, self.n_workers, self.times.clone(), &edges)
            .expect("reversing a valid instance keeps it valid")
    }

    /// Copy with workers relabelled: new worker `i` is old worker `perm[i]`.
    pub fn with_worker_permutation(&self, perm: &[usize]) -> Instance {
        assert_eq!(perm.len(), self.n_workers);
        let mut times = Vec::with_capacity(self.times.len());
        for t in 0..self.n_tasks {
            times.extend(perm.iter().map(|&w| self.time(t, w)));
        }
        Instance::new(self.n_tasks, self.n_workers, times, &self.edges)
            .expect("permuting workers keeps the instance valid")
    }

    /// Sum over tasks of the largest finite time.
    pub fn max_time_sum(&self) -> Load {
        (0..self.n_tasks)
            .map(|t| (0..self.n_workers).filter_map(|w| self.time(t, w)).max().unwrap_or(0) as Load)
            .sum()
    }
}

/// `reverse_instance` under its operation name.
pub fn reverse_instance(inst: &Instance) -> Instance {
    inst.reversed()
}

/// A complete line: one worker per station and one worker per task.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Solution {
    /// `worker_order[s]` is the worker placed at station `s`.
    pub worker_order: Vec<usize>,
    /// `assignment[t]` is the worker executing task `t`.
    pub assignment: Vec<usize>,
    pub cycle_time: Load,
}

impl Solution {
    /// Builds a solution and computes its cycle time. Returns `None` when a
    /// task is assigned to a worker that cannot execute it.
    pub fn new(inst: &Instance, worker_order: Vec<usize>, assignment: Vec<usize>) -> Option<Self> {
        let loads = worker_loads(inst, &assignment)?;
        let cycle_time = loads.into_iter().max().unwrap_or(0);
        Some(Self {
            worker_order,
            assignment,
            cycle_time,
        })
    }

    pub fn loads(&self, inst: &Instance) -> Vec<Load> {
        worker_loads(inst, &self.assignment).unwrap_or_default()
    }

    /// Station index of every worker.
    pub fn station_of_worker(&self) -> Vec<usize> {
        let mut pos = vec![0; self.worker_order.len()];
        for (s, &w) in self.worker_order.iter().enumerate() {
            pos[w] = s;
        }
        pos
    }
}

fn worker_loads(inst: &Instance, assignment: &[usize]) -> Option<Vec<Load>> {
    let mut loads = vec![0; inst.n_workers()];
    for (t, &w) in assignment.iter().enumerate() {
        if w >= inst.n_workers() {
            return None;
        }
        loads[w] += inst.time(t, w)? as Load;
    }
    Some(loads)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("worker order is not a permutation of the workers")]
    BadWorkerOrder,
    #[error("assignment covers {got} tasks, expected {expected}")]
    BadAssignmentLength { got: usize, expected: usize },
    #[error("task {task} assigned to worker {worker}, which cannot execute it")]
    Infeasible { task: usize, worker: usize },
    #[error("task {before} must not be at a later station than task {after}")]
    Precedence { before: usize, after: usize },
    #[error("recorded cycle time {recorded} differs from the maximum load {actual}")]
    CycleTime { recorded: Load, actual: Load },
}

/// Independent check of every `Solution` invariant.
pub fn check_solution(inst: &Instance, sol: &Solution) -> Result<(), SolutionError> {
    let n_workers = inst.n_workers();
    let mut seen = vec![false; n_workers];
    if sol.worker_order.len() != n_workers {
        return Err(SolutionError::BadWorkerOrder);
    }
    for &w in &sol.worker_order {
        if w >= n_workers || seen[w] {
            return Err(SolutionError::BadWorkerOrder);
        }
        seen[w] = true;
    }
    if sol.assignment.len() != inst.n_tasks() {
        return Err(SolutionError::BadAssignmentLength {
            got: sol.assignment.len(),
            expected: inst.n_tasks(),
        });
    }
    let mut loads = vec![0 as Load; n_workers];
    for (task, &worker) in sol.assignment.iter().enumerate() {
        match inst.time(task, worker) {
            Some(p) if worker < n_workers => loads[worker] += p as Load,
            _ => return Err(SolutionError::Infeasible { task, worker }),
        }
    }
    let station = sol.station_of_worker();
    for &(before, after) in inst.closure() {
        if station[sol.assignment[before]] > station[sol.assignment[after]] {
            return Err(SolutionError::Precedence { before, after });
        }
    }
    let actual = loads.into_iter().max().unwrap_or(0);
    if actual != sol.cycle_time {
        return Err(SolutionError::CycleTime {
            recorded: sol.cycle_time,
            actual,
        });
    }
    Ok(())
}
