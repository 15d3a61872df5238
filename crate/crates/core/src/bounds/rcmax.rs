//! Bounds from the unrelated-parallel-machines relaxation: drop precedences
//! and station order, keep the worker-dependent times.
//!
//! Three families are provided:
//!
//! * `lagrangian_l1` dualizes the makespan rows. With multipliers `λ` on the
//!   simplex, `Σ_j min_i λ_i p_ij` is a lower bound; `λ` is improved by
//!   projected supergradient ascent.
//! * `additive_from` prices moving a job off its cheapest machine (second
//!   smallest reduced cost) and asks, per machine, how much of that price a
//!   capacity-`C` knapsack can avoid.
//! * `lagrangian_l2` dualizes the assignment rows: with profits `u`, a
//!   makespan `C` is impossible when the per-machine knapsacks cannot collect
//!   `Σ u`.
//!
//! `disjunction_from` tightens either family: at a trial `C`, every cell with
//! `p_ij > C` is dropped, jobs too big to share a machine must be matched to
//! distinct machines, and the family bound is recomputed on what is left.

use super::knapsack::{Item, KnapsackTable};
use crate::instance::{Instance, Load, Time};

/// Jobs × machines time matrix; `None` marks a forbidden cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeMatrix {
    n_jobs: usize,
    n_machines: usize,
    cells: Vec<Option<Time>>,
}

impl TimeMatrix {
    /// `cells` is row-major by job.
    pub fn new(n_jobs: usize, n_machines: usize, cells: Vec<Option<Time>>) -> Self {
        assert_eq!(cells.len(), n_jobs * n_machines);
        Self {
            n_jobs,
            n_machines,
            cells,
        }
    }

    pub fn from_instance(inst: &Instance) -> Self {
        Self::new(inst.n_tasks(), inst.n_workers(), inst.times().to_vec())
    }

    pub fn n_jobs(&self) -> usize {
        self.n_jobs
    }

    pub fn n_machines(&self) -> usize {
        self.n_machines
    }

    #[inline]
    pub fn time(&self, job: usize, machine: usize) -> Option<Time> {
        self.cells[job * self.n_machines + machine]
    }

    /// `None` if some job has no allowed machine.
    pub fn min_times(&self) -> Option<Vec<Time>> {
        (0..self.n_jobs)
            .map(|j| (0..self.n_machines).filter_map(|i| self.time(j, i)).min())
            .collect()
    }

    /// Columns sorted lexicographically (forbidden cells last). Relabelled
    /// machines give the same canonical matrix, so every tie-break below
    /// becomes label independent.
    pub fn canonical(&self) -> Self {
        let column = |i: usize| -> Vec<(bool, Time)> {
            (0..self.n_jobs)
                .map(|j| match self.time(j, i) {
                    Some(p) => (false, p),
                    None => (true, 0),
                })
                .collect()
        };
        let mut order: Vec<usize> = (0..self.n_machines).collect();
        order.sort_by_cached_key(|&i| column(i));
        let mut cells = Vec::with_capacity(self.cells.len());
        for j in 0..self.n_jobs {
            cells.extend(order.iter().map(|&i| self.time(j, i)));
        }
        Self::new(self.n_jobs, self.n_machines, cells)
    }

    /// Copy without the cells longer than `cap`.
    pub fn restricted(&self, cap: Load) -> Self {
        let cells = self.cells.iter().map(|&p| p.filter(|&p| p as Load <= cap)).collect();
        Self::new(self.n_jobs, self.n_machines, cells)
    }
}

fn sum_max(mins: &[Time]) -> (Load, Load) {
    let sum = mins.iter().map(|&p| p as Load).sum();
    let max = mins.iter().copied().max().unwrap_or(0) as Load;
    (sum, max)
}

fn floor_bound(value: f64) -> Load {
    (value - 1e-9 * value.abs().max(1.0)).ceil().max(0.0) as Load
}

#[derive(Debug, Clone)]
pub struct L1Outcome {
    /// `max(ceil(value), max_j p⁻_j)`.
    pub bound: Load,
    /// Best Lagrangian value found.
    pub value: f64,
    /// Multipliers achieving `value`, summing to one.
    pub multipliers: Vec<f64>,
    /// Running bound after the initial evaluation and after each iteration.
    pub history: Vec<Load>,
}

/// Lagrangian value at `lambda` (normalized internally) and its supergradient.
fn evaluate_l1(m: &TimeMatrix, lambda: &[f64]) -> (f64, Vec<f64>) {
    let norm: f64 = lambda.iter().sum();
    let mut value = 0.0;
    let mut grad = vec![0.0; m.n_machines];
    for j in 0..m.n_jobs {
        let mut best: Option<(f64, usize, Time)> = None;
        for i in 0..m.n_machines {
            if let Some(p) = m.time(j, i) {
                let c = lambda[i] / norm * p as f64;
                if best.is_none_or(|(b, _, _)| c < b) {
                    best = Some((c, i, p));
                }
            }
        }
        let (c, i, p) = best.expect("every job needs an allowed machine");
        value += c;
        grad[i] += p as f64;
    }
    (value, grad)
}

/// Euclidean projection onto the probability simplex (sort-based).
fn project_simplex(v: &mut [f64]) {
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if x - candidate > 0.0 {
            shift = candidate;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - shift).max(0.0);
    }
}

/// Makespan of longest-first list scheduling, used as the ascent target.
fn greedy_makespan(m: &TimeMatrix, mins: &[Time]) -> Load {
    let mut order: Vec<usize> = (0..m.n_jobs).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(mins[j]));
    let mut loads = vec![0 as Load; m.n_machines];
    for j in order {
        let i = (0..m.n_machines)
            .filter_map(|i| m.time(j, i).map(|p| (loads[i] + p as Load, i)))
            .min()
            .map(|(_, i)| i)
            .expect("every job needs an allowed machine");
        loads[i] += m.time(j, i).unwrap() as Load;
    }
    loads.into_iter().max().unwrap_or(0)
}

/// Every job must have an allowed machine.
pub fn lagrangian_l1(m: &TimeMatrix, max_iters: usize) -> L1Outcome {
    let mins = m.min_times().expect("every job needs an allowed machine");
    let (_, max_min) = sum_max(&mins);
    let bound_of = |value: f64| floor_bound(value).max(max_min);
    let target = greedy_makespan(m, &mins) as f64;

    let mut lambda = vec![1.0 / m.n_machines as f64; m.n_machines];
    let (mut value, mut grad) = evaluate_l1(m, &lambda);
    let mut best = (value, lambda.clone());
    let mut history = vec![bound_of(value)];
    let mut theta = 1.0;
    let mut stalled = 0;
    for _ in 0..max_iters {
        let mean = grad.iter().sum::<f64>() / grad.len() as f64;
        let norm2: f64 = grad.iter().map(|g| (g - mean) * (g - mean)).sum();
        let gap = target - value;
        if norm2 < 1e-12 || gap <= 1e-9 || theta < 1e-6 {
            break;
        }
        let step = theta * gap / norm2;
        for (l, g) in lambda.iter_mut().zip(&grad) {
            *l += step * (g - mean);
        }
        project_simplex(&mut lambda);
        (value, grad) = evaluate_l1(m, &lambda);
        if value > best.0 + 1e-12 {
            best = (value, lambda.clone());
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 2 {
                theta /= 2.0;
                stalled = 0;
            }
        }
        history.push(bound_of(best.0));
    }
    let (value, multipliers) = best;
    let norm: f64 = multipliers.iter().sum();
    L1Outcome {
        bound: bound_of(value),
        value,
        multipliers: multipliers.iter().map(|l| l / norm).collect(),
        history,
    }
}

/// A makespan `C` is impossible when
/// `value + Σ_i (Σ_{j ∈ J_i} δ_j − KP_i(C)) > C`, where `J_i` are the jobs
/// whose cheapest reduced cost is on machine `i`, `δ_j` the extra cost of
/// the second cheapest machine and `KP_i` the knapsack of `J_i` with weights
/// `p_ij` and profits `δ_j`. Returns the smallest `C ≥ lo` not ruled out.
pub fn additive_from(m: &TimeMatrix, l1: &L1Outcome, lo: Load) -> Load {
    let mins = m.min_times().expect("every job needs an allowed machine");
    let (hi, max_min) = sum_max(&mins);
    let lo = lo.max(max_min).max(1);
    if lo >= hi {
        return lo;
    }
    let lambda = &l1.multipliers;
    let cap = hi as f64 + 1.0;
    let mut items: Vec<Vec<Item>> = vec![Vec::new(); m.n_machines];
    let mut value = 0.0;
    for j in 0..m.n_jobs {
        let mut first: Option<(f64, usize)> = None;
        let mut second = f64::INFINITY;
        for i in 0..m.n_machines {
            if let Some(p) = m.time(j, i) {
                let c = lambda[i] * p as f64;
                match first {
                    Some((b, _)) if c >= b => second = second.min(c),
                    _ => {
                        if let Some((b, _)) = first {
                            second = second.min(b);
                        }
                        first = Some((c, i));
                    }
                }
            }
        }
        let (c, i) = first.unwrap();
        value += c;
        items[i].push(Item {
            id: j,
            weight: m.time(j, i).unwrap() as u64,
            profit: (second - c).min(cap),
        });
    }
    let tables: Vec<KnapsackTable> = items.iter().map(|it| KnapsackTable::solve(it, hi)).collect();
    let totals: Vec<f64> = items.iter().map(|it| it.iter().map(|x| x.profit).sum()).collect();
    let ruled_out = |c: Load| {
        let penalty: f64 = tables
            .iter()
            .zip(&totals)
            .map(|(t, total)| (total - t.best(c)).max(0.0))
            .sum();
        value + penalty > c as f64 + 1e-7 * (c as f64).max(1.0)
    };
    let (mut lo, mut hi) = (lo, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ruled_out(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone)]
pub struct L2Outcome {
    pub bound: Load,
    /// Bound of each iteration's profits (not the running best).
    pub history: Vec<Load>,
}

/// Every job must have an allowed machine.
pub fn lagrangian_l2(m: &TimeMatrix, max_iters: usize) -> L2Outcome {
    let mins = m.min_times().expect("every job needs an allowed machine");
    let (hi, max_min) = sum_max(&mins);
    let floor = max_min.max(1);
    let mut out = L2Outcome {
        bound: floor,
        history: Vec::new(),
    };
    if floor >= hi {
        out.bound = floor.max(hi);
        return out;
    }
    let mut profits: Vec<f64> = mins.iter().map(|&p| p as f64).collect();
    let mut theta = 1.0;
    let mut stalled = 0;
    for _ in 0..max_iters {
        let tables: Vec<KnapsackTable> = (0..m.n_machines)
            .map(|i| {
                let items: Vec<Item> = (0..m.n_jobs)
                    .filter_map(|j| {
                        m.time(j, i).map(|p| Item {
                            id: j,
                            weight: p as u64,
                            profit: profits[j],
                        })
                    })
                    .collect();
                KnapsackTable::solve(&items, hi)
            })
            .collect();
        let need: f64 = profits.iter().sum();
        let collected = |c: Load| tables.iter().map(|t| t.best(c)).sum::<f64>();
        let covers = |c: Load| collected(c) >= need - 1e-9 * need.max(1.0);
        let (mut lo, mut up) = (floor, hi);
        while lo < up {
            let mid = lo + (up - lo) / 2;
            if covers(mid) {
                up = mid;
            } else {
                lo = mid + 1;
            }
        }
        out.history.push(lo);
        if lo > out.bound {
            out.bound = lo;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 3 {
                theta /= 2.0;
                stalled = 0;
            }
        }
        if lo >= hi {
            break;
        }
        let mut count = vec![0i32; m.n_jobs];
        for t in &tables {
            for j in t.chosen(lo) {
                count[j] += 1;
            }
        }
        let grad: Vec<f64> = count.iter().map(|&c| (1 - c) as f64).collect();
        let norm2: f64 = grad.iter().map(|g| g * g).sum();
        if norm2 == 0.0 {
            // the knapsacks form an assignment: the bound is attained
            break;
        }
        let slack = collected(lo) - need + 0.05 * need / m.n_jobs as f64;
        let step = theta * slack / norm2;
        for (u, g) in profits.iter_mut().zip(&grad) {
            *u = (*u + step * g).max(0.0);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    L1A,
    L2,
}

/// Iteration caps of the Lagrangian ascents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Iterations {
    pub l1: usize,
    pub l2: usize,
}

/// Jobs that cannot share a machine with each other at makespan `c` must
/// go to distinct machines.
fn big_jobs_fit(m: &TimeMatrix, c: Load) -> bool {
    let big: Vec<usize> = (0..m.n_jobs)
        .filter(|&j| (0..m.n_machines).all(|i| m.time(j, i).is_none_or(|p| 2 * p as Load > c)))
        .collect();
    if big.len() > m.n_machines {
        return false;
    }
    let mut owner: Vec<Option<usize>> = vec![None; m.n_machines];
    fn augment(m: &TimeMatrix, j: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for i in 0..m.n_machines {
            if m.time(j, i).is_none() || seen[i] {
                continue;
            }
            seen[i] = true;
            if owner[i].is_none_or(|k| augment(m, k, seen, owner)) {
                owner[i] = Some(j);
                return true;
            }
        }
        false
    }
    big.iter().all(|&j| {
        let mut seen = vec![false; m.n_machines];
        augment(m, j, &mut seen, &mut owner)
    })
}

fn ruled_out(m: &TimeMatrix, c: Load, family: Family, iters: Iterations) -> bool {
    let r = m.restricted(c);
    let Some(mins) = r.min_times() else {
        return true;
    };
    if sum_max(&mins).0 <= c {
        return false;
    }
    if !big_jobs_fit(&r, c) {
        return true;
    }
    match family {
        Family::L1A => {
            let l1 = lagrangian_l1(&r, iters.l1);
            l1.bound > c || additive_from(&r, &l1, l1.bound) > c
        }
        Family::L2 => lagrangian_l2(&r, iters.l2).bound > c,
    }
}

/// Smallest `C ≥ base` found by binary search that the restricted family
/// bound cannot rule out. Every ruled-out `C` is below the optimum, so the
/// result stays valid without monotonicity.
pub fn disjunction_from(m: &TimeMatrix, base: Load, family: Family, iters: Iterations) -> Load {
    disjunction_below(m, base, Load::MAX, family, iters)
}

/// Same search with the range clipped at `cap`; a result of `cap` only
/// means that nothing below it survived.
fn disjunction_below(m: &TimeMatrix, base: Load, cap: Load, family: Family, iters: Iterations) -> Load {
    let Some(mins) = m.min_times() else {
        return base;
    };
    let (mut lo, mut hi) = (base, sum_max(&mins).0.min(cap.max(base)));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ruled_out(m, mid, family, iters) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// L1, its additive improvement, then the disjunction cuts.
pub fn l1a_bar(m: &TimeMatrix, floor: Load, iters: Iterations) -> Load {
    l1a_bar_below(m, floor, Load::MAX, iters)
}

/// `l1a_bar` for callers that only care about values below `cap`: stops
/// early once the bound reaches it.
pub fn l1a_bar_below(m: &TimeMatrix, floor: Load, cap: Load, iters: Iterations) -> Load {
    let l1 = lagrangian_l1(m, iters.l1);
    let additive = additive_from(m, &l1, l1.bound.max(floor));
    if additive >= cap {
        return additive;
    }
    disjunction_below(m, additive, cap, Family::L1A, iters)
}
