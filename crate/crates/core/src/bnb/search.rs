//! Depth-first task-oriented branch-and-bound.

use std::time::{Duration, Instant};

use serde::Serialize;

use super::reduce::{apply_reduction_rules, Reduction};
use super::state::SearchState;
use crate::bounds::rcmax::{self, Iterations, TimeMatrix};
use crate::bounds::salbp::{lc1_of, lc2_of, lc3_of};
use crate::bounds::{all_bounds, BoundReport, BoundsConfig};
use crate::heuristic::{ipbs, IpbsParams};
use crate::instance::{check_solution, Instance, Load, Solution, Time};

const POLL_INTERVAL: u64 = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct BnbConfig {
    /// Wall-clock budget for the whole run, heuristic included.
    pub time_limit: Option<Duration>,
    pub seed: u64,
    /// Run the interval search for an initial incumbent.
    pub heuristic: bool,
    /// Apply reduction rules after each branching decision.
    pub reductions: bool,
    pub root_bounds: BoundsConfig,
    pub node_iterations: Iterations,
    /// Heuristic settings; `None` uses the defaults with no minimum search
    /// time and at most `|T|·|W|/10` seconds.
    pub heuristic_params: Option<IpbsParams>,
    /// A known solution to start from.
    pub warm_start: Option<Solution>,
}

impl Default for BnbConfig {
    fn default() -> Self {
        let root_bounds = BoundsConfig::root();
        Self {
            time_limit: None,
            seed: 42,
            heuristic: true,
            reductions: true,
            node_iterations: root_bounds.iterations(),
            root_bounds,
            heuristic_params: None,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BnbStatus {
    Optimal,
    FeasibleTimeLimit,
    Infeasible,
    /// Time limit reached before any solution was found.
    Unknown,
}

impl BnbStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BnbStatus::Optimal => "optimal",
            BnbStatus::FeasibleTimeLimit => "feasible_time_limit",
            BnbStatus::Infeasible => "infeasible",
            BnbStatus::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BnbResult {
    pub solution: Option<Solution>,
    pub value: Option<Load>,
    pub status: BnbStatus,
    pub nodes: u64,
    pub elapsed: Duration,
    pub root_bounds: BoundReport,
    /// Value of the heuristic incumbent, if it found one.
    pub heuristic_value: Option<Load>,
}

/// `max(max load, ceil((Σ loads + Σ unassigned p⁻) / |S|))` with the
/// minima taken over effective times.
struct PartialLc1 {
    max_load: Load,
    total: Load,
    mins: Vec<Option<Time>>,
    stations: Load,
}

impl PartialLc1 {
    fn new(state: &SearchState<'_>) -> Self {
        let mut out = Self {
            max_load: state.loads().iter().copied().max().unwrap_or(0),
            total: state.loads().iter().sum(),
            mins: vec![None; state.instance().n_tasks()],
            stations: state.instance().n_stations() as Load,
        };
        for t in state.unassigned() {
            out.mins[t] = state.effective_min(t);
            out.total += out.mins[t].unwrap_or(0) as Load;
        }
        out
    }

    fn value(&self) -> Load {
        self.max_load.max(self.total.div_ceil(self.stations))
    }

    /// Value after adding `task` (currently unassigned) to a worker with
    /// load `load` at time `p`.
    fn after(&self, task: usize, load: Load, p: Time) -> Load {
        let p = p as Load;
        let total = self.total + p - self.mins[task].unwrap_or(0) as Load;
        self.max_load.max(load + p).max(total.div_ceil(self.stations))
    }
}

/// Task with the most infeasible workers, then the largest smallest
/// partial LC1 over its other workers, then the smallest index. `None` if
/// some task has no feasible worker left.
pub fn select_branch_task(state: &SearchState<'_>, gub: Load) -> Option<usize> {
    let lc1 = PartialLc1::new(state);
    let mut best: Option<(usize, Load, usize)> = None;
    for t in state.unassigned() {
        let mut infeasible = 0;
        let mut task_bound = Load::MAX;
        for w in 0..state.loads().len() {
            let bound = state
                .effective_time(t, w)
                .filter(|_| !state.creates_immediate_cycle(t, w))
                .map(|p| lc1.after(t, state.load(w), p))
                .filter(|&b| b < gub);
            match bound {
                Some(b) => task_bound = task_bound.min(b),
                None => infeasible += 1,
            }
        }
        if task_bound == Load::MAX {
            return None;
        }
        let better = match best {
            None => true,
            Some((i, b, _)) => infeasible > i || (infeasible == i && task_bound > b),
        };
        if better {
            best = Some((infeasible, task_bound, t));
        }
    }
    best.map(|(_, _, t)| t)
}

struct Search<'a, 'b> {
    state: SearchState<'a>,
    config: &'b BnbConfig,
    gub: Load,
    incumbent: Option<Solution>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search<'_, '_> {
    fn node_bound(&self, llb: Load) -> Load {
        let state = &self.state;
        let inst = state.instance();
        let lc1 = PartialLc1::new(state);
        if state.unassigned().any(|t| lc1.mins[t].is_none()) {
            return Load::MAX;
        }
        let mut bound = llb.max(lc1.value());
        if bound >= self.gub {
            return bound;
        }
        let mins: Vec<Time> = (0..inst.n_tasks())
            .map(|t| match state.worker_of(t) {
                Some(w) => inst.time(t, w).unwrap(),
                None => lc1.mins[t].unwrap(),
            })
            .collect();
        bound = bound
            .max(lc1_of(&mins, inst.n_stations()))
            .max(lc2_of(&mins, inst.n_stations()));
        if bound >= self.gub {
            return bound;
        }
        bound = bound.max(lc3_of(inst, &mins));
        if bound >= self.gub {
            return bound;
        }
        let mut cells = Vec::with_capacity(inst.n_tasks() * inst.n_workers());
        for t in 0..inst.n_tasks() {
            cells.extend((0..inst.n_workers()).map(|w| state.effective_time(t, w)));
        }
        let matrix = TimeMatrix::new(inst.n_tasks(), inst.n_workers(), cells);
        bound.max(rcmax::l1a_bar_below(
            &matrix,
            bound,
            self.gub,
            self.config.node_iterations,
        ))
    }

    fn branch(&mut self, llb: Load) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(POLL_INTERVAL) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        if self.timed_out {
            return;
        }
        if self.state.is_complete() {
            let sol = self.state.to_solution();
            if sol.cycle_time < self.gub {
                self.gub = sol.cycle_time;
                self.incumbent = Some(sol);
            }
            return;
        }
        let Some(task) = select_branch_task(&self.state, self.gub) else {
            return;
        };
        let lc1 = PartialLc1::new(&self.state);
        let mut workers: Vec<(Load, usize)> = (0..self.state.loads().len())
            .filter_map(|w| {
                let p = self.state.effective_time(task, w)?;
                self.state
                    .assignment_is_valid(task, w)
                    .then(|| (lc1.after(task, self.state.load(w), p), w))
            })
            .collect();
        workers.sort_unstable();
        for (first_bound, w) in workers {
            if first_bound >= self.gub || llb >= self.gub {
                break;
            }
            let mark = self.state.trail_len();
            self.state.set_assignment(task, w);
            let alive = !self.config.reductions
                || apply_reduction_rules(&mut self.state, task, w, self.gub) == Reduction::Alive;
            if alive {
                let bound = self.node_bound(llb);
                if bound < self.gub {
                    self.branch(bound);
                }
            }
            self.state.undo_to(mark);
            if self.timed_out {
                return;
            }
        }
    }
}

fn default_heuristic_params(inst: &Instance, config: &BnbConfig) -> IpbsParams {
    let budget = Duration::from_secs_f64((inst.n_tasks() * inst.n_workers()) as f64 / 10.0);
    IpbsParams {
        t_min: Duration::ZERO,
        t_max: config.time_limit.map_or(budget, |limit| limit.min(budget)),
        seed: config.seed,
        ..IpbsParams::default()
    }
}

pub fn branch_and_bound(inst: &Instance, config: &BnbConfig) -> BnbResult {
    let start = Instant::now();
    let deadline = config.time_limit.map(|d| start + d);
    let root_bounds = all_bounds(inst, &config.root_bounds);
    let root_lb = root_bounds.best;

    let mut incumbent: Option<Solution> = None;
    let mut heuristic_value = None;
    if config.heuristic {
        let mut params = config
            .heuristic_params
            .clone()
            .unwrap_or_else(|| default_heuristic_params(inst, config));
        params.lower_bound = Some(params.lower_bound.map_or(root_lb, |b| b.max(root_lb)));
        if let Ok(out) = ipbs(inst, &params) {
            heuristic_value = Some(out.solution.cycle_time);
            incumbent = Some(out.solution);
        }
    }
    if let Some(ws) = &config.warm_start {
        let better = incumbent.as_ref().is_none_or(|s| ws.cycle_time < s.cycle_time);
        if better && check_solution(inst, ws).is_ok() {
            incumbent = Some(ws.clone());
        }
    }

    let mut search = Search {
        state: SearchState::new(inst),
        config,
        gub: incumbent.as_ref().map_or(Load::MAX, |s| s.cycle_time),
        incumbent,
        nodes: 0,
        deadline,
        timed_out: deadline.is_some_and(|d| Instant::now() >= d),
    };
    if search.gub > root_lb && !search.timed_out {
        search.branch(root_lb);
    }
    debug_assert_eq!(search.state.trail_len(), 0);

    let status = match (&search.incumbent, search.timed_out) {
        (Some(s), true) if s.cycle_time > root_lb => BnbStatus::FeasibleTimeLimit,
        (Some(_), _) => BnbStatus::Optimal,
        (None, true) => BnbStatus::Unknown,
        (None, false) => BnbStatus::Infeasible,
    };
    BnbResult {
        value: search.incumbent.as_ref().map(|s| s.cycle_time),
        solution: search.incumbent,
        status,
        nodes: search.nodes,
        elapsed: start.elapsed(),
        root_bounds,
        heuristic_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::{fig1, single};

    #[test]
    fn fig1_is_six() {
        let inst = fig1();
        let start = Instant::now();
        let res = branch_and_bound(&inst, &BnbConfig::default());
        assert_eq!(res.value, Some(6));
        assert_eq!(res.status, BnbStatus::Optimal);
        check_solution(&inst, res.solution.as_ref().unwrap()).unwrap();
        assert!(start.elapsed() < Duration::from_secs(1));
    }

    #[test]
    fn fig1_without_heuristic_or_rules() {
        let inst = fig1();
        for reductions in [true, false] {
            let config = BnbConfig {
                heuristic: false,
                reductions,
                ..BnbConfig::default()
            };
            let res = branch_and_bound(&inst, &config);
            assert_eq!(res.value, Some(6));
            assert_eq!(res.status, BnbStatus::Optimal);
        }
    }

    #[test]
    fn single_closes_at_root() {
        let res = branch_and_bound(&single(), &BnbConfig::default());
        assert_eq!(res.value, Some(7));
        assert_eq!(res.status, BnbStatus::Optimal);
        assert_eq!(res.nodes, 0);
    }

    #[test]
    fn contradictory_instance_is_infeasible() {
        let inst = Instance::new(
            3,
            2,
            vec![Some(1), None, None, Some(1), Some(1), None],
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        let res = branch_and_bound(&inst, &BnbConfig::default());
        assert_eq!(res.status, BnbStatus::Infeasible);
        assert_eq!(res.value, None);
    }

    #[test]
    fn branch_task_rule_matches_reference() {
        let inst = fig1();
        let state = SearchState::new(&inst);
        // transparent restatement: count workers with p = inf or bound >= gub,
        // then the largest smallest bound, then the lowest index
        let gub = 7;
        let mins = inst.min_times();
        let sum: Load = mins.iter().map(|&p| p as Load).sum();
        let mut rows = Vec::new();
        for t in 0..inst.n_tasks() {
            let bounds: Vec<Load> = (0..3)
                .filter_map(|w| inst.time(t, w))
                .map(|p| {
                    let total = sum - mins[t] as Load + p as Load;
                    (p as Load).max(total.div_ceil(3))
                })
                .filter(|&b| b < gub)
                .collect();
            rows.push((3 - bounds.len(), *bounds.iter().min().unwrap(), t));
        }
        let expected = rows
            .iter()
            .max_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(b.2.cmp(&a.2)))
            .unwrap()
            .2;
        assert_eq!(select_branch_task(&state, gub), Some(expected));
    }

    #[test]
    fn unique_most_constrained_task_wins() {
        // task 2 is feasible on one worker only
        let inst = Instance::new(
            3,
            3,
            vec![
                Some(1),
                Some(1),
                Some(1),
                Some(1),
                None,
                None,
                Some(1),
                Some(1),
                Some(1),
            ],
            &[],
        )
        .unwrap();
        let state = SearchState::new(&inst);
        assert_eq!(select_branch_task(&state, 100), Some(1));
        // full tie: lowest index
        let flat = Instance::new(2, 2, vec![Some(1); 4], &[]).unwrap();
        assert_eq!(select_branch_task(&SearchState::new(&flat), 100), Some(0));
    }

    #[test]
    fn time_limit_zero_reports_incumbent() {
        let inst = fig1();
        let config = BnbConfig {
            time_limit: Some(Duration::ZERO),
            heuristic: false,
            ..BnbConfig::default()
        };
        let res = branch_and_bound(&inst, &config);
        assert_eq!(res.status, BnbStatus::Unknown);
        let warm = BnbConfig {
            warm_start: Some(crate::instance::fixtures::fig1_solution(&inst)),
            ..config
        };
        let res = branch_and_bound(&inst, &warm);
        assert_eq!(res.value, Some(6));
    }
}
