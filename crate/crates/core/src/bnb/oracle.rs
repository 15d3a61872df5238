//! Exhaustive reference solver for tiny instances.

use thiserror::Error;

use crate::instance::{Instance, Load, Solution};

/// Largest `|W|^|T| · |W|!` the oracle accepts.
pub const ORACLE_LIMIT: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance too large for exhaustive search ({0:.3e} combinations)")]
    TooLarge(f64),
}

/// Optimal cycle time by enumerating every worker order and every
/// assignment consistent with it. `None` if the instance is infeasible.
pub fn brute_force_optimal(inst: &Instance) -> Result<Option<Load>, OracleError> {
    Ok(brute_force_solution(inst)?.map(|s| s.cycle_time))
}

pub fn brute_force_solution(inst: &Instance) -> Result<Option<Solution>, OracleError> {
    let (n, w) = (inst.n_tasks(), inst.n_workers());
    let factorial: f64 = (1..=w).map(|k| k as f64).product();
    let size = (w as f64).powi(n as i32) * factorial;
    if size > ORACLE_LIMIT {
        return Err(OracleError::TooLarge(size));
    }

    let mut order: Vec<usize> = (0..w).collect();
    let mut best: Option<Solution> = None;
    loop {
        let mut position = vec![0; w];
        for (s, &worker) in order.iter().enumerate() {
            position[worker] = s;
        }
        let mut dfs = Dfs {
            inst,
            position: &position,
            station: vec![0; n],
            worker: vec![0; n],
            loads: vec![0; w],
            best: best.as_ref().map_or(Load::MAX, |s| s.cycle_time),
            found: None,
        };
        dfs.run(0);
        if let Some(assignment) = dfs.found {
            best = Solution::new(inst, order.clone(), assignment);
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(best)
}

struct Dfs<'a> {
    inst: &'a Instance,
    position: &'a [usize],
    station: Vec<usize>,
    worker: Vec<usize>,
    loads: Vec<Load>,
    best: Load,
    found: Option<Vec<usize>>,
}

impl Dfs<'_> {
    fn run(&mut self, t: usize) {
        let n = self.inst.n_tasks();
        if t == n {
            let value = self.loads.iter().copied().max().unwrap_or(0);
            if value < self.best {
                self.best = value;
                self.found = Some(self.worker.clone());
            }
            return;
        }
        for w in 0..self.loads.len() {
            let Some(p) = self.inst.time(t, w) else {
                continue;
            };
            let s = self.position[w];
            let consistent = (0..t).all(|u| {
                let su = self.station[u];
                !(self.inst.preds_star(t).contains(u) && su > s || self.inst.succs_star(t).contains(u) && su < s)
            });
            if !consistent || self.loads[w] + p as Load >= self.best {
                continue;
            }
            self.station[t] = s;
            self.worker[t] = w;
            self.loads[w] += p as Load;
            self.run(t + 1);
            self.loads[w] -= p as Load;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::check_solution;
    use crate::instance::fixtures::{fig1, single};

    #[test]
    fn fig1_optimum() {
        let inst = fig1();
        let sol = brute_force_solution(&inst).unwrap().unwrap();
        assert_eq!(sol.cycle_time, 6);
        check_solution(&inst, &sol).unwrap();
        assert_eq!(brute_force_optimal(&single()).unwrap(), Some(7));
    }

    #[test]
    fn fig1_with_t1_on_w1() {
        // forcing t1 onto w1 by making every other worker unable to run it
        let fig = fig1();
        let mut cells = Vec::new();
        for t in 0..fig.n_tasks() {
            for w in 0..fig.n_workers() {
                cells.push(if t == 0 && w != 0 { None } else { fig.time(t, w) });
            }
        }
        let edges: Vec<(usize, usize)> = fig.edges().to_vec();
        let inst = Instance::new(fig.n_tasks(), fig.n_workers(), cells, &edges).unwrap();
        let sol = brute_force_solution(&inst).unwrap().unwrap();
        check_solution(&inst, &sol).unwrap();
        assert_eq!(sol.assignment[0], 0);
        assert!(sol.cycle_time >= 6);
    }

    #[test]
    fn permutations_are_all_visited() {
        let mut v = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn refuses_large_instances() {
        let inst = Instance::new(20, 5, vec![Some(1); 100], &[]).unwrap();
        assert!(matches!(brute_force_optimal(&inst), Err(OracleError::TooLarge(_))));
    }
}
