//! Evaluates a concrete solution against every row of a model.

use std::fmt;

use super::{build_model, Sense, Var, Variant};
use crate::instance::{Instance, Solution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub row: String,
    pub lhs: i64,
    pub sense: Sense,
    pub rhs: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {} {}", self.row, self.lhs, self.sense.symbol(), self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelCheck {
    pub rows_checked: usize,
    pub violations: Vec<Violation>,
    /// Assignments to a worker that cannot execute the task; the model has
    /// no variable for them.
    pub undeclared: Vec<String>,
}

impl ModelCheck {
    pub fn is_satisfied(&self) -> bool {
        self.violations.is_empty() && self.undeclared.is_empty()
    }
}

/// Sets `x` from the assignment, `d_v_w = 1` iff `v` stands on an earlier
/// station than `w`, and `C` to the solution's cycle time.
pub fn check_solution_against_model(inst: &Instance, variant: Variant, sol: &Solution) -> ModelCheck {
    let model = build_model(inst, variant);
    let station = sol.station_of_worker();
    let value = |var: Var| -> i64 {
        match var {
            Var::X { worker, task } => (sol.assignment[task] == worker) as i64,
            Var::D { from, to } => (station[from] < station[to]) as i64,
            Var::C => sol.cycle_time as i64,
        }
    };
    let undeclared = sol
        .assignment
        .iter()
        .enumerate()
        .filter(|&(t, &w)| inst.time(t, w).is_none())
        .map(|(t, &w)| Var::X { worker: w, task: t }.to_string())
        .collect();
    let violations = model
        .rows
        .iter()
        .filter_map(|row| {
            let lhs = row.terms.iter().map(|&(c, v)| c * value(v)).sum();
            (!row.sense.holds(lhs, row.rhs)).then(|| Violation {
                row: row.name.clone(),
                lhs,
                sense: row.sense,
                rhs: row.rhs,
            })
        })
        .collect();
    ModelCheck {
        rows_checked: model.rows.len(),
        violations,
        undeclared,
    }
}
