//! Mixed-integer models of the problem as LP-format text.
//!
//! Variables: `x_w_t` (task `t` on worker `w`, declared only where the
//! worker can execute the task), `d_v_w` (worker `v` is on an earlier
//! station than `w`) and the free cycle time `C`. All indices are 1-based.
//!
//! The base model bounds every worker load by `C`, assigns each task once
//! and orders workers through the precedence arcs, with transitivity and
//! anti-symmetry on `d`. The strengthened model adds continuity rows: a
//! worker that executes `i` and a later `k` also executes every `j` between
//! them, and cannot execute both `i` and `k` when some `j` between them is
//! infeasible for it.

mod check;
mod lp;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::instance::Instance;

pub use check::{check_solution_against_model, ModelCheck, Violation};
pub use lp::{parse_lp, write_lp, LpSyntaxError, ParsedLp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    M2,
    M3,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::M2 => "m2",
            Variant::M3 => "m3",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A model variable with 0-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X { worker: usize, task: usize },
    D { from: usize, to: usize },
    C,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::X { worker, task } => write!(f, "x_{}_{}", worker + 1, task + 1),
            Var::D { from, to } => write!(f, "d_{}_{}", from + 1, to + 1),
            Var::C => f.write_str("C"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(i64, Var)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    pub variant: Variant,
    pub n_tasks: usize,
    pub n_workers: usize,
    pub rows: Vec<Row>,
    /// Every `x` then every `d` variable.
    pub binaries: Vec<Var>,
}

fn row(name: String, terms: Vec<(i64, Var)>, sense: Sense, rhs: i64) -> Row {
    Row {
        name,
        terms,
        sense,
        rhs,
    }
}

pub fn build_model(inst: &Instance, variant: Variant) -> ModelSpec {
    let (n, m) = (inst.n_tasks(), inst.n_workers());
    let x = |worker, task| Var::X { worker, task };
    let d = |from, to| Var::D { from, to };
    let can = |t: usize, w: usize| inst.time(t, w).is_some();
    let mut rows = Vec::new();

    for w in 0..m {
        let mut terms: Vec<(i64, Var)> = inst
            .feasible_tasks(w)
            .map(|t| (inst.time(t, w).unwrap() as i64, x(w, t)))
            .collect();
        terms.push((-1, Var::C));
        rows.push(row(format!("cyc_{}", w + 1), terms, Sense::Le, 0));
    }
    for t in 0..n {
        let terms = inst.feasible_workers(t).map(|w| (1, x(w, t))).collect();
        rows.push(row(format!("asg_{}", t + 1), terms, Sense::Eq, 1));
    }
    for &(t, t2) in inst.edges() {
        for v in inst.feasible_workers(t) {
            for w in inst.feasible_workers(t2).filter(|&w| w != v) {
                rows.push(row(
                    format!("lnk_{}_{}_{}_{}", t + 1, t2 + 1, v + 1, w + 1),
                    vec![(1, d(v, w)), (-1, x(v, t)), (-1, x(w, t2))],
                    Sense::Ge,
                    -1,
                ));
            }
        }
    }
    for u in 0..m {
        for v in (0..m).filter(|&v| v != u) {
            for w in (0..m).filter(|&w| w != u && w != v) {
                rows.push(row(
                    format!("trn_{}_{}_{}", u + 1, v + 1, w + 1),
                    vec![(1, d(u, w)), (-1, d(u, v)), (-1, d(v, w))],
                    Sense::Ge,
                    -1,
                ));
            }
        }
    }
    for v in 0..m {
        for w in v + 1..m {
            rows.push(row(
                format!("asym_{}_{}", v + 1, w + 1),
                vec![(1, d(v, w)), (1, d(w, v))],
                Sense::Le,
                1,
            ));
        }
    }

    if variant == Variant::M3 {
        for i in 0..n {
            for j in inst.succs_star(i).ones() {
                for k in inst.succs_star(j).ones() {
                    for w in 0..m {
                        let name = |family| format!("{family}_{}_{}_{}_{}", i + 1, j + 1, k + 1, w + 1);
                        match (can(i, w), can(j, w), can(k, w)) {
                            (true, true, true) => rows.push(row(
                                name("cont1"),
                                vec![(1, x(w, j)), (-1, x(w, i)), (-1, x(w, k))],
                                Sense::Ge,
                                -1,
                            )),
                            (true, false, true) => {
                                rows.push(row(name("cont2"), vec![(1, x(w, k)), (1, x(w, i))], Sense::Le, 1))
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
    }

    let mut binaries: Vec<Var> = (0..m)
        .flat_map(|w| inst.feasible_tasks(w).map(move |t| x(w, t)))
        .collect();
    for v in 0..m {
        binaries.extend((0..m).filter(|&w| w != v).map(|w| d(v, w)));
    }
    ModelSpec {
        variant,
        n_tasks: n,
        n_workers: m,
        rows,
        binaries,
    }
}

/// LP text of the model for `inst`.
pub fn emit_model(inst: &Instance, variant: Variant) -> String {
    write_lp(&build_model(inst, variant))
}
