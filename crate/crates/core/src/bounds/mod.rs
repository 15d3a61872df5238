//! Lower bounds on the optimal cycle time.
//!
//! `LC1`, `LC2` and `LC3` relax every task time to its minimum over workers
//! and reuse the single-worker line bounds. The `L*` family drops
//! precedences and station order, leaving a scheduling problem on unrelated
//! parallel machines (see [`rcmax`]).

pub mod knapsack;
pub mod rcmax;
pub mod salbp;

use std::time::Instant;

use serde::Serialize;

use crate::instance::{Instance, Load};
pub use rcmax::{Family, Iterations, TimeMatrix};
pub use salbp::{lc1, lc2, lc3, station_windows, StationWindow};

pub const DEFAULT_L1_ITERS: usize = 50;
pub const DEFAULT_L2_ITERS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundKind {
    #[serde(rename = "LC1")]
    Lc1,
    #[serde(rename = "LC2")]
    Lc2,
    #[serde(rename = "LC3")]
    Lc3,
    L1,
    L1a,
    #[serde(rename = "L1a_bar")]
    L1aBar,
    L2,
    #[serde(rename = "L2_bar")]
    L2Bar,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::Lc1,
        BoundKind::Lc2,
        BoundKind::Lc3,
        BoundKind::L1,
        BoundKind::L1a,
        BoundKind::L1aBar,
        BoundKind::L2,
        BoundKind::L2Bar,
    ];

    /// The set evaluated at the root of the branch-and-bound.
    pub const ROOT: [BoundKind; 5] = [
        BoundKind::Lc1,
        BoundKind::Lc2,
        BoundKind::Lc3,
        BoundKind::L1aBar,
        BoundKind::L2Bar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Lc1 => "LC1",
            BoundKind::Lc2 => "LC2",
            BoundKind::Lc3 => "LC3",
            BoundKind::L1 => "L1",
            BoundKind::L1a => "L1a",
            BoundKind::L1aBar => "L1a_bar",
            BoundKind::L2 => "L2",
            BoundKind::L2Bar => "L2_bar",
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsConfig {
    pub kinds: Vec<BoundKind>,
    pub l1_iters: usize,
    pub l2_iters: usize,
}

impl BoundsConfig {
    pub fn all() -> Self {
        Self {
            kinds: BoundKind::ALL.to_vec(),
            ..Self::root()
        }
    }

    pub fn root() -> Self {
        Self {
            kinds: BoundKind::ROOT.to_vec(),
            l1_iters: DEFAULT_L1_ITERS,
            l2_iters: DEFAULT_L2_ITERS,
        }
    }

    pub fn iterations(&self) -> Iterations {
        Iterations {
            l1: self.l1_iters,
            l2: self.l2_iters,
        }
    }
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self::all()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: BoundKind,
    pub value: Load,
    /// Seconds spent on this entry alone; prerequisites are charged to the
    /// entry that first needed them.
    pub elapsed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
    pub best: Load,
}

impl BoundReport {
    pub fn get(&self, kind: BoundKind) -> Option<Load> {
        self.entries.iter().find(|e| e.name == kind).map(|e| e.value)
    }
}

fn matrix_of(inst: &Instance) -> TimeMatrix {
    TimeMatrix::from_instance(inst).canonical()
}

pub fn bound_l1(inst: &Instance, max_iters: usize) -> Load {
    rcmax::lagrangian_l1(&matrix_of(inst), max_iters).bound
}

/// Additive improvement of a valid bound `l1`, using the multipliers of a
/// default-length ascent.
pub fn improve_l1_additive(inst: &Instance, l1: Load) -> Load {
    let m = matrix_of(inst);
    let outcome = rcmax::lagrangian_l1(&m, DEFAULT_L1_ITERS);
    rcmax::additive_from(&m, &outcome, l1.max(outcome.bound))
}

pub fn disjunction_improve(inst: &Instance, base: Load, which: Family) -> Load {
    let iters = BoundsConfig::root().iterations();
    rcmax::disjunction_from(&matrix_of(inst), base, which, iters)
}

pub fn bound_l2(inst: &Instance, max_iters: usize) -> Load {
    rcmax::lagrangian_l2(&matrix_of(inst), max_iters).bound
}

/// Evaluates every enabled bound in `config.kinds` order.
pub fn all_bounds(inst: &Instance, config: &BoundsConfig) -> BoundReport {
    let m = matrix_of(inst);
    let iters = config.iterations();
    let mut l1: Option<rcmax::L1Outcome> = None;
    let mut l1a: Option<Load> = None;
    let mut l2: Option<Load> = None;
    let mut entries = Vec::with_capacity(config.kinds.len());
    for &kind in &config.kinds {
        let start = Instant::now();
        let l1_outcome =
            |l1: &mut Option<rcmax::L1Outcome>| l1.get_or_insert_with(|| rcmax::lagrangian_l1(&m, iters.l1)).clone();
        let additive = |l1: &mut Option<rcmax::L1Outcome>, l1a: &mut Option<Load>| {
            *l1a.get_or_insert_with(|| {
                let outcome = l1_outcome(l1);
                rcmax::additive_from(&m, &outcome, outcome.bound)
            })
        };
        let l2_value = |l2: &mut Option<Load>| *l2.get_or_insert_with(|| rcmax::lagrangian_l2(&m, iters.l2).bound);
        let value = match kind {
            BoundKind::Lc1 => lc1(inst),
            BoundKind::Lc2 => lc2(inst),
            BoundKind::Lc3 => lc3(inst),
            BoundKind::L1 => l1_outcome(&mut l1).bound,
            BoundKind::L1a => additive(&mut l1, &mut l1a),
            BoundKind::L1aBar => {
                let base = additive(&mut l1, &mut l1a);
                rcmax::disjunction_from(&m, base, Family::L1A, iters)
            }
            BoundKind::L2 => l2_value(&mut l2),
            BoundKind::L2Bar => {
                let base = l2_value(&mut l2);
                rcmax::disjunction_from(&m, base, Family::L2, iters)
            }
        };
        entries.push(BoundEntry {
            name: kind,
            value,
            elapsed: start.elapsed().as_secs_f64(),
        });
    }
    let best = entries.iter().map(|e| e.value).max().unwrap_or(0);
    BoundReport { entries, best }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::{fig1, single};

    #[test]
    fn fig1_report() {
        let report = all_bounds(&fig1(), &BoundsConfig::all());
        assert_eq!(report.entries.len(), 8);
        assert_eq!(report.get(BoundKind::Lc1), Some(5));
        assert_eq!(report.get(BoundKind::Lc2), Some(5));
        assert_eq!(report.get(BoundKind::Lc3), Some(5));
        for kind in [
            BoundKind::L1,
            BoundKind::L1a,
            BoundKind::L1aBar,
            BoundKind::L2,
            BoundKind::L2Bar,
        ] {
            let v = report.get(kind).unwrap();
            assert!((4..=6).contains(&v), "{kind} = {v}");
        }
        assert!((5..=6).contains(&report.best));
        assert_eq!(report.best, report.entries.iter().map(|e| e.value).max().unwrap());
    }

    #[test]
    fn single_report() {
        let inst = single();
        let report = all_bounds(&inst, &BoundsConfig::all());
        assert_eq!(report.best, 7);
        assert_eq!(bound_l1(&inst, 3), 7);
        assert_eq!(improve_l1_additive(&inst, 7), 7);
        assert_eq!(disjunction_improve(&inst, 7, Family::L1A), 7);
        assert_eq!(disjunction_improve(&inst, 1, Family::L2), 7);
        assert_eq!(bound_l2(&inst, 5), 7);
    }

    #[test]
    fn instance_level_ops_on_fig1() {
        let inst = fig1();
        let l1 = bound_l1(&inst, 50);
        assert!((4..=6).contains(&l1));
        let a = improve_l1_additive(&inst, l1);
        assert!((l1..=6).contains(&a));
        assert!(disjunction_improve(&inst, a, Family::L1A) <= 6);
        assert!(disjunction_improve(&inst, 1, Family::L2) <= 6);
        assert!((1..=6).contains(&bound_l2(&inst, 20)));
        assert_eq!(bound_l2(&inst, 20), bound_l2(&inst, 20));
    }

    #[test]
    fn root_config_order() {
        let report = all_bounds(&fig1(), &BoundsConfig::root());
        let names: Vec<_> = report.entries.iter().map(|e| e.name.name()).collect();
        assert_eq!(names, ["LC1", "LC2", "LC3", "L1a_bar", "L2_bar"]);
    }

    mod props {
        use super::*;
        use crate::instance::generator::{generate_instance, random_base, Variability};
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn best_invariant_under_worker_permutation(
                n in 2usize..9, w in 2usize..4, seed in any::<u64>(), rot in 1usize..3
            ) {
                let (times, edges) = random_base(n, 0.3, 12, seed);
                let inst = generate_instance(&times, &edges, w, Variability::High, 0.1, seed).unwrap();
                let perm: Vec<usize> = (0..w).map(|i| (i + rot) % w).collect();
                let a = all_bounds(&inst, &BoundsConfig::all());
                let b = all_bounds(&inst.with_worker_permutation(&perm), &BoundsConfig::all());
                let values = |r: &BoundReport| r.entries.iter().map(|e| e.value).collect::<Vec<_>>();
                prop_assert_eq!(values(&a), values(&b));
                prop_assert_eq!(a.best, b.best);
            }
        }
    }
}
