//! Bounds from the single-worker relaxation: every task takes its minimum
//! time over the workers able to execute it.
//!
//! The `*_of` variants take the minimum-time vector explicitly so search
//! nodes can evaluate them on reduced time matrices.

use crate::instance::{Instance, Load, Time};

/// Earliest and latest 1-based station of every task for a trial cycle time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationWindow {
    pub earliest: Vec<i64>,
    /// May be below 1 (or below `earliest`) when the window is empty.
    pub latest: Vec<i64>,
}

impl StationWindow {
    pub fn is_feasible(&self) -> bool {
        self.earliest.iter().zip(&self.latest).all(|(e, l)| e <= l)
    }
}

fn div_ceil(a: Load, b: Load) -> Load {
    a.div_ceil(b)
}

pub fn lc1_of(mins: &[Time], n_stations: usize) -> Load {
    let max = mins.iter().copied().max().unwrap_or(0) as Load;
    let sum: Load = mins.iter().map(|&p| p as Load).sum();
    max.max(div_ceil(sum, n_stations.max(1) as Load))
}

pub fn lc2_of(mins: &[Time], n_stations: usize) -> Load {
    let n = mins.len();
    let s = n_stations.max(1);
    if n == 0 {
        return 0;
    }
    let mut sorted: Vec<Load> = mins.iter().map(|&p| p as Load).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    (1..=(n - 1) / s)
        .map(|k| (0..=k).map(|i| sorted[k * s - i]).sum::<Load>())
        .max()
        .unwrap_or(0)
}

/// Per task: sum of minimum times over all predecessors and over all
/// successors.
fn closure_sums(inst: &Instance, mins: &[Time]) -> (Vec<Load>, Vec<Load>) {
    let sum = |set: &fixedbitset::FixedBitSet| set.ones().map(|j| mins[j] as Load).sum::<Load>();
    let n = inst.n_tasks();
    let pred = (0..n).map(|t| sum(inst.preds_star(t))).collect();
    let succ = (0..n).map(|t| sum(inst.succs_star(t))).collect();
    (pred, succ)
}

fn window_of(pred: Load, succ: Load, p: Load, c: Load, n_stations: usize) -> (i64, i64) {
    let earliest = div_ceil(pred + p, c) as i64;
    let latest = n_stations as i64 + 1 - div_ceil(succ + p, c) as i64;
    (earliest, latest)
}

pub fn windows_of(inst: &Instance, mins: &[Time], c: Load) -> StationWindow {
    assert!(c >= 1, "cycle time must be positive");
    let (pred, succ) = closure_sums(inst, mins);
    let (earliest, latest) = (0..inst.n_tasks())
        .map(|t| window_of(pred[t], succ[t], mins[t] as Load, c, inst.n_stations()))
        .unzip();
    StationWindow { earliest, latest }
}

/// Smallest cycle time at which every station window is non-empty.
pub fn lc3_of(inst: &Instance, mins: &[Time]) -> Load {
    let (pred, succ) = closure_sums(inst, mins);
    let total: Load = mins.iter().map(|&p| p as Load).sum();
    let feasible = |c: Load| {
        (0..mins.len()).all(|t| {
            let (e, l) = window_of(pred[t], succ[t], mins[t] as Load, c, inst.n_stations());
            e <= l
        })
    };
    let mut lo = mins.iter().copied().max().unwrap_or(0).max(1) as Load;
    let mut hi = total.max(lo);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

pub fn lc1(inst: &Instance) -> Load {
    lc1_of(inst.min_times(), inst.n_stations())
}

pub fn lc2(inst: &Instance) -> Load {
    lc2_of(inst.min_times(), inst.n_stations())
}

pub fn station_windows(inst: &Instance, c: Load) -> StationWindow {
    windows_of(inst, inst.min_times(), c)
}

pub fn lc3(inst: &Instance) -> Load {
    lc3_of(inst, inst.min_times())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::{fig1, single};

    fn uniform(n: usize, workers: usize, p: Time, edges: &[(usize, usize)]) -> Instance {
        Instance::new(n, workers, vec![Some(p); n * workers], edges).unwrap()
    }

    #[test]
    fn lc1_values() {
        assert_eq!(lc1(&fig1()), 5);
        assert_eq!(lc1(&single()), 7);
        let inst = fig1();
        let column: Vec<_> = (0..6).map(|t| inst.time(t, 0)).collect();
        let one_worker = Instance::new(6, 1, column, inst.edges()).unwrap();
        assert_eq!(lc1(&one_worker), 19);
    }

    #[test]
    fn lc2_values() {
        assert_eq!(lc2(&fig1()), 5);
        assert_eq!(lc2(&single()), 0);
        assert_eq!(lc2(&uniform(4, 2, 2, &[])), 4);
    }

    #[test]
    fn window_values() {
        let inst = fig1();
        let w6 = station_windows(&inst, 6);
        assert_eq!((w6.earliest[5], w6.latest[5]), (3, 3));
        let w4 = station_windows(&inst, 4);
        assert_eq!((w4.earliest[5], w4.latest[5]), (4, 3));
        assert!(!w4.is_feasible());
        let s = station_windows(&single(), 7);
        assert_eq!((s.earliest[0], s.latest[0]), (1, 1));
    }

    #[test]
    fn lc3_values() {
        assert_eq!(lc3(&fig1()), 5);
        // the window test alone is weaker than the maximum task time, but the
        // search starts there
        assert_eq!(lc3(&single()), 7);
        assert_eq!(lc3(&uniform(3, 2, 1, &[(0, 1), (1, 2)])), 2);
    }

    #[test]
    fn lc3_is_minimal_feasible_window() {
        let inst = fig1();
        assert!(station_windows(&inst, 5).is_feasible());
        assert!(!station_windows(&inst, 4).is_feasible());
    }

    mod props {
        use super::*;
        use crate::instance::generator::{generate_instance, random_base, Variability};
        use proptest::prelude::*;

        fn instance() -> impl Strategy<Value = Instance> {
            (2usize..10, 1usize..4, 0.0f64..0.7, any::<u64>()).prop_map(|(n, w, d, seed)| {
                let (times, edges) = random_base(n, d, 15, seed);
                generate_instance(&times, &edges, w, Variability::High, 0.0, seed).unwrap()
            })
        }

        proptest! {
            #[test]
            fn invariant_under_worker_permutation(inst in instance(), rot in 0usize..4) {
                let w = inst.n_workers();
                let perm: Vec<usize> = (0..w).map(|i| (i + rot) % w).collect();
                let other = inst.with_worker_permutation(&perm);
                prop_assert_eq!(lc1(&inst), lc1(&other));
                prop_assert_eq!(lc2(&inst), lc2(&other));
                prop_assert_eq!(lc3(&inst), lc3(&other));
            }

            #[test]
            fn depend_only_on_minimum_times(inst in instance(), extra in 0u32..5) {
                // a worker that is never faster than the current minimum
                let (n, w) = (inst.n_tasks(), inst.n_workers());
                let mut times = Vec::new();
                let mut slow = Vec::new();
                for t in 0..n {
                    times.extend((0..w).map(|v| inst.time(t, v)));
                    times.push(Some(inst.min_time(t) + extra));
                    slow.extend((0..w).map(|v| inst.time(t, v)));
                    slow.push(None);
                }
                let wider = Instance::new(n, w + 1, times, inst.edges()).unwrap();
                let same_mins = Instance::new(n, w + 1, slow, inst.edges()).unwrap();
                prop_assert_eq!(lc1(&wider), lc1(&same_mins));
                prop_assert_eq!(lc2(&wider), lc2(&same_mins));
                prop_assert_eq!(lc3(&wider), lc3(&same_mins));
            }

            #[test]
            fn window_monotonicity(inst in instance(), c in 1u64..40) {
                let a = station_windows(&inst, c);
                let b = station_windows(&inst, c + 1);
                for t in 0..inst.n_tasks() {
                    prop_assert!(b.earliest[t] <= a.earliest[t]);
                    prop_assert!(b.latest[t] >= a.latest[t]);
                    prop_assert!(a.earliest[t] >= 1);
                    prop_assert!(a.latest[t] <= inst.n_stations() as i64);
                }
                // more predecessor work never moves a task earlier
                for &(x, y) in inst.closure() {
                    prop_assert!(a.earliest[x] <= a.earliest[y]);
                    prop_assert!(a.latest[x] <= a.latest[y]);
                }
            }

            #[test]
            fn lc3_is_smallest_feasible(inst in instance()) {
                let c = lc3(&inst);
                prop_assert!(station_windows(&inst, c).is_feasible());
                let floor = inst.min_times().iter().copied().max().unwrap() as Load;
                if c > floor {
                    prop_assert!(!station_windows(&inst, c - 1).is_feasible());
                }
            }
        }
    }
}
