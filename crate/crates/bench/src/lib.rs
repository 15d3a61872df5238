//! Benchmark instances shared by the criterion benches.

use alwabp_core::instance::generator::{generate_instance, random_base};
use alwabp_core::{Instance, Variability};

/// Generated instance in the style of the published groups: worker count
/// and infeasibility fraction as given, high time variability.
pub fn bench_instance(n_tasks: usize, n_workers: usize, density: f64, seed: u64) -> Instance {
    let (times, edges) = random_base(n_tasks, density, 30, seed);
    generate_instance(&times, &edges, n_workers, Variability::High, 0.1, seed).expect("benchmark instance generation")
}
