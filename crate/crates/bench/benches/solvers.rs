use std::hint::black_box;
use std::time::Duration;

use alwabp_bench::bench_instance;
use alwabp_core::bnb::{branch_and_bound, BnbConfig};
use alwabp_core::bounds::{all_bounds, BoundsConfig};
use alwabp_core::export::{emit_model, Variant};
use alwabp_core::heuristic::{beam_search_feasible, initial_upper_bound, BeamParams};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bounds(c: &mut Criterion) {
    let mut group = c.benchmark_group("bounds");
    for (tasks, workers) in [(25, 4), (70, 10)] {
        let inst = bench_instance(tasks, workers, 0.15, 1);
        group.bench_with_input(
            BenchmarkId::new("root", format!("{tasks}x{workers}")),
            &inst,
            |b, inst| b.iter(|| all_bounds(black_box(inst), &BoundsConfig::root())),
        );
        group.bench_with_input(
            BenchmarkId::new("salbp", format!("{tasks}x{workers}")),
            &inst,
            |b, inst| {
                let config = BoundsConfig {
                    kinds: vec![
                        alwabp_core::bounds::BoundKind::Lc1,
                        alwabp_core::bounds::BoundKind::Lc2,
                        alwabp_core::bounds::BoundKind::Lc3,
                    ],
                    ..BoundsConfig::root()
                };
                b.iter(|| all_bounds(black_box(inst), &config))
            },
        );
    }
    group.finish();
}

fn beam(c: &mut Criterion) {
    let inst = bench_instance(25, 4, 0.15, 2);
    let start = initial_upper_bound(&inst, 42).expect("feasible benchmark instance");
    let params = BeamParams {
        width: 125,
        factor: 5,
        cycle_time: start.cycle_time,
        seed: 42,
    };
    c.bench_function("beam/25x4 at initial cycle time", |b| {
        b.iter(|| beam_search_feasible(black_box(&inst), &params))
    });
}

fn exact(c: &mut Criterion) {
    let inst = bench_instance(12, 3, 0.2, 3);
    let config = BnbConfig {
        heuristic: false,
        ..BnbConfig::default()
    };
    c.bench_function("bnb/12x3 without heuristic", |b| {
        b.iter(|| branch_and_bound(black_box(&inst), &config))
    });
}

fn export(c: &mut Criterion) {
    let inst = bench_instance(25, 4, 0.15, 4);
    c.bench_function("export/m3 25x4", |b| {
        b.iter(|| emit_model(black_box(&inst), Variant::M3))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(3));
    targets = bounds, beam, exact, export
}
criterion_main!(benches);
