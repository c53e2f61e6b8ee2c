use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fwdis_core::instances::{random_region, seeded_quadratic, RegionFamily};
use fwdis_core::{fw_dis, MultilinearExtension, Objective, Region, Schedule, SetFunctionTable, SolveConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn build_schedule(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_schedule");
    for t in [1_000usize, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| b.iter(|| Schedule::new(black_box(t))));
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("fw_dis");
    for family in [RegionFamily::Box, RegionFamily::Knapsack, RegionFamily::Halfspaces] {
        let inst = seeded_quadratic(1, 6, family).expect("instance");
        let cfg = SolveConfig::new(1000);
        group.bench_function(format!("{family:?}/n6/T1000").to_lowercase(), |b| {
            b.iter(|| fw_dis(&inst.objective, &inst.region, black_box(&cfg)).expect("solve"))
        });
    }
    group.finish();
}

fn lmo(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut group = c.benchmark_group("lmo");
    for (name, region) in [
        ("knapsack/n20", random_region(RegionFamily::Knapsack, 20, &mut rng).expect("region")),
        ("simplex/n6x3", random_region(RegionFamily::Halfspaces, 6, &mut rng).expect("region")),
        ("simplex/covering_n10", Region::covering(10).expect("region")),
    ] {
        let g: Vec<f64> = (0..region.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        group.bench_function(name, |b| b.iter(|| region.lmo(black_box(&g)).expect("lmo")));
    }
    group.finish();
}

/// Cut function of a random weighted graph on `n` nodes.
fn graph_cut(n: usize, seed: u64) -> MultilinearExtension {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize, f64)> =
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).map(|(i, j)| (i, j, rng.random())).collect();
    let values = (0..1usize << n)
        .map(|s| edges.iter().filter(|(i, j, _)| (s >> i & 1) != (s >> j & 1)).map(|e| e.2).sum())
        .collect();
    MultilinearExtension::new_unchecked(SetFunctionTable::new(n, values).expect("table"))
}

fn multilinear_gradient(c: &mut Criterion) {
    let mut group = c.benchmark_group("multilinear_gradient");
    for n in [8usize, 12, 16] {
        let f = graph_cut(n, n as u64);
        let x = vec![0.37; n];
        group.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| b.iter(|| f.gradient(black_box(x))));
    }
    group.finish();
}

criterion_group!(benches, build_schedule, solve, lmo, multilinear_gradient);
criterion_main!(benches);
