use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dagph::fixtures::{holed_strip, noisy_circle};
use dagph::parallel::Execution;
use dagph::pipelines::{build_parallel_graph, split_subsamples, window_ranks, RadiusSchedule};
use dagph::ssss::all_pairs_rank;
use dagph::subgraph::InducedMaps;
use dagph::PrimeField;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn all_pairs(c: &mut Criterion) {
    let f = PrimeField::default_prime();
    let mut group = c.benchmark_group("all_pairs_rank");
    group.sample_size(10);
    for cells in [8u32, 16, 32] {
        let gf = holed_strip(cells);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, gf.vertex_count()), &gf, |b, gf| {
                b.iter(|| black_box(all_pairs_rank(&f, gf, 1, exec).unwrap()))
            });
        }
    }
    group.finish();
}

fn homology(c: &mut Criterion) {
    let f = PrimeField::default_prime();
    let mut group = c.benchmark_group("induced_maps");
    group.sample_size(10);
    for points in [40usize, 80] {
        let pc = noisy_circle(1, points, 0.1);
        let (x, y) = split_subsamples(&pc, points * 2 / 5, 1).unwrap();
        let schedule = RadiusSchedule::linear(0.05, 0.5, 10).unwrap();
        let lg = build_parallel_graph(&x, &y, &schedule, 2).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, points), &lg, |b, lg| {
                b.iter(|| black_box(InducedMaps::whole(&f, lg.graph(), 1, exec)))
            });
        }
    }
    group.finish();
}

fn windows(c: &mut Criterion) {
    let f = PrimeField::default_prime();
    let mut group = c.benchmark_group("window_ranks");
    group.sample_size(10);
    for levels in [6usize, 12] {
        let pc = noisy_circle(2, 60, 0.1);
        let (x, y) = split_subsamples(&pc, 24, 2).unwrap();
        let schedule = RadiusSchedule::linear(0.05, 0.5, levels).unwrap();
        let lg = build_parallel_graph(&x, &y, &schedule, 2).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, levels), &lg, |b, lg| {
                b.iter(|| black_box(window_ranks(&f, lg, 1, exec).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, all_pairs, homology, windows);
criterion_main!(benches);
