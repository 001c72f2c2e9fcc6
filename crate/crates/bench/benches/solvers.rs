use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use oscm::crossings::{count_crossings, crossing_matrix};
use oscm::heuristics::{heuristic_portfolio, median, shift_improve};
use oscm::{solve_exact, HeuristicConfig, SolverConfig};
use oscm_bench::{exact_suite, heuristic_suite};

fn counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("counting");
    for f in heuristic_suite() {
        let ord = median(&f.instance).unwrap();
        group.bench_with_input(BenchmarkId::new("count_crossings", &f.name), &f, |b, f| {
            b.iter(|| count_crossings(black_box(&f.instance), black_box(&ord)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("crossing_matrix", &f.name), &f, |b, f| {
            b.iter(|| crossing_matrix(black_box(&f.instance)))
        });
    }
    group.finish();
}

fn heuristics(c: &mut Criterion) {
    let mut group = c.benchmark_group("heuristics");
    group.sample_size(10);
    for f in heuristic_suite().into_iter().take(2) {
        let m = crossing_matrix(&f.instance);
        let start = median(&f.instance).unwrap();
        group.bench_with_input(BenchmarkId::new("shift_improve", &f.name), &f, |b, _| {
            b.iter(|| shift_improve(black_box(&start), &m))
        });
        let cfg = HeuristicConfig::default();
        group.bench_with_input(BenchmarkId::new("portfolio", &f.name), &f, |b, f| {
            b.iter(|| heuristic_portfolio(&f.instance, &m, &cfg).unwrap())
        });
    }
    group.finish();
}

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    for f in exact_suite() {
        group.bench_with_input(BenchmarkId::from_parameter(&f.name), &f, |b, f| {
            b.iter(|| solve_exact(&f.instance, &SolverConfig::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, counting, heuristics, exact);
criterion_main!(benches);
