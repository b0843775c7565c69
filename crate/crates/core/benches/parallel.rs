//! Single-threaded pool against the default rayon pool on the data-parallel
//! kernels. Build with `--no-default-features` to measure the sequential
//! fallback instead; both rows then coincide.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use isopair::bipoly::parse_int_poly;
use isopair::fixtures;
use isopair::innertoral::{classify_inner_toral, monodromy_factor_degrees, SamplerConfig};
use isopair::parallel::with_threads;
use isopair::torusmeasure::{gram, mult_matrices};

const POOLS: [(&str, usize); 2] = [("1-thread", 1), ("default", 0)];

fn classify(c: &mut Criterion) {
    let q = &parse_int_poly("z^2 - w^2").unwrap() * &parse_int_poly("z^3 - w^2").unwrap();
    let cfg = SamplerConfig::with_samples(1024);
    let mut group = c.benchmark_group("classify_inner_toral");
    group.measurement_time(Duration::from_secs(5));
    for (name, threads) in POOLS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_threads(threads, || classify_inner_toral(&q, &cfg).unwrap()))
        });
    }
    group.finish();
}

fn monodromy(c: &mut Criterion) {
    let q = parse_int_poly("z^5 - w^3 + zw").unwrap();
    let cfg = SamplerConfig::default();
    let mut group = c.benchmark_group("monodromy");
    group.sample_size(20);
    for (name, threads) in POOLS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_threads(threads, || monodromy_factor_degrees(&q, &cfg).unwrap()))
        });
    }
    group.finish();
}

fn measure(c: &mut Criterion) {
    let mu = fixtures::measure_composite();
    let mut group = c.benchmark_group("torus_measure");
    group.sample_size(20);
    for (name, threads) in POOLS {
        group.bench_function(BenchmarkId::new("gram_16x16", name), |b| {
            b.iter(|| with_threads(threads, || gram(&mu, (16, 16))))
        });
        group.bench_function(BenchmarkId::new("mult_matrices_10x10", name), |b| {
            b.iter(|| with_threads(threads, || mult_matrices(&mu, (10, 10)).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, classify, monodromy, measure);
criterion_main!(benches);
