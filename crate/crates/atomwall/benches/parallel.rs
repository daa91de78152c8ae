//! Rayon vs sequential comparison for the two data-parallel hot loops:
//! potential-curve evaluation and bridge-ensemble sampling.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use atomwall::fk::BridgeEnsemble;
use atomwall::par::Parallelism;
use atomwall::spectrum::{build_spectrum, SpectrumParams};
use atomwall::units::PhysicalConfig;
use atomwall::PotentialEngine;

fn bench_curve(c: &mut Criterion) {
    let table = build_spectrum(&SpectrumParams::default()).unwrap();
    let config = PhysicalConfig {
        tau: 1e-3,
        ..Default::default()
    };
    let engine = PotentialEngine::new(config, table).unwrap();
    let lam_at = engine.scales.lambda_at;
    let xs: Vec<f64> = (0..24)
        .map(|i| 0.05 * lam_at * (10.0_f64).powf(i as f64 * 4.0 / 23.0))
        .collect();

    let mut group = c.benchmark_group("curve_24pts");
    for (label, mode) in [
        ("sequential", Parallelism::Sequential),
        ("parallel", Parallelism::Auto),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &mode, |b, &mode| {
            b.iter(|| engine.curve(&xs, mode, false).unwrap())
        });
    }
    group.finish();
}

fn bench_bridges(c: &mut Criterion) {
    let mut group = c.benchmark_group("bridges_20k_x128");
    group.sample_size(20);
    for (label, mode) in [
        ("sequential", Parallelism::Sequential),
        ("parallel", Parallelism::Auto),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &mode, |b, &mode| {
            b.iter(|| BridgeEnsemble::sample(20_000, 128, 42, mode))
        });
    }
    group.finish();
}

criterion_group!(parallel, bench_curve, bench_bridges);
criterion_main!(parallel);
