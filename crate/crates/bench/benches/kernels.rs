use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qpb_core::kk::{hilbert_transform, pole_signal};
use qpb_core::states::gaussian;
use qpb_core::transform::{to_momentum, to_position};
use qpb_core::weyl::{normal_order, parse, weyl_symmetrize, Word};
use qpb_core::{LadderSystem, Representation, UniformGrid};

fn transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("fourier_round_trip");
    for n in [256usize, 1024, 4096] {
        let grid = UniformGrid::new(1, n, 8.0, 1.0).unwrap();
        let psi = gaussian(grid, Representation::Position, 0.0, 1.0, 0.5).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &psi, |b, psi| {
            b.iter(|| to_position(&to_momentum(black_box(psi)).unwrap()).unwrap())
        });
    }
    group.finish();
}

fn hilbert(c: &mut Criterion) {
    let grid = UniformGrid::new(1, 4096, 64.0, 1.0).unwrap();
    let signal = pole_signal(grid, 1.0).unwrap();
    let re = signal.real_part();
    c.bench_function("hilbert_transform_4096", |b| {
        b.iter(|| hilbert_transform(black_box(&re), &grid).unwrap())
    });
}

fn algebra(c: &mut Criterion) {
    let expr = parse("(X + P)^6").unwrap().eval().unwrap();
    c.bench_function("normal_order_binomial_6", |b| {
        b.iter(|| normal_order(black_box(&expr)))
    });
    let word = Word::from_symbols("XXXXPPPP").unwrap();
    c.bench_function("weyl_symmetrize_x4p4", |b| {
        b.iter(|| weyl_symmetrize(black_box(&word)).unwrap())
    });
}

fn ladder(c: &mut Criterion) {
    c.bench_function("ladder_build_64", |b| {
        b.iter(|| LadderSystem::build(black_box(64), 1.0, 1.0).unwrap())
    });
}

criterion_group!(benches, transform, hilbert, algebra, ladder);
criterion_main!(benches);
