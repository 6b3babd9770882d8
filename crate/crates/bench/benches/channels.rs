//! Benchmarks for the operator algebra, channel validation, and the two
//! capacity optimizers.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use qhsw_core::{
    cp_min_eigenvalue, generate_group_q, hsw_capacity_diagonal, min_output_entropy,
    optimize_ensemble, qubit_unital_capacity_closed_form, DiagonalUnitalChannel, OptimizerOptions,
};

fn qutrit_mixture() -> DiagonalUnitalChannel {
    DiagonalUnitalChannel::from_weyl_mixture(3, &[((0, 0), 0.7), ((1, 0), 0.2), ((0, 1), 0.1)])
        .unwrap()
}

fn bench_group_generation(c: &mut Criterion) {
    c.bench_function("weyl_group_d3", |b| {
        b.iter(|| generate_group_q(black_box(3)).unwrap())
    });
    c.bench_function("weyl_group_d5", |b| {
        b.iter(|| generate_group_q(black_box(5)).unwrap())
    });
}

fn bench_cp_check(c: &mut Criterion) {
    let qubit = DiagonalUnitalChannel::qubit(0.5, 0.5, 0.9).unwrap();
    let qutrit = qutrit_mixture();
    c.bench_function("choi_cp_check_d2", |b| {
        b.iter(|| cp_min_eigenvalue(black_box(&qubit)).unwrap())
    });
    c.bench_function("choi_cp_check_d3", |b| {
        b.iter(|| cp_min_eigenvalue(black_box(&qutrit)).unwrap())
    });
}

fn bench_capacity(c: &mut Criterion) {
    let qubit = DiagonalUnitalChannel::qubit(0.5, 0.5, 0.9).unwrap();
    let qutrit = qutrit_mixture();
    let opts = OptimizerOptions {
        restarts: 2,
        ..OptimizerOptions::default()
    };

    c.bench_function("closed_form_capacity", |b| {
        b.iter(|| qubit_unital_capacity_closed_form(black_box([0.5, 0.5, 0.9])).unwrap())
    });

    let mut group = c.benchmark_group("optimizers");
    group.sample_size(10);
    group.bench_function("min_output_entropy_d2", |b| {
        b.iter(|| min_output_entropy(black_box(&qubit), &opts).unwrap())
    });
    group.bench_function("min_output_entropy_d3", |b| {
        b.iter(|| min_output_entropy(black_box(&qutrit), &opts).unwrap())
    });
    group.bench_function("capacity_d3", |b| {
        b.iter(|| hsw_capacity_diagonal(black_box(&qutrit), &opts).unwrap())
    });
    group.bench_function("ensemble_chi_d2", |b| {
        b.iter(|| optimize_ensemble(black_box(&qubit), &opts).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_group_generation,
    bench_cp_check,
    bench_capacity
);
criterion_main!(benches);
