//! Microbenchmarks for the numerical kernels: transform quadrature,
//! normalized Hankel eigensolves, Gauss-node recovery, and the
//! exponential-convexity sweep.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use coshtrans::measure::{MeasureSpec, MomentSequence};
use coshtrans::moments::recover_measure;
use coshtrans::posdef::{hankel, is_exponentially_convex, min_eig_normalized, GridPlan};
use coshtrans::transform::{catalog_get, PsiFunction};
use std::collections::BTreeMap;

fn bench_eval_psi(c: &mut Criterion) {
    let p = PsiFunction::from_measure(MeasureSpec::uniform(0.0, 1.0).unwrap()).unwrap();
    c.bench_function("eval_psi quadrature (uniform, x = 10)", |b| {
        b.iter(|| black_box(p.eval(black_box(10.0)).unwrap()))
    });
}

fn bench_hankel_min_eig(c: &mut Criterion) {
    let seq = MomentSequence::new(
        (0..=26).map(|n| 1.0 / (2.0 * n as f64 + 1.0)).collect(),
        "uniform",
    )
    .unwrap();
    let h = hankel(&seq, 12, 0).unwrap();
    c.bench_function("min_eig_normalized 13x13 log Hankel", |b| {
        b.iter(|| black_box(min_eig_normalized(black_box(&h)).unwrap()))
    });
}

fn bench_recover(c: &mut Criterion) {
    let seq = MomentSequence::new(
        (0..=8).map(|n| 1.0 / (2.0 * n as f64 + 1.0)).collect(),
        "uniform",
    )
    .unwrap();
    c.bench_function("recover_measure uniform k = 4", |b| {
        b.iter(|| black_box(recover_measure(black_box(&seq), 4).unwrap()))
    });
}

fn bench_convexity_sweep(c: &mut Criterion) {
    let mut params = BTreeMap::new();
    params.insert("xi".to_string(), 2.0);
    params.insert("eta".to_string(), 5.0);
    let p = catalog_get("bmv", &params).unwrap();
    let plan = GridPlan {
        max_size: 8,
        ..Default::default()
    };
    c.bench_function("is_exponentially_convex bmv(2, 5)", |b| {
        b.iter(|| black_box(is_exponentially_convex(black_box(&p), &plan).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_eval_psi,
    bench_hankel_min_eig,
    bench_recover,
    bench_convexity_sweep
);
criterion_main!(benches);
