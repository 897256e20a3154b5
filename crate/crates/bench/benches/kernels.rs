use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use asdk_bench::{dense_poly, quartic, solved};
use asdk_core::cases::{self, sos_certificate};
use asdk_core::derive::connection::derive_nel;
use asdk_core::derive::second_order::{derive_36, match_all};
use asdk_core::numeric;
use asdk_core::StructureSystem;

fn algebra(c: &mut Criterion) {
    let p = dense_poly(4);
    let q = dense_poly(3);
    c.bench_function("poly_mul_deg4_by_deg3", |b| b.iter(|| black_box(&p) * black_box(&q)));
    let quartic = quartic();
    c.bench_function("sos_quartic", |b| b.iter(|| sos_certificate(black_box(&quartic)).unwrap()));
}

fn derivation(c: &mut Criterion) {
    let sys = StructureSystem::shipped();
    c.bench_function("derive_nel", |b| b.iter(|| derive_nel(black_box(&sys)).unwrap()));
    let (sys, sol) = solved();
    let mut g = c.benchmark_group("second_order");
    g.sample_size(10);
    g.bench_function("derive_36", |b| b.iter(|| derive_36(&sys, &sol).unwrap()));
    let set = derive_36(&sys, &sol).unwrap();
    g.bench_function("match_all", |b| b.iter(|| match_all(&set).unwrap()));
    g.finish();
}

fn pipelines(c: &mut Criterion) {
    let mut g = c.benchmark_group("cases");
    g.sample_size(10);
    g.bench_function("case_ii", |b| b.iter(|| cases::case_ii().run()));
    g.bench_function("case_iii", |b| b.iter(|| cases::case_iii().run()));
    g.finish();
}

fn sweep(c: &mut Criterion) {
    c.bench_function("numeric_point", |b| {
        b.iter(|| numeric::check_point(black_box(1.3), black_box(-0.7), &[0.0, 0.4, 1.1]))
    });
    let mut g = c.benchmark_group("numeric");
    g.sample_size(10);
    g.bench_function("sweep_100", |b| b.iter(|| numeric::sweep(7, 100, numeric::TOLERANCE)));
    g.finish();
}

criterion_group!(benches, algebra, derivation, pipelines, sweep);
criterion_main!(benches);
