//! Parallel vs sequential spectral kernels.

use chanlab_core::par::with_sequential;
use chanlab_core::spectral::{random_divfree, Dealias, QuadratureGrid};
use chanlab_core::{ChannelParams, Resolution};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn params() -> ChannelParams {
    ChannelParams::new(4.0, 2.0, 1.0, 0.02, 1.0).unwrap()
}

fn norms(c: &mut Criterion) {
    let mut g = c.benchmark_group("norms");
    for &(nx, nz) in &[(16, 17), (32, 33)] {
        let res = Resolution::new(nx, nx, nz).unwrap();
        let u = random_divfree(params(), res, 1, 1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("parallel", nx), &u, |b, u| {
            b.iter(|| black_box(u.grad_norm_sq()))
        });
        g.bench_with_input(BenchmarkId::new("sequential", nx), &u, |b, u| {
            b.iter(|| with_sequential(|| black_box(u.grad_norm_sq())))
        });
    }
    g.finish();
}

fn trilinear(c: &mut Criterion) {
    let mut g = c.benchmark_group("trilinear");
    g.sample_size(20);
    for &(nx, nz) in &[(16, 17), (32, 33)] {
        let res = Resolution::new(nx, nx, nz).unwrap();
        let p = params();
        let u = random_divfree(p, res, 1, 1.0).unwrap();
        let v = random_divfree(p, res, 2, 1.0).unwrap();
        let q = QuadratureGrid::new(p, res, Dealias::Exact);
        let run = || {
            let (ru, rv) = (q.resolve(&u), q.resolve(&v));
            q.trilinear(&ru, &rv, &rv)
        };
        g.bench_function(BenchmarkId::new("parallel", nx), |b| b.iter(|| black_box(run())));
        g.bench_function(BenchmarkId::new("sequential", nx), |b| {
            b.iter(|| with_sequential(|| black_box(run())))
        });
    }
    g.finish();
}

fn shells(c: &mut Criterion) {
    let mut g = c.benchmark_group("galerkin_project");
    let res = Resolution::new(16, 16, 33).unwrap();
    let u = random_divfree(params(), res, 3, 1.0).unwrap();
    g.bench_function("project", |b| b.iter(|| black_box(u.galerkin_project(20.0))));
    g.finish();
}

criterion_group!(benches, norms, trilinear, shells);
criterion_main!(benches);
