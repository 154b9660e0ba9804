use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use teich_bench::{foliations, points, slopes};
use teich_core::poisson::poisson_kernel;
use teich_core::quadrature::{integrate_boundary_real, mc_boundary, SeedStream};
use teich_core::teich::{extremal_length, kerckhoff_sup, teich_distance};
use teich_core::testfns::TestFunction;
use teich_core::thurston::BoundaryMeasure;
use teich_core::TorusPoint;

fn bench_extremal_length(c: &mut Criterion) {
    let xs = points(1024, 1);
    let fs = foliations(1024, 2);
    c.bench_function("extremal_length/batch1024", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for (x, f) in xs.iter().zip(&fs) {
                acc += extremal_length(black_box(x), black_box(f)).unwrap();
            }
            acc
        })
    });
}

fn bench_kernel_transport(c: &mut Criterion) {
    let xs = points(512, 3);
    let ys = points(512, 4);
    let us = slopes(512, 5);
    c.bench_function("poisson_kernel/transport512", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for ((x, y), u) in xs.iter().zip(&ys).zip(&us) {
                let p = poisson_kernel(x, y, u).value();
                acc += p * BoundaryMeasure::new(*x).density(u);
            }
            acc
        })
    });
}

fn bench_distance(c: &mut Criterion) {
    let xs = points(1024, 6);
    let ys = points(1024, 7);
    c.bench_function("teich_distance/closed_form1024", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for (x, y) in xs.iter().zip(&ys) {
                acc += teich_distance(black_box(x), black_box(y));
            }
            acc
        })
    });
    let x = TorusPoint::new(0.3, 0.8).unwrap();
    let y = TorusPoint::new(-1.0, 2.0).unwrap();
    c.bench_function("kerckhoff_sup/single", |b| {
        b.iter(|| kerckhoff_sup(black_box(&x), black_box(&y)))
    });
}

fn bench_boundary_quadrature(c: &mut Criterion) {
    let x0 = TorusPoint::square();
    let x = TorusPoint::new(1.0, 0.5).unwrap();
    let v = TestFunction::HarmonicRe { n: 3, center: x0 };
    let f = v.boundary_fn();
    c.bench_function("integrate_boundary/harmonic_tol1e-9", |b| {
        b.iter(|| {
            integrate_boundary_real(
                |u| f.eval_at(u).re * poisson_kernel(&x0, &x, &teich_core::Slope::new(u)).value(),
                &x0,
                1e-9,
            )
        })
    });
}

fn bench_cauchy_sampling(c: &mut Criterion) {
    let m = BoundaryMeasure::new(TorusPoint::new(0.5, 1.5).unwrap());
    c.bench_function("cauchy_sample/100k", |b| {
        let mut seed = 0u64;
        b.iter_batched(
            || {
                seed += 1;
                seed
            },
            |s| m.sample(100_000, s),
            BatchSize::SmallInput,
        )
    });
    let x0 = TorusPoint::square();
    c.bench_function("mc_boundary/100k", |b| {
        b.iter(|| {
            mc_boundary(
                |u| (u * u - 1.0) / (u * u + 1.0),
                &x0,
                100_000,
                &SeedStream::new(9, 0),
            )
        })
    });
}

criterion_group!(
    benches,
    bench_extremal_length,
    bench_kernel_transport,
    bench_distance,
    bench_boundary_quadrature,
    bench_cauchy_sampling
);
criterion_main!(benches);
