//! Benchmarks: the data-parallel radius sweep against its sequential
//! baseline, plus the two scalar hot paths underneath (Bessel evaluation
//! and kernel evaluation).
//!
//! `cargo bench -p radialft` runs with the default `parallel` feature so the
//! sweep benchmark exercises rayon; the `sequential` case below calls the
//! same per-radius work through a plain iterator for comparison. Building
//! with `--no-default-features` makes both paths sequential.

use criterion::{criterion_group, criterion_main, Criterion};
use radialft::fraccalc::FractionalOrder;
use radialft::par::{maybe_par_map, seq_map};
use radialft::profiles::RadialProfile;
use radialft::specfun::{bessel_j, kernel_Q, KernelParams};
use radialft::transform::{forward_eq6, transform_grid, TransformMethod, TransformRequest};
use std::hint::black_box;

fn grid() -> Vec<f64> {
    (0..24)
        .map(|i| 0.5 * (40.0f64 / 0.5).powf(i as f64 / 23.0))
        .collect()
}

fn bench_radius_sweep(c: &mut Criterion) {
    let order = FractionalOrder::new(1.0).unwrap();
    // Warm the kernel caches outside the measurement.
    let _ = forward_eq6(&RadialProfile::Exponential, 3, &order, 1.0).unwrap();

    let mut group = c.benchmark_group("radius_sweep");
    group.sample_size(10);

    group.bench_function("parallel", |b| {
        b.iter(|| {
            let req = TransformRequest::new(
                RadialProfile::Exponential,
                3,
                order,
                grid(),
                TransformMethod::Eq6,
                false,
            );
            black_box(transform_grid(&req).unwrap());
        })
    });

    group.bench_function("sequential", |b| {
        b.iter(|| {
            let out: Vec<f64> = seq_map(&grid(), |&r| {
                forward_eq6(&RadialProfile::Exponential, 3, &order, r)
                    .unwrap()
                    .value
            });
            black_box(out);
        })
    });
    group.finish();
}

fn bench_scalar_kernels(c: &mut Criterion) {
    let p = KernelParams::new(1.0, 3).unwrap();
    let _ = kernel_Q(&p, 300.0).unwrap(); // warm caches

    c.bench_function("bessel_j_mixed_regimes", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            let mut x = 0.3;
            while x < 400.0 {
                acc += bessel_j(black_box(1.5), black_box(x)).unwrap();
                x *= 1.07;
            }
            black_box(acc)
        })
    });

    c.bench_function("kernel_q_upper_mixed_zones", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            let mut u = 0.5;
            while u < 400.0 {
                acc += kernel_Q(&p, black_box(u)).unwrap();
                u *= 1.11;
            }
            black_box(acc)
        })
    });
}

fn bench_parallel_primitive(c: &mut Criterion) {
    let items: Vec<f64> = (0..512).map(|i| 0.1 + i as f64 * 0.05).collect();
    let p = KernelParams::new(1.0, 3).unwrap();
    let _ = kernel_Q(&p, 150.0).unwrap();

    let mut group = c.benchmark_group("kernel_batch");
    group.bench_function("maybe_par_map", |b| {
        b.iter(|| black_box(maybe_par_map(&items, |&u| kernel_Q(&p, u).unwrap())))
    });
    group.bench_function("seq_map", |b| {
        b.iter(|| black_box(seq_map(&items, |&u| kernel_Q(&p, u).unwrap())))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_radius_sweep,
    bench_scalar_kernels,
    bench_parallel_primitive
);
criterion_main!(benches);
