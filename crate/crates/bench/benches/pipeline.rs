use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sigmasurf::geometry::{energy_density, gaussian_curvature_exact, sample_curvature};
use sigmasurf::projector::{euler_lagrange_residual, member_projector, sum_with};
use sigmasurf::surface::{embed, square_grid};
use sigmasurf::{canonical_chart, tower, Composition};
use sigmasurf_bench::{generic_input, veronese_input};

fn bench_tower(c: &mut Criterion) {
    let mut g = c.benchmark_group("tower");
    for n in [3, 5, 8] {
        let v = veronese_input(n);
        let f = generic_input(n);
        g.bench_with_input(BenchmarkId::new("veronese", n), &v, |b, v| {
            b.iter(|| tower(v))
        });
        g.bench_with_input(BenchmarkId::new("generic", n), &f, |b, f| {
            b.iter(|| tower(f))
        });
    }
    g.finish();
}

fn bench_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("sum_with");
    for n in [4, 6] {
        let t = tower(&generic_input(n)).unwrap();
        g.bench_function(BenchmarkId::new("front", n), |b| {
            b.iter(|| sum_with(&t, Composition::front(n / 2)))
        });
        let w = Composition::new(vec![0, 1, n - 1], vec![0.5, -1.0, 2.0]).unwrap();
        g.bench_function(BenchmarkId::new("weighted", n), |b| {
            b.iter(|| sum_with(&t, w.clone()))
        });
    }
    g.finish();
}

fn bench_sample(c: &mut Criterion) {
    let t = tower(&veronese_input(5)).unwrap();
    let p = member_projector(&t, 2).unwrap();
    let chart = canonical_chart(5, 1).unwrap();
    let grid = square_grid(3.0, 41);
    c.bench_function("embed_grid_41", |b| {
        b.iter(|| {
            for &z in &grid {
                black_box(embed(&p, &chart, z).unwrap());
            }
        })
    });
}

fn bench_curvature(c: &mut Criterion) {
    let t = tower(&generic_input(4)).unwrap();
    let p = member_projector(&t, 1).unwrap();
    let grid = square_grid(3.0, 41);
    c.bench_function("curvature_exact", |b| {
        b.iter(|| gaussian_curvature_exact(&energy_density(&p)).unwrap())
    });
    let k = gaussian_curvature_exact(&energy_density(&p)).unwrap();
    c.bench_function("curvature_sample_41", |b| {
        b.iter(|| sample_curvature(&k, &grid))
    });
}

fn bench_euler_lagrange(c: &mut Criterion) {
    let mut g = c.benchmark_group("euler_lagrange");
    g.sample_size(10);
    for n in [3, 5] {
        let t = tower(&generic_input(n)).unwrap();
        let p = member_projector(&t, 1).unwrap();
        g.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| euler_lagrange_residual(&p))
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    bench_tower,
    bench_sums,
    bench_sample,
    bench_curvature,
    bench_euler_lagrange
);
criterion_main!(benches);
