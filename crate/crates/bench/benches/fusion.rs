use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kacfusion_core::fusion::{s_matrix, verlinde_algebra};
use kacfusion_core::weyl::{fold_affine, TranslationLattice};
use kacfusion_core::{affine_data, FiniteWeight};
use std::hint::black_box;

fn kac_walton(c: &mut Criterion) {
    let mut g = c.benchmark_group("kac_walton");
    g.sample_size(10);
    for (t, k) in [("A2~1", 4), ("B3~1", 3), ("G2~1", 5)] {
        let d = affine_data(t.parse().unwrap()).unwrap();
        g.bench_with_input(BenchmarkId::new(t, k), &k, |b, &k| b.iter(|| verlinde_algebra(black_box(&d), k).unwrap()));
    }
    g.finish();
}

fn s_matrices(c: &mut Criterion) {
    let mut g = c.benchmark_group("s_matrix");
    for (t, k) in [("A2~1", 6), ("C3~1", 3), ("F4~1", 2)] {
        let d = affine_data(t.parse().unwrap()).unwrap();
        g.bench_with_input(BenchmarkId::new(t, k), &k, |b, &k| b.iter(|| s_matrix(black_box(&d), k).unwrap()));
    }
    g.finish();
}

fn fold(c: &mut Criterion) {
    let d = affine_data("E6~1".parse().unwrap()).unwrap();
    let v = FiniteWeight::from_ints(&[17, -9, 4, 23, -11, 6]);
    c.bench_function("fold_affine/E6", |b| b.iter(|| fold_affine(&d, 19, TranslationLattice::coroot_image(), black_box(&v)).unwrap()));
}

criterion_group!(benches, kac_walton, s_matrices, fold);
criterion_main!(benches);
