use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gridfree_core::linalg::rank_check;
use gridfree_core::{build_matrix_m, charpoly, enumerate_crossings, solve_eq17};

fn algebra(c: &mut Criterion) {
    let m = build_matrix_m(12).unwrap();
    c.bench_function("charpoly_r12", |b| b.iter(|| charpoly(black_box(&m))));
    c.bench_function("rank_check_r4_12", |b| b.iter(|| (4..=12).map(|r| rank_check(r).unwrap().rank).sum::<usize>()));
    c.bench_function("solve_three_lines", |b| b.iter(solve_eq17));
}

fn crossings(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_crossings");
    g.sample_size(10);
    for r in [3, 4] {
        g.bench_function(format!("r{r}"), |b| b.iter(|| enumerate_crossings(black_box(r)).unwrap().survivors));
    }
    g.finish();
}

criterion_group!(benches, algebra, crossings);
criterion_main!(benches);
