use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gridfree_bench::{small_slopes, sts15};
use gridfree_core::{count_config, find_config, is_union_free, Budget, ConfigKind};

fn grid_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("grid_search");
    g.sample_size(10);
    for (q, r) in [(101, 3), (53, 4)] {
        let h = small_slopes(q, r);
        g.bench_function(format!("q{q}_r{r}"), |b| {
            b.iter(|| find_config(black_box(&h), ConfigKind::Grid(r, r), &Budget::unlimited()))
        });
    }
    g.finish();
}

fn counting(c: &mut Criterion) {
    let h = sts15();
    c.bench_function("sts15_count_grid3x3", |b| {
        b.iter(|| count_config(black_box(&h), ConfigKind::Grid(3, 3), &Budget::unlimited()))
    });
}

fn union_free(c: &mut Criterion) {
    let h = small_slopes(11, 3);
    c.bench_function("union_free_e3_q11", |b| b.iter(|| is_union_free(black_box(&h), 3, &Budget::unlimited())));
}

criterion_group!(benches, grid_search, counting, union_free);
criterion_main!(benches);
