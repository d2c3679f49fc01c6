use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cupmod_core::curated::{rp3_11, torus_grid};
use cupmod_core::{
    compute_partition_barcodes, cup_pers, order_k_cup_pers, persistent_cohomology,
    rel_cup_pers,
};

fn grids(c: &mut Criterion) {
    let mut group = c.benchmark_group("torus_grid");
    group.sample_size(20);
    for m in [8, 12, 17] {
        let f = torus_grid(m, 1);
        let n = f.len();
        group.bench_with_input(BenchmarkId::new("persistent_cohomology", n), &f, |b, f| {
            b.iter(|| persistent_cohomology(f))
        });
        group.bench_with_input(BenchmarkId::new("cup_pers", n), &f, |b, f| b.iter(|| cup_pers(f)));
        group.bench_with_input(BenchmarkId::new("rel_cup_pers", n), &f, |b, f| {
            b.iter(|| rel_cup_pers(f))
        });
    }
    group.finish();
}

fn projective_space(c: &mut Criterion) {
    let f = rp3_11();
    c.bench_function("rp3_11/order_3", |b| b.iter(|| order_k_cup_pers(&f, 3).unwrap()));
    c.bench_function("rp3_11/partitions", |b| b.iter(|| compute_partition_barcodes(&f)));
}

criterion_group!(benches, grids, projective_space);
criterion_main!(benches);
