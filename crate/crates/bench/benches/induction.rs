use criterion::{black_box, criterion_group, criterion_main, Criterion};
use privtree_bench::{fixtures, wide_numeric};
use privtree_core::tree::{self, SplitCriterion};
use privtree_core::BuildParams;

fn bench_tree_build(c: &mut Criterion) {
    let params = BuildParams::default();
    let mut group = c.benchmark_group("tree-build");
    for (name, ds) in fixtures() {
        group.bench_function(name, |b| {
            b.iter(|| tree::build(black_box(&ds), &params).unwrap())
        });
    }
    group.finish();
}

fn bench_threshold_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("threshold-scan");
    for rows in [500, 5_000] {
        let ds = wide_numeric(rows);
        group.bench_function(format!("{rows}-rows"), |b| {
            b.iter(|| tree::best_numeric_split(black_box(&ds), "alpha", SplitCriterion::Gain).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_tree_build, bench_threshold_scan);
criterion_main!(benches);
