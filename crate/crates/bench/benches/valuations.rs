use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use surfval::explorer::{enumerate_clusters, verify_theorems, EnumBudget};
use surfval::fixtures::{e7_resolution, example_two};
use surfval::{asymptotic_multiplicities, classify, fingen_degree, valuation_ideal};

fn per_curve(c: &mut Criterion) {
    let mut g = c.benchmark_group("example_two");
    for r in [3usize, 6, 12, 24] {
        let cl = example_two(r);
        let e = r - 1;
        g.bench_with_input(BenchmarkId::new("dstar", r), &cl, |b, cl| {
            b.iter(|| asymptotic_multiplicities(black_box(cl), e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("unload", r), &cl, |b, cl| {
            b.iter(|| valuation_ideal(black_box(cl), e, 4 * (r as u64 + 3)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("fingen", r), &cl, |b, cl| {
            b.iter(|| fingen_degree(black_box(cl), e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("classify", r), &cl, |b, cl| {
            b.iter(|| classify(black_box(cl), e).unwrap())
        });
    }
    g.finish();

    let e7 = e7_resolution();
    c.bench_function("e7_classify_all", |b| {
        b.iter(|| {
            e7.curves()
                .map(|e| classify(black_box(&e7), e).unwrap())
                .collect::<Vec<_>>()
        })
    });
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("explorer");
    g.sample_size(10);
    for steps in [4usize, 5, 6] {
        g.bench_with_input(BenchmarkId::new("enumerate", steps), &steps, |b, &s| {
            b.iter(|| enumerate_clusters(&EnumBudget::smooth(s)).len())
        });
    }
    g.bench_function("verify_4_steps", |b| {
        let budget = EnumBudget::smooth(4).with_pairs(2, 6);
        b.iter(|| verify_theorems(black_box(&budget)).is_clean())
    });
    g.finish();
}

criterion_group!(benches, per_curve, sweeps);
criterion_main!(benches);
