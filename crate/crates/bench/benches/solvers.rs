use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use viewsel_bench::{balanced, small_random};
use viewsel_core::exact::{brute_force, dp_exact};
use viewsel_core::fptas::approximate;
use viewsel_core::Epsilon;

fn fptas_balanced(c: &mut Criterion) {
    let mut group = c.benchmark_group("fptas_balanced");
    group.sample_size(10);
    for eps in ["0.5", "0.25"] {
        let e: Epsilon = eps.parse().unwrap();
        for n in [1000, 2000, 4000] {
            let inst = balanced(n);
            group.bench_with_input(BenchmarkId::new(format!("eps={eps}"), n), &inst, |b, inst| {
                b.iter(|| approximate(inst, e).unwrap())
            });
        }
    }
    group.finish();
}

fn dp_balanced(c: &mut Criterion) {
    let mut group = c.benchmark_group("dp_balanced");
    group.sample_size(10);
    for n in [1000, 2000, 4000] {
        let inst = balanced(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| b.iter(|| dp_exact(inst).unwrap()));
    }
    group.finish();
}

fn exact_small(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_small");
    for n in [8, 14, 20] {
        let inst = small_random(n, 1);
        group.bench_with_input(BenchmarkId::new("brute", n), &inst, |b, inst| b.iter(|| brute_force(inst).unwrap()));
        group.bench_with_input(BenchmarkId::new("dp", n), &inst, |b, inst| b.iter(|| dp_exact(inst).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, fptas_balanced, dp_balanced, exact_small);
criterion_main!(benches);
