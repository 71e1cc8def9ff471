// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mordell_bench::fundamentals;
use mordell_core::class_group_summary;

fn summaries(c: &mut Criterion) {
    let mut group = c.benchmark_group("class_group_summary");
    for (label, negative) in [("imaginary", true), ("real", false)] {
        for lo in [1_000i64, 100_000, 1_000_000] {
            let deltas = fundamentals(lo, lo + 400, negative);
            group.bench_with_input(BenchmarkId::new(label, lo), &deltas, |b, deltas| {
                b.iter(|| {
                    for &d in deltas {
                        black_box(class_group_summary(d).unwrap());
                    }
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, summaries);
criterion_main!(benches);
