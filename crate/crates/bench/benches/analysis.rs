use criterion::{black_box, criterion_group, criterion_main, Criterion};

use reslat::filters::all_filters;
use reslat::modelgen::{enumerate_residuated, SearchSpec};
use reslat::normality::normality_report;
use reslat::verify::{verify, Selection};
use reslat::{examples, Analysis, Filter};
use reslat_bench::census;

fn filters(c: &mut Criterion) {
    let a6 = examples::a6();
    c.bench_function("filters/a6", |b| b.iter(|| all_filters(black_box(&a6))));
    let five = census(5);
    c.bench_function("filters/census-5", |b| {
        b.iter(|| five.iter().map(|s| all_filters(s).len()).sum::<usize>())
    });
}

fn normality(c: &mut Criterion) {
    let five = census(5);
    c.bench_function("normality/census-5", |b| {
        b.iter(|| {
            five.iter()
                .map(|s| {
                    let an = Analysis::new(s);
                    normality_report(&an, &Filter::trivial(s)).unwrap().index
                })
                .max()
        })
    });
}

fn battery(c: &mut Criterion) {
    let a6 = examples::a6();
    c.bench_function("verify/a6", |b| {
        b.iter(|| verify(black_box(&a6), Selection::All))
    });
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    for n in [4, 5] {
        g.bench_function(format!("size-{n}"), |b| {
            b.iter(|| enumerate_residuated(&SearchSpec::new(n)).unwrap().len())
        });
    }
    g.finish();
}

criterion_group!(benches, filters, normality, battery, search);
criterion_main!(benches);
