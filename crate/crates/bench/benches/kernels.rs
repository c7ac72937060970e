use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ordval_bench::{catalog_groups, catalog_texts, series_batch, square_batch};
use ordval_core::classify::classify_report;
use ordval_core::dsl::parse_group_expr;
use ordval_core::groups::{is_limit_point, oracle_between};
use ordval_core::numeric::rat;
use ordval_core::sample::Sampler;
use ordval_core::series::{trunc_inverse, trunc_sqrt};
use ordval_core::CoefficientField;

fn series_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_mul");
    for terms in [2, 4, 8] {
        let xs = series_batch(16, terms);
        group.bench_with_input(BenchmarkId::from_parameter(terms), &xs, |b, xs| {
            b.iter(|| {
                for pair in xs.windows(2) {
                    black_box(pair[0].checked_mul(&pair[1]).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn truncation(c: &mut Criterion) {
    let inputs = series_batch(16, 3);
    let squares = square_batch(16, 3);
    let mut group = c.benchmark_group("truncation");
    for n in [1, 3, 5] {
        group.bench_with_input(BenchmarkId::new("inverse", n), &n, |b, &n| {
            b.iter(|| {
                for x in &inputs {
                    black_box(trunc_inverse(x, n).unwrap());
                }
            })
        });
        group.bench_with_input(BenchmarkId::new("sqrt", n), &n, |b, &n| {
            b.iter(|| {
                for x in &squares {
                    black_box(trunc_sqrt(x, n).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn group_kernels(c: &mut Criterion) {
    let aa = parse_group_expr("lex(loc{2}, loc{2})").unwrap();
    let mut s = Sampler::new(7);
    let pairs: Vec<_> = (0..32)
        .map(|_| {
            let x = s.hull_element(&aa);
            let y = s.hull_element(&aa);
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    c.bench_function("oracle_between/bound64", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(oracle_between(&aa, x, y, 64));
            }
        })
    });
    let points: Vec<_> = pairs.iter().map(|(x, _)| x.scale(&rat(1, 3))).collect();
    c.bench_function("is_limit_point", |b| {
        b.iter(|| {
            for x in &points {
                black_box(is_limit_point(x, &aa).unwrap());
            }
        })
    });
}

fn classification(c: &mut Criterion) {
    let groups = catalog_groups();
    let field = CoefficientField::declared_real_closed(CoefficientField::PlainRationals);
    c.bench_function("classify_report/catalog", |b| {
        b.iter(|| {
            for g in &groups {
                black_box(classify_report(&field, g, 50));
            }
        })
    });
}

fn parsing(c: &mut Criterion) {
    let texts = catalog_texts();
    c.bench_function("parse_group_expr/catalog", |b| {
        b.iter(|| {
            for t in &texts {
                black_box(parse_group_expr(t).unwrap());
            }
        })
    });
}

criterion_group!(
    benches,
    series_mul,
    truncation,
    group_kernels,
    classification,
    parsing
);
criterion_main!(benches);
