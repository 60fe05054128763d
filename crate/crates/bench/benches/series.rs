use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qrenorm_core::arithmetic::{sigma_coeff_arith, tw_pos};
use qrenorm_core::catalog::{build_series, verify_identity, IdentityId, NamedSeriesId};
use qrenorm_core::renorm::shadow;
use qrenorm_core::Exponent;

fn expansion(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_series");
    for id in [NamedSeriesId::Sigma, NamedSeriesId::W, NamedSeriesId::F1] {
        for bound in [100i64, 400] {
            g.bench_with_input(BenchmarkId::new(id.as_str(), bound), &bound, |b, &n| {
                b.iter(|| build_series(id, Exponent::from_integer(n)).unwrap())
            });
        }
    }
    g.finish();
}

fn renormalization(c: &mut Criterion) {
    c.bench_function("shadow SIGMA to q^150", |b| {
        b.iter(|| shadow(NamedSeriesId::Sigma, Exponent::from_integer(150)).unwrap())
    });
    c.bench_function("verify AJO to q^150", |b| {
        b.iter(|| verify_identity(IdentityId::Ajo, Exponent::from_integer(150)).unwrap())
    });
}

fn oracles(c: &mut Criterion) {
    let mut g = c.benchmark_group("pell_oracle");
    for n in [55u64, 1609, 20_000] {
        g.bench_with_input(BenchmarkId::new("sigma", n), &n, |b, &n| b.iter(|| sigma_coeff_arith(black_box(n)).unwrap()));
    }
    g.finish();
    c.bench_function("tw_pos 8*500-1", |b| b.iter(|| tw_pos(black_box(3999)).unwrap()));
}

criterion_group!(benches, expansion, renormalization, oracles);
criterion_main!(benches);
