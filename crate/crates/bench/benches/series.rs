use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qmock_bench::{euler, identities};
use qmock_core::appell::appell_m;
use qmock_core::dsl::evaluate;
use qmock_core::hecke::{f_abc, HeckeSpec};
use qmock_core::theta::jtp;
use qmock_core::{QExponent, QMonomial};

fn kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel");
    for n in [100i64, 400] {
        let a = euler(n);
        g.bench_with_input(BenchmarkId::new("mul", n), &a, |b, a| b.iter(|| a.mul(a)));
        g.bench_with_input(BenchmarkId::new("invert", n), &a, |b, a| b.iter(|| a.invert().unwrap()));
    }
    g.finish();
}

fn special(c: &mut Criterion) {
    let mut g = c.benchmark_group("special");
    let o = QExponent::from_int(100);
    let q = QMonomial::q_int(1);
    let x = QMonomial::q(QExponent::new(1, 5));
    g.bench_function("jtp q^(1/5)", |b| b.iter(|| jtp(&x, &q, &o).unwrap()));
    let z = QMonomial::q(QExponent::new(2, 5));
    g.bench_function("appell_m order 40", |b| b.iter(|| appell_m(&x, &q, &z, &QExponent::from_int(40)).unwrap()));
    let spec = HeckeSpec::new(3, 5, 3, QMonomial::q_int(2), QMonomial::q_int(3), q.clone()).unwrap();
    g.bench_function("f_353", |b| b.iter(|| f_abc(&spec, &o).unwrap()));
    g.finish();
}

fn identity(c: &mut Criterion) {
    let mut g = c.benchmark_group("identity");
    g.sample_size(10);
    let o = QExponent::from_int(100);
    for (name, e) in identities() {
        g.bench_function(name, |b| b.iter(|| evaluate(&e, &o).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, kernel, special, identity);
criterion_main!(benches);
