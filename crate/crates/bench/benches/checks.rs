use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use vakit::builders::{adjoint_module, diffeps3, exterior};
use vakit::c2::{c2_algebra, poisson_duality_iso};
use vakit::duality::{dualize_algebra, dualize_module};
use vakit::vertex::{algebra_suite, coalgebra_suite, ExponentBox};

fn jacobi(c: &mut Criterion) {
    let mut g = c.benchmark_group("algebra_suite");
    for n in [2, 3] {
        let a = exterior(n);
        g.bench_function(format!("exterior{n}"), |b| b.iter(|| black_box(algebra_suite(&a, Some(ExponentBox::symmetric(4))).run())));
    }
    let a = diffeps3();
    g.bench_function("diffeps3", |b| b.iter(|| black_box(algebra_suite(&a, Some(ExponentBox::symmetric(4))).run())));
    g.finish();

    let (c3, _) = dualize_algebra(&exterior(3)).unwrap();
    c.bench_function("coalgebra_suite/exterior3", |b| b.iter(|| black_box(coalgebra_suite(&c3, None).unwrap().run())));
}

fn dualize(c: &mut Criterion) {
    let a = exterior(3);
    c.bench_function("dualize/exterior3", |b| b.iter(|| black_box(dualize_algebra(&a).unwrap())));
    let m = adjoint_module(&exterior(3));
    c.bench_function("dualize/adjoint_exterior3", |b| b.iter(|| black_box(dualize_module(&m).unwrap())));
}

fn c2(c: &mut Criterion) {
    let a = diffeps3();
    c.bench_function("c2_algebra/diffeps3", |b| b.iter(|| black_box(c2_algebra(&a).unwrap())));
    let e = exterior(3);
    c.bench_function("iso/exterior3", |b| b.iter(|| black_box(poisson_duality_iso(&e))));
}

criterion_group!(benches, jacobi, dualize, c2);
criterion_main!(benches);
