use std::hint::black_box;

use chebydev_core::bestapprox::{discrete_minimax, solve_minimax, ApproxProblem, BasisKind, LpOptions};
use chebydev_core::constructions::{build_td, monomial_target};
use chebydev_core::signatures::{certify_lower_bound, td_certificate};
use chebydev_core::supnorm::{sup_norm, Domain, SearchOptions};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;

fn construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_td");
    for d in [4, 6, 8] {
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| b.iter(|| build_td(black_box(d)).unwrap()));
    }
    g.finish();
    c.bench_function("certify_t5", |b| {
        let cert = td_certificate(5).unwrap();
        b.iter(|| certify_lower_bound(black_box(&cert), 0.0))
    });
}

fn lp(c: &mut Criterion) {
    // Chebyshev extremal nodes, x^8 against degree 7.
    let n = 200;
    let xs: Vec<f64> = (0..n).map(|i| (std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()).collect();
    let phi = DMatrix::from_fn(n, 8, |r, k| xs[r].powi(k as i32));
    let f: Vec<f64> = xs.iter().map(|x| x.powi(8)).collect();
    c.bench_function("solve_minimax_interval", |b| {
        b.iter(|| solve_minimax(black_box(&phi), black_box(&f), &LpOptions::default()).unwrap())
    });

    let prob = ApproxProblem::new(monomial_target(&[1, 1, 1]), 2, Domain::Simplex(3), BasisKind::Symmetric, 16);
    c.bench_function("discrete_minimax_triple_product", |b| b.iter(|| discrete_minimax(black_box(&prob)).unwrap()));
}

fn search(c: &mut Criterion) {
    let t4 = build_td(4).unwrap().polynomial.to_f64();
    let opts = SearchOptions::default();
    let mut g = c.benchmark_group("sup_norm");
    g.sample_size(10);
    g.bench_function("t4_simplex", |b| b.iter(|| sup_norm(black_box(&t4), Domain::Simplex(4), 12, &opts).unwrap()));
    g.finish();
}

criterion_group!(benches, construction, lp, search);
criterion_main!(benches);
