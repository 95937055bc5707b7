use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use wmds_core::{FFContext, FFPoly, HEvaluator, RootSystem};

fn gauss_sums(c: &mut Criterion) {
    let mut group = c.benchmark_group("gauss_sum");
    for (q, n) in [(5, 2), (13, 3)] {
        let ctx = FFContext::new(q, n).unwrap();
        // A cubic modulus and a product of two linear factors.
        let cubic = FFPoly::from_coeffs(vec![1, 1, 0, 1]);
        let split = FFPoly::from_coeffs(vec![0, 1]).mul(&FFPoly::from_coeffs(vec![1, 1]), ctx.field());
        for (name, modulus) in [("cubic", cubic), ("t(t+1)", split)] {
            group.bench_function(format!("q{q}/n{n}/{name}"), |b| {
                b.iter(|| ctx.gauss_sum(&FFPoly::one(), black_box(&modulus), 1).unwrap())
            });
        }
    }
    group.finish();
}

fn global_coefficients(c: &mut Criterion) {
    let ctx = FFContext::new(5, 2).unwrap();
    let eval = HEvaluator::new(&ctx, RootSystem::from_code("A2", 2).unwrap()).unwrap();
    let f = ctx.field();
    let args = [FFPoly::t().pow(2, f).mul(&FFPoly::from_coeffs(vec![1, 1]), f), FFPoly::from_coeffs(vec![2, 0, 1])];
    let twist = [FFPoly::one(), FFPoly::t()];
    eval.evaluate(&args, &twist).unwrap();
    c.bench_function("h_general/A2/q5", |b| b.iter(|| eval.evaluate(black_box(&args), &twist).unwrap()));
}

criterion_group!(benches, gauss_sums, global_coefficients);
criterion_main!(benches);
