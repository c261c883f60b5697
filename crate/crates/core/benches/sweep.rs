use criterion::{criterion_group, criterion_main, Criterion};
use fpi_core::stieltjes::TransformOptions;
use fpi_core::sweep::{log_grid, transform_sweep, transform_sweep_sequential};
use fpi_core::TaylorFunction;

fn bench_sweep(c: &mut Criterion) {
    let opts = TransformOptions::default();
    let grid = log_grid(1e-4, 0.5, 64).unwrap();
    let cases = [
        ("exp_inf", TaylorFunction::exponential(1.0).unwrap(), f64::INFINITY, 0.0),
        ("binpoly_a1", TaylorFunction::binomial_poly(1, 2), 1.0, 0.5),
    ];
    for (name, f, a, nu) in cases {
        let mut group = c.benchmark_group(format!("sweep_{name}"));
        group.bench_function("sequential", |b| {
            b.iter(|| transform_sweep_sequential(&f, 2, nu, a, &grid, &opts))
        });
        group.bench_function("parallel", |b| b.iter(|| transform_sweep(&f, 2, nu, a, &grid, &opts)));
        group.finish();
    }
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
