use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use exwkb::borel;
use exwkb::oracle;
use exwkb::par::{self, Exec};
use exwkb::potential::{Characteristic, Polynomial};
use exwkb::series::chi_series;
use exwkb::stokes::{build_graph, StokesGraph};
use exwkb::Complex64 as C;

fn airy() -> StokesGraph {
    build_graph(&Characteristic::from_q(Polynomial::real(&[0.0, 1.0])), 0.0).unwrap()
}

fn grid() -> Vec<C> {
    let mut v = vec![];
    for i in 0..4 {
        for j in 0..4 {
            v.push(C::new(1.0 + 0.5 * i as f64, -0.6 + 0.4 * j as f64));
        }
    }
    v
}

fn modes() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)]
}

fn resummation(c: &mut Criterion) {
    let g = airy();
    let xs = grid();
    let lam = C::new(10.0, 0.0);
    let mut group = c.benchmark_group("borel_pade_grid");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                par::map(&xs, exec, |&x| {
                    let s = chi_series(&g, 1, x, 20).unwrap();
                    borel::resum(&s, lam, 10, 10, None).unwrap().value
                })
            })
        });
    }
    group.finish();
}

fn oracle_grid(c: &mut Criterion) {
    let g = airy();
    let xs = grid();
    let lam = C::new(10.0, 0.0);
    let mut group = c.benchmark_group("fundamental_chi_grid");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| par::map(&xs, exec, |&x| oracle::fundamental_chi(&g, 1, x, lam).unwrap().sample.chi))
        });
    }
    group.finish();
}

fn lambda_sweep(c: &mut Criterion) {
    let g = airy();
    let probes = oracle::default_probes(&g, 1, 2);
    let lambdas: Vec<C> = (1..=8).map(|k| C::new(5.0 * k as f64, 0.0)).collect();
    let mut group = c.benchmark_group("connection_lambda_sweep");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| par::map(&lambdas, exec, |&l| oracle::connection(&g, 3, (1, 2), l, &probes).unwrap().beta))
        });
    }
    group.finish();
}

criterion_group!(benches, resummation, oracle_grid, lambda_sweep);
criterion_main!(benches);
