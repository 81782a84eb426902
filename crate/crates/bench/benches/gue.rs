use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpp_ensembles::rmt::{hbm_eigen_process, sample_gue};
use lpp_ensembles::{RngStream, TimeGrid};

fn gue(c: &mut Criterion) {
    let mut g = c.benchmark_group("gue_eigenvalues");
    for n in [5, 30, 50] {
        let mut rng = RngStream::new(3, n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| sample_gue(n, 1.0, &mut rng).unwrap().eigenvalues().unwrap())
        });
    }
    g.finish();
    let grid = TimeGrid::new(0.0, 5.0, 50).unwrap();
    let mut rng = RngStream::new(3, 0);
    c.bench_function("hbm_n5_50steps", |b| b.iter(|| hbm_eigen_process(5, grid, &mut rng).unwrap()));
}

criterion_group!(benches, gue);
criterion_main!(benches);
