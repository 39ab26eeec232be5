use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};
use delta_bench::model;
use delta_core::numeric::{check_identity, Check, Grid, DEFAULT_LENGTHS, DEFAULT_SEED};
use delta_core::{rosenfeld_groebner, Budget, ModelName, Regime};

fn reducible_cells(c: &mut Criterion) {
    let mut g = c.benchmark_group("rosenfeld_groebner");
    for (name, regime) in [
        (ModelName::Stokes3d, Regime::Incompressible),
        (ModelName::RansStokes, Regime::Incompressible),
        (ModelName::Streamfunction2d, Regime::Stationary),
        (ModelName::Prandtl, Regime::Incompressible),
    ] {
        let (eqs, r) = model(name, regime);
        g.bench_function(format!("{name}/{}", regime.code()), |b| {
            b.iter(|| rosenfeld_groebner(&eqs, &r, Budget::default()).unwrap())
        });
    }
    g.finish();
}

fn capped_cell(c: &mut Criterion) {
    let mut g = c.benchmark_group("capped");
    g.sample_size(10).measurement_time(Duration::from_secs(10));
    let (eqs, r) = model(ModelName::Ns3d, Regime::Incompressible);
    g.bench_function("ns3d/In", |b| {
        b.iter(|| rosenfeld_groebner(&eqs, &r, Budget::default()).unwrap())
    });
    g.finish();
}

fn identity_checks(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    for dim in [2, 3] {
        let grid = Grid::new(DEFAULT_LENGTHS, 16, dim).unwrap();
        g.bench_function(format!("id_laplace/{dim}d"), |b| {
            b.iter(|| check_identity(Check::IdLaplace, &grid, 31, DEFAULT_SEED).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, reducible_cells, capped_cell, identity_checks);
criterion_main!(benches);
