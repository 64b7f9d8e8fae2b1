//! Parallel vs sequential execution of the t1 line search and of a sweep.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wpcn_core::experiments::{run_sweep, SweepKind, SweepSpec};
use wpcn_core::solver::solve_with_coefficients;
use wpcn_core::{coefficients, ChannelSet, Execution, Geometry, Scheme, SolverConfig, SystemParams};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn line_search(c: &mut Criterion) {
    let params = SystemParams::default();
    let coeffs = coefficients(&params, &ChannelSet::from_geometry(&Geometry::default()).unwrap()).unwrap();
    let mut group = c.benchmark_group("line_search");
    for scheme in [Scheme::DtbNjd, Scheme::DtbJd] {
        for (name, execution) in MODES {
            let cfg = SolverConfig { execution, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(scheme.tag(), name), &cfg, |b, cfg| {
                b.iter(|| solve_with_coefficients(scheme, &coeffs, &params, cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let spec = SweepSpec { num_points: 4, ..SweepSpec::figure(SweepKind::InterUserDistance) };
    let mut group = c.benchmark_group("sweep_fig9_4_points");
    group.sample_size(10);
    for (name, execution) in MODES {
        let cfg = SolverConfig { t1_step: 1e-2, execution, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| run_sweep(&spec, cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, line_search, sweep);
criterion_main!(benches);
