use std::f64::consts::{PI, TAU};
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spinheat::lindblad::ReservoirConfig;
use spinheat::model::{CouplingConfig, FieldConfig};
use spinheat::observables::{theta_sweep, tm_sweep, ThetaPolicy};
use spinheat::steadystate::InitialState;
use spinheat::{Execution, SystemConfig, Tolerances};

fn config(kappa_m: f64) -> SystemConfig {
    SystemConfig {
        fields: FieldConfig::uniform(1.0, 0.1 * PI),
        coupling: CouplingConfig::ising(1.0, 1.0),
        reservoirs: ReservoirConfig {
            t_l: 1.0,
            t_m: 0.5,
            t_r: 0.1,
            kappa_l: 1e-3,
            kappa_m,
            kappa_r: 1e-3,
        },
        initial: InitialState::default(),
        tolerances: Tolerances::default(),
    }
}

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_theta(c: &mut Criterion) {
    let cfg = config(0.0);
    let mut group = c.benchmark_group("theta_sweep");
    for n in [73usize, 721] {
        let thetas: Vec<f64> = (0..n).map(|k| TAU * k as f64 / (n - 1) as f64).collect();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &thetas, |b, thetas| {
                b.iter(|| theta_sweep(black_box(&cfg), thetas, ThetaPolicy::CarryPrevious, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_tm(c: &mut Criterion) {
    let cfg = config(1e-3);
    let mut group = c.benchmark_group("tm_sweep");
    let t_ms: Vec<f64> = (1..=200).map(|k| 0.01 * k as f64).collect();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, t_ms.len()), &t_ms, |b, t_ms| {
            b.iter(|| tm_sweep(black_box(&cfg), t_ms, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_theta, bench_tm);
criterion_main!(benches);
