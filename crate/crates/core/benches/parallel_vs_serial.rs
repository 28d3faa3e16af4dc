use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use narx_dd::estimators::subset_ensemble_with;
use narx_dd::features::{apply_map, build_regressors, FeatureMap, LagSpec};
use narx_dd::sweep::{run_sweep_with, DataSource, Experiment, GridSpec, SweepConfig};
use narx_dd::sysdata::{generate_chen, ChenConfig};
use narx_dd::Execution;

const MODES: [(&str, Execution); 2] = [("serial", Execution::Serial), ("parallel", Execution::Parallel)];

fn sweep_cfg() -> SweepConfig {
    SweepConfig {
        experiment: Experiment::RffMinNorm,
        data: DataSource::Chen {
            train: ChenConfig { sigma_v: 0.1, omega_c: 0.7, length: 120, seed: 1 },
            test: ChenConfig { sigma_v: 0.1, omega_c: 0.7, length: 60, seed: 2 },
        },
        lags: LagSpec::default(),
        gamma: 0.6,
        eta: 5.0,
        grid: GridSpec { lo_ratio: 0.1, hi_ratio: 10.0, points: 8 },
        repeats: 4,
        master_seed: 7,
        baseline: false,
        record_wall_time: false,
    }
}

fn sweep(c: &mut Criterion) {
    let cfg = sweep_cfg();
    let mut g = c.benchmark_group("rff_minnorm_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_sweep_with(&cfg, exec).unwrap())
        });
    }
    g.finish();
}

fn ensemble(c: &mut Criterion) {
    let series = generate_chen(&ChenConfig { sigma_v: 0.1, omega_c: 0.7, length: 202, seed: 3 }).unwrap();
    let regs = build_regressors(&series, LagSpec::default()).unwrap();
    let map = FeatureMap::rff(4, 4 * regs.rows(), 0.6, 4).unwrap();
    let design = apply_map(&map, &regs).unwrap();
    let mut g = c.benchmark_group("subset_ensemble_b64");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| subset_ensemble_with(&design, 64, 1e-7, 5, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sweep, ensemble);
criterion_main!(benches);
