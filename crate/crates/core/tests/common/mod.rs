//! Independent reference computations shared by the integration suites.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use narx_dd::estimators::{gradient, min_norm_ls, objective, ridge};
use narx_dd::features::{DesignMatrix, RegressorSet};
use narx_dd::forest::fit_tree;
use narx_dd::sweep::{run_sweep_with, write_records, DataSource, Experiment, GridSpec, SweepConfig};
use narx_dd::exec::with_threads;
use narx_dd::features::LagSpec;
use narx_dd::sysdata::ChenConfig;
use narx_dd::Execution;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn design(phi: DMatrix<f64>, y: DVector<f64>) -> DesignMatrix {
    DesignMatrix::new(phi, y).unwrap()
}

/// Random wide Gaussian design with `cond < max_cond`, resampled until it is.
pub fn well_conditioned(rng: &mut ChaCha8Rng, t: usize, m: usize, max_cond: f64) -> DesignMatrix {
    loop {
        let phi = gaussian(rng, t, m);
        let s = phi.clone().svd(false, false).singular_values;
        let cond = s.max() / s.min();
        if cond < max_cond {
            let y = DVector::from_fn(t, |_, _| rng.sample(StandardNormal));
            return design(phi, y);
        }
    }
}

fn rel(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// The min-norm solution against interpolants `theta_mn + P r` built from
/// an explicit null-space projector `P = I - Phi^T (Phi Phi^T)^{-1} Phi`.
pub fn min_norm_vs_null_space(seed: u64, t: usize, m: usize, samples: usize) -> Check {
    let mut rng = rng(seed);
    let d = well_conditioned(&mut rng, t, m, 1e4);
    let phi = d.phi();
    let inv = (phi * phi.transpose()).try_inverse().ok_or("singular Gram")?;
    let p = DMatrix::identity(m, m) - phi.transpose() * inv * phi;
    let theta = min_norm_ls(&d).map_err(|e| e.to_string())?.theta.to_dvector();
    let resid = (phi * &theta - d.targets()).norm();
    if resid > 1e-9 * d.targets().norm() {
        return Err(format!("min-norm residual {resid:e}"));
    }
    if (&p * &theta).norm() > 1e-9 * theta.norm() {
        return Err("min-norm solution has a null-space component".into());
    }
    for _ in 0..samples {
        let r = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let z = &theta + &p * r;
        if (phi * &z - d.targets()).norm() > 1e-8 * d.targets().norm() {
            return Err("null-space sample does not interpolate".into());
        }
        if theta.norm() > z.norm() * (1.0 + 1e-12) {
            return Err(format!("|theta_mn| {} > |z| {}", theta.norm(), z.norm()));
        }
    }
    Ok(())
}

pub const RIDGE_LAMBDAS: [f64; 4] = [1e-4, 1e-6, 1e-8, 1e-10];

/// Relative distances `|theta_l - theta_mn| / |theta_mn|` over
/// [`RIDGE_LAMBDAS`] followed by `lambda = 1e-12`.
pub fn ridge_gaps(d: &DesignMatrix) -> Vec<f64> {
    let mn = min_norm_ls(d).unwrap().theta.to_dvector();
    RIDGE_LAMBDAS
        .iter()
        .chain(&[1e-12])
        .map(|&l| rel(&ridge(d, l).unwrap().theta.to_dvector(), &mn))
        .collect()
}

pub fn ridge_limit(seed: u64, t: usize, m: usize) -> Check {
    let d = well_conditioned(&mut rng(seed), t, m, 1e4);
    let gaps = ridge_gaps(&d);
    if !gaps[..RIDGE_LAMBDAS.len()].windows(2).all(|w| w[1] < w[0]) {
        return Err(format!("gaps not decreasing: {gaps:?}"));
    }
    if gaps[RIDGE_LAMBDAS.len()] >= 1e-6 {
        return Err(format!("gap at 1e-12 is {:e}", gaps[RIDGE_LAMBDAS.len()]));
    }
    Ok(())
}

pub fn ridge_norm_monotone(seed: u64, t: usize, m: usize) -> Check {
    let mut rng = rng(seed);
    let d = design(gaussian(&mut rng, t, m), DVector::from_fn(t, |_, _| rng.sample(StandardNormal)));
    let mut last = f64::INFINITY;
    for k in -10..=6 {
        let n = ridge(&d, 10f64.powi(k)).unwrap().theta.norm2();
        if n > last * (1.0 + 1e-10) {
            return Err(format!("norm grew at lambda=1e{k}: {n} > {last}"));
        }
        last = n;
    }
    Ok(())
}

/// Analytic gradient against central differences of the objective.
pub fn gradient_vs_fd(seed: u64, t: usize, m: usize) -> Check {
    let mut rng = rng(seed);
    let d = design(gaussian(&mut rng, t, m), DVector::from_fn(t, |_, _| rng.sample(StandardNormal)));
    let theta = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let g = gradient(&d, &theta);
    let h = 1e-5;
    let mut fd = DVector::zeros(m);
    for i in 0..m {
        let mut a = theta.clone();
        let mut b = theta.clone();
        a[i] += h;
        b[i] -= h;
        fd[i] = (objective(&d, &a) - objective(&d, &b)) / (2.0 * h);
    }
    let err = rel(&fd, &g);
    if err > 1e-5 {
        return Err(format!("relative gradient error {err:e}"));
    }
    Ok(())
}

pub fn sse(v: &[f64]) -> f64 {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - mean).powi(2)).sum()
}

/// Smallest SSE over every single split of every feature, by brute force.
pub fn best_split_sse(rows: &[Vec<f64>], y: &[f64]) -> f64 {
    let mut best = sse(y);
    for f in 0..rows[0].len() {
        let mut vals: Vec<f64> = rows.iter().map(|r| r[f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let thr = 0.5 * (w[0] + w[1]);
            let (l, r): (Vec<_>, Vec<_>) = rows.iter().zip(y).partition(|(x, _)| x[f] <= thr);
            let l: Vec<f64> = l.into_iter().map(|(_, &v)| v).collect();
            let r: Vec<f64> = r.into_iter().map(|(_, &v)| v).collect();
            best = best.min(sse(&l) + sse(&r));
        }
    }
    best
}

pub fn tree_split_vs_enumeration(rows: &[Vec<f64>], y: &[f64], seed: u64) -> Check {
    let regs = RegressorSet::from_rows(rows, y.to_vec()).map_err(|e| e.to_string())?;
    let tree = fit_tree(&regs, 2, seed).map_err(|e| e.to_string())?;
    let pred: Vec<f64> = rows.iter().map(|r| tree.predict(r).unwrap()).collect();
    let got: f64 = pred.iter().zip(y).map(|(p, t)| (p - t).powi(2)).sum();
    let want = best_split_sse(rows, y);
    if (got - want).abs() > 1e-9 * (1.0 + want) {
        return Err(format!("tree SSE {got} vs exhaustive {want}"));
    }
    Ok(())
}

pub fn random_tree_instance(seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = rng(seed);
    let n = rng.random_range(2..=20);
    let f = rng.random_range(1..=3);
    // Coarse values make ties and duplicates common.
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..f).map(|_| rng.random_range(0..6) as f64).collect()).collect();
    let y: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
    (rows, y)
}

pub fn small_sweep(experiment: Experiment, seed: u64) -> SweepConfig {
    SweepConfig {
        experiment,
        data: DataSource::Chen {
            train: ChenConfig { sigma_v: 0.1, omega_c: 0.7, length: 60, seed: 11 },
            test: ChenConfig { sigma_v: 0.1, omega_c: 0.7, length: 30, seed: 12 },
        },
        lags: LagSpec::default(),
        gamma: 0.6,
        eta: 5.0,
        grid: GridSpec { lo_ratio: 0.2, hi_ratio: 5.0, points: 5 },
        repeats: 3,
        master_seed: seed,
        baseline: true,
        record_wall_time: false,
    }
}

/// Records CSV bytes of a serial run and of a run on a 4-thread pool.
pub fn schedule_bytes(cfg: &SweepConfig) -> (Vec<u8>, Vec<u8>) {
    let dir = tempfile::tempdir().unwrap();
    let serial = run_sweep_with(cfg, Execution::Serial).unwrap();
    let parallel = with_threads(Some(4), || run_sweep_with(cfg, Execution::Parallel)).unwrap().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_records(&a, &serial.records).unwrap();
    write_records(&b, &parallel.records).unwrap();
    (std::fs::read(a).unwrap(), std::fs::read(b).unwrap())
}
