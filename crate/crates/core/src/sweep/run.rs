use std::time::Instant;

use super::config::{DataSource, Experiment, SweepConfig};
use super::grid::build_grid;
use crate::error::Result;
use crate::estimators::{min_norm_ls, ridge_path, subset_ensemble_with, SolveReport};
use crate::evaluation::{free_run_mse, one_step_mse, Predictor};
use crate::exec::{map_indexed, Execution};
use crate::features::{apply_map, build_regressors, FeatureMap, LagSpec, RegressorSet};
use crate::forest::fit_forest_with;
use crate::seed::{self, streams};
use crate::sysdata::TimeSeries;

/// One (experiment label, capacity, repeat) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub experiment: String,
    pub capacity: usize,
    /// `capacity / T`.
    pub ratio: f64,
    pub repeat: usize,
    pub seed: u64,
    pub train_mse_osa: f64,
    pub test_mse_osa: f64,
    pub train_mse_free: f64,
    pub test_mse_free: f64,
    pub param_norm: Option<f64>,
    pub cond: Option<f64>,
    /// A free run left the bound, or the solver failed.
    pub diverged: bool,
    pub wall_time_s: Option<f64>,
}

/// Linear ARX reference fitted on the same data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baseline {
    pub capacity: usize,
    pub ratio: f64,
    pub train_mse_osa: f64,
    pub test_mse_osa: f64,
    pub train_mse_free: f64,
    pub test_mse_free: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRun {
    pub records: Vec<SweepRecord>,
    pub baseline: Option<Baseline>,
    /// Number of regressor rows in the training set.
    pub train_rows: usize,
    pub grid: Vec<usize>,
    pub data_checksum: u64,
}

/// Training and test data, loaded once and shared by every cell.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub train: TimeSeries,
    pub test: TimeSeries,
    pub regressors: RegressorSet,
}

impl PreparedData {
    pub fn load(source: &DataSource, lags: LagSpec) -> Result<Self> {
        let (train, test) = source.load()?;
        let regressors = build_regressors(&train, lags)?;
        // Fail early rather than in every cell.
        build_regressors(&test, lags)?;
        Ok(Self { train, test, regressors })
    }

    pub fn rows(&self) -> usize {
        self.regressors.rows()
    }

    pub fn checksum(&self) -> u64 {
        seed::derive(self.train.checksum(), self.test.checksum())
    }
}

pub fn cell_seed(master: u64, capacity: usize, repeat: usize) -> u64 {
    seed::derive_path(master, &[streams::CELL, capacity as u64, repeat as u64])
}

struct Metrics {
    train_osa: f64,
    test_osa: f64,
    train_free: f64,
    test_free: f64,
    diverged: bool,
}

fn metrics(p: &Predictor, data: &PreparedData) -> Result<Metrics> {
    let train_osa = one_step_mse(p, &data.train)?;
    let test_osa = one_step_mse(p, &data.test)?;
    let train_free = free_run_mse(p, &data.train)?;
    let test_free = free_run_mse(p, &data.test)?;
    Ok(Metrics {
        diverged: train_free.diverged || test_free.diverged,
        train_osa: train_osa.mse,
        test_osa: test_osa.mse,
        train_free: train_free.mse,
        test_free: test_free.mse,
    })
}

fn solve_linear(cfg: &SweepConfig, data: &PreparedData, map: &FeatureMap, cell: u64, exec: Execution) -> Result<Vec<SolveReport>> {
    let design = apply_map(map, &data.regressors)?;
    let rows = data.rows();
    match &cfg.experiment {
        Experiment::RffMinNorm => Ok(vec![min_norm_ls(&design)?]),
        Experiment::RffRidge { lambdas } => ridge_path(&design, lambdas),
        Experiment::RffEnsemble { members, lambda_stab }
        | Experiment::RbfEnsemble { members, lambda_stab }
        | Experiment::Ce8Rff { members, lambda_stab } => {
            if map.m() <= rows {
                Ok(vec![min_norm_ls(&design)?])
            } else {
                let s = seed::derive(cell, streams::ENSEMBLE);
                Ok(vec![subset_ensemble_with(&design, *members, *lambda_stab, s, exec)?])
            }
        }
        Experiment::Forest => unreachable!("forest cells do not build a design"),
    }
}

fn failed(label: String, capacity: usize, rows: usize, repeat: usize, seed: u64) -> SweepRecord {
    SweepRecord {
        experiment: label,
        capacity,
        ratio: capacity as f64 / rows as f64,
        repeat,
        seed,
        train_mse_osa: f64::INFINITY,
        test_mse_osa: f64::INFINITY,
        train_mse_free: f64::INFINITY,
        test_mse_free: f64::INFINITY,
        param_norm: None,
        cond: None,
        diverged: true,
        wall_time_s: None,
    }
}

fn cell_records(cfg: &SweepConfig, data: &PreparedData, capacity: usize, repeat: usize, exec: Execution) -> Result<Vec<SweepRecord>> {
    let rows = data.rows();
    let cell = cell_seed(cfg.master_seed, capacity, repeat);
    let record = |label: String, m: Metrics, norm: Option<f64>, cond: Option<f64>| SweepRecord {
        experiment: label,
        capacity,
        ratio: capacity as f64 / rows as f64,
        repeat,
        seed: cell,
        train_mse_osa: m.train_osa,
        test_mse_osa: m.test_osa,
        train_mse_free: m.train_free,
        test_mse_free: m.test_free,
        param_norm: norm,
        cond,
        diverged: m.diverged,
        wall_time_s: None,
    };
    let labels = cfg.experiment.labels();
    if let Experiment::Forest = cfg.experiment {
        let forest = fit_forest_with(&data.regressors, capacity, seed::derive(cell, streams::FOREST), exec)?;
        let p = Predictor::forest(cfg.lags, forest)?;
        let m = metrics(&p, data)?;
        return Ok(vec![record(labels[0].clone(), m, None, None)]);
    }
    let fseed = seed::derive(cell, streams::FEATURES);
    let map = match cfg.experiment {
        Experiment::RbfEnsemble { .. } => FeatureMap::rbf(cfg.lags.dim(), capacity, cfg.gamma, cfg.eta, fseed)?,
        _ => FeatureMap::rff(cfg.lags.dim(), capacity, cfg.gamma, fseed)?,
    };
    let reports = match solve_linear(cfg, data, &map, cell, exec) {
        Ok(r) => r,
        Err(_) => return Ok(labels.into_iter().map(|l| failed(l, capacity, rows, repeat, cell)).collect()),
    };
    labels
        .into_iter()
        .zip(reports)
        .map(|(label, report)| {
            let norm = report.theta.norm2();
            let p = Predictor::linear_in_params(cfg.lags, map.clone(), report.theta)?;
            let m = metrics(&p, data)?;
            Ok(record(label, m, Some(norm), Some(report.cond)))
        })
        .collect()
}

/// Fits and scores the configured experiment at one capacity.
///
/// Solver failures produce flagged records (infinite errors, `diverged`)
/// instead of an error.
pub fn evaluate_capacity(
    cfg: &SweepConfig,
    data: &PreparedData,
    capacity: usize,
    repeat: usize,
    exec: Execution,
) -> Result<Vec<SweepRecord>> {
    let start = Instant::now();
    let mut recs = cell_records(cfg, data, capacity, repeat, exec)?;
    if cfg.record_wall_time {
        let dt = start.elapsed().as_secs_f64();
        for r in &mut recs {
            r.wall_time_s = Some(dt);
        }
    }
    Ok(recs)
}

/// Linear ARX model (lagged signals plus a bias) solved by least squares.
pub fn fit_baseline(cfg: &SweepConfig, data: &PreparedData) -> Result<Baseline> {
    let map = FeatureMap::linear(cfg.lags.dim())?;
    let design = apply_map(&map, &data.regressors)?;
    let report = min_norm_ls(&design)?;
    let p = Predictor::linear_in_params(cfg.lags, map.clone(), report.theta)?;
    let m = metrics(&p, data)?;
    Ok(Baseline {
        capacity: map.m(),
        ratio: map.m() as f64 / data.rows() as f64,
        train_mse_osa: m.train_osa,
        test_mse_osa: m.test_osa,
        train_mse_free: m.train_free,
        test_mse_free: m.test_free,
    })
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepRun> {
    run_sweep_with(cfg, Execution::default())
}

/// Runs every (capacity, repeat) cell of the grid. Records come back in
/// (capacity, repeat, label) order regardless of `exec`.
pub fn run_sweep_with(cfg: &SweepConfig, exec: Execution) -> Result<SweepRun> {
    cfg.validate()?;
    let data = PreparedData::load(&cfg.data, cfg.lags)?;
    let rows = data.rows();
    let grid = build_grid(rows, cfg.grid.lo_ratio, cfg.grid.hi_ratio, cfg.grid.points)?;
    let cells: Vec<(usize, usize)> = grid
        .iter()
        .flat_map(|&m| (0..cfg.repeats).map(move |r| (m, r)))
        .collect();
    let results = map_indexed(cells.len(), exec, |i| {
        let (m, r) = cells[i];
        evaluate_capacity(cfg, &data, m, r, exec)
    });
    let mut records = Vec::with_capacity(cells.len());
    for r in results {
        records.extend(r?);
    }
    let baseline = if cfg.baseline { Some(fit_baseline(cfg, &data)?) } else { None };
    Ok(SweepRun { records, baseline, train_rows: rows, grid, data_checksum: data.checksum() })
}
