use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::features::LagSpec;
use crate::seed::{self, streams};
use crate::sysdata::{load_ce8, make_datasets, ChenConfig, TimeSeries};

/// Experiment family; each binds a model class to a solution mechanism.
#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    /// Random Fourier features, minimum-norm solution at every capacity.
    RffMinNorm,
    /// Random Fourier features, one ridge solution per `lambda`.
    RffRidge { lambdas: Vec<f64> },
    /// Minimum-norm up to the threshold, subset ensemble beyond it.
    RffEnsemble { members: usize, lambda_stab: f64 },
    /// RBF network features with the same mechanism as `RffEnsemble`.
    RbfEnsemble { members: usize, lambda_stab: f64 },
    /// Single tree up to the threshold, interpolating forest beyond it.
    Forest,
    /// `RffEnsemble` on measured CE8 data.
    Ce8Rff { members: usize, lambda_stab: f64 },
}

/// Experiment names without parameters, as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    RffMinNorm,
    RffRidge,
    RffEnsemble,
    RbfEnsemble,
    Forest,
    Ce8Rff,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::RffMinNorm,
        ExperimentKind::RffRidge,
        ExperimentKind::RffEnsemble,
        ExperimentKind::RbfEnsemble,
        ExperimentKind::Forest,
        ExperimentKind::Ce8Rff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RffMinNorm => "rff-minnorm",
            ExperimentKind::RffRidge => "rff-ridge",
            ExperimentKind::RffEnsemble => "rff-ensemble",
            ExperimentKind::RbfEnsemble => "rbf-ensemble",
            ExperimentKind::Forest => "forest",
            ExperimentKind::Ce8Rff => "ce8-rff",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid("experiment", format!("unknown experiment `{s}`")))
    }
}

impl Experiment {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Experiment::RffMinNorm => ExperimentKind::RffMinNorm,
            Experiment::RffRidge { .. } => ExperimentKind::RffRidge,
            Experiment::RffEnsemble { .. } => ExperimentKind::RffEnsemble,
            Experiment::RbfEnsemble { .. } => ExperimentKind::RbfEnsemble,
            Experiment::Forest => ExperimentKind::Forest,
            Experiment::Ce8Rff { .. } => ExperimentKind::Ce8Rff,
        }
    }

    /// Labels written to the `experiment` column, one per solution produced
    /// at each grid cell.
    pub fn labels(&self) -> Vec<String> {
        match self {
            Experiment::RffRidge { lambdas } => lambdas
                .iter()
                .map(|l| format!("{}[lambda={l:e}]", self.kind()))
                .collect(),
            _ => vec![self.kind().name().to_string()],
        }
    }
}

/// Where the train/test series come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Chen { train: ChenConfig, test: ChenConfig },
    Table { path: PathBuf, split: f64 },
    Series { train: TimeSeries, test: TimeSeries },
}

impl DataSource {
    /// Independent train and test realizations of Chen's system with data
    /// seeds derived from `master_seed`.
    pub fn chen(sigma_v: f64, omega_c: f64, train_len: usize, test_len: usize, master_seed: u64) -> Self {
        let cfg = |length, stream| ChenConfig { sigma_v, omega_c, length, seed: seed::derive(master_seed, stream) };
        DataSource::Chen { train: cfg(train_len, streams::TRAIN_DATA), test: cfg(test_len, streams::TEST_DATA) }
    }

    pub fn load(&self) -> Result<(TimeSeries, TimeSeries)> {
        match self {
            DataSource::Chen { train, test } => make_datasets(train, test),
            DataSource::Table { path, split } => load_ce8(path, *split),
            DataSource::Series { train, test } => Ok((train.clone(), test.clone())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo_ratio: f64,
    pub hi_ratio: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub experiment: Experiment,
    pub data: DataSource,
    pub lags: LagSpec,
    /// Feature bandwidth (RFF and RBF).
    pub gamma: f64,
    /// RBF center variance.
    pub eta: f64,
    pub grid: GridSpec,
    pub repeats: usize,
    pub master_seed: u64,
    /// Also fit the linear ARX baseline.
    pub baseline: bool,
    /// Fill the `wall_time_s` column. Off by default so that equal
    /// configurations produce byte-identical output.
    pub record_wall_time: bool,
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(invalid(name, format!("must be finite and > 0, got {v}")));
    }
    Ok(())
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let g = self.grid;
        positive("lo_ratio", g.lo_ratio)?;
        positive("hi_ratio", g.hi_ratio)?;
        if !(g.lo_ratio < g.hi_ratio) {
            return Err(invalid("lo_ratio", format!("must be below hi_ratio ({} >= {})", g.lo_ratio, g.hi_ratio)));
        }
        if g.points < 2 {
            return Err(invalid("points", format!("must be at least 2, got {}", g.points)));
        }
        if self.repeats == 0 {
            return Err(invalid("repeats", "must be at least 1"));
        }
        match &self.experiment {
            Experiment::RffRidge { lambdas } => {
                if lambdas.is_empty() {
                    return Err(invalid("lambda", "ridge sweeps need at least one value"));
                }
                for &l in lambdas {
                    positive("lambda", l)?;
                }
            }
            Experiment::RffEnsemble { members, lambda_stab }
            | Experiment::RbfEnsemble { members, lambda_stab }
            | Experiment::Ce8Rff { members, lambda_stab } => {
                if *members == 0 {
                    return Err(invalid("ensemble_size", "must be at least 1"));
                }
                positive("lambda", *lambda_stab)?;
            }
            Experiment::RffMinNorm | Experiment::Forest => {}
        }
        if !matches!(self.experiment, Experiment::Forest) {
            positive("gamma", self.gamma)?;
        }
        if matches!(self.experiment, Experiment::RbfEnsemble { .. }) {
            positive("eta", self.eta)?;
        }
        if let DataSource::Chen { train, test } = &self.data {
            train.validate()?;
            test.validate()?;
        }
        Ok(())
    }
}
