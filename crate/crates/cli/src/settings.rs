//! Flag, config-file and preset resolution for sweep-like commands.

use std::path::PathBuf;

use clap::{Args, Parser, ValueEnum};

use narx_dd::features::LagSpec;
use narx_dd::sweep::{DataSource, Experiment, ExperimentKind, GridSpec, SweepConfig};
use narx_dd::sysdata::DEFAULT_SPLIT;

/// Parameter sets of the published experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// RFF min-norm, 100-point grid over [0.1, 1000] T, 10 repeats.
    Fig2,
    /// As fig2 with ridge solutions for lambda 1e-2 down to 1e-12.
    Fig3,
    /// As fig2 with the subset ensemble (B = 1000, lambda 1e-7) past m = T.
    Fig4,
    /// Forest, T = 3000, leaves over [0.1, 100] T.
    Fig5,
    /// RBF network (gamma 0.25, eta 5), ensemble B = 2000, lambda 1e-14.
    Rbf,
    /// RFF (gamma 0.2) on measured data, ensemble B = 2000, lambda 1e-14.
    Ce8,
}

impl Preset {
    fn kind(self) -> ExperimentKind {
        match self {
            Preset::Fig2 => ExperimentKind::RffMinNorm,
            Preset::Fig3 => ExperimentKind::RffRidge,
            Preset::Fig4 => ExperimentKind::RffEnsemble,
            Preset::Fig5 => ExperimentKind::Forest,
            Preset::Rbf => ExperimentKind::RbfEnsemble,
            Preset::Ce8 => ExperimentKind::Ce8Rff,
        }
    }
}

/// Sweep options. Every value is optional so that presets, config files
/// and flags can be layered (flags win, then the config file, then the
/// preset or the experiment's defaults).
#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Plain-text file of `key = value` lines using the flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// rff-minnorm, rff-ridge, rff-ensemble, rbf-ensemble, forest or ce8-rff.
    #[arg(long)]
    pub experiment: Option<ExperimentKind>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Comma-separated for ridge sweeps; a single value elsewhere.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub lambda: Option<Vec<f64>>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub ensemble_size: Option<u64>,
    #[arg(long)]
    pub sigma_v: Option<f64>,
    #[arg(long)]
    pub omega_c: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    pub train_len: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    pub test_len: Option<u64>,
    #[arg(long)]
    pub lo_ratio: Option<f64>,
    #[arg(long)]
    pub hi_ratio: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub points: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub repeats: Option<u64>,
    /// Master seed; falls back to $NARXDD_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_u: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_y: Option<u64>,
    /// Two-column `u,y` table used instead of simulated data.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Training fraction of `--data`.
    #[arg(long)]
    pub split: Option<f64>,
    /// Worker threads.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Skip the linear ARX baseline.
    #[arg(long)]
    pub no_baseline: bool,
    /// Fill the wall_time_s column.
    #[arg(long)]
    pub timing: bool,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        SweepArgs {
            $($f: $top.$f.or($base.$f),)*
            no_baseline: $top.no_baseline || $base.no_baseline,
            timing: $top.timing || $base.timing,
        }
    };
}

impl SweepArgs {
    fn overlay(self, top: SweepArgs) -> SweepArgs {
        let base = self;
        overlay!(base, top; preset, config, experiment, gamma, eta, lambda, ensemble_size, sigma_v, omega_c,
            train_len, test_len, lo_ratio, hi_ratio, points, repeats, seed, n_u, n_y, data, split, jobs, out)
    }
}

#[derive(Debug, Parser)]
#[command(name = "config", no_binary_name = true)]
struct ConfigFile {
    #[command(flatten)]
    args: SweepArgs,
}

const SWITCHES: [&str; 2] = ["no-baseline", "timing"];

/// Parses `key = value` lines into [`SweepArgs`] with the flag parser.
pub fn parse_config(text: &str) -> Result<SweepArgs, String> {
    let mut argv = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(format!("line {}: config files cannot include other config files", i + 1));
        }
        if SWITCHES.contains(&key.as_str()) {
            match value {
                "true" => argv.push(format!("--{key}")),
                "false" => {}
                _ => return Err(format!("line {}: `{key}` takes true or false", i + 1)),
            }
        } else {
            argv.push(format!("--{key}"));
            argv.push(value.to_string());
        }
    }
    ConfigFile::try_parse_from(argv).map(|c| c.args).map_err(|e| e.to_string())
}

pub enum ResolveError {
    Usage(String),
    Runtime(anyhow::Error),
}

/// Fully resolved sweep settings.
#[derive(Debug, Clone)]
pub struct Settings {
    pub config: SweepConfig,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub data: Option<PathBuf>,
}

struct Defaults {
    train_len: usize,
    grid: GridSpec,
    repeats: usize,
}

fn grid_defaults(kind: ExperimentKind) -> Defaults {
    match kind {
        ExperimentKind::Forest => Defaults {
            train_len: 3000,
            grid: GridSpec { lo_ratio: 0.1, hi_ratio: 100.0, points: 30 },
            repeats: 5,
        },
        ExperimentKind::Ce8Rff => Defaults {
            train_len: 400,
            grid: GridSpec { lo_ratio: 0.1, hi_ratio: 100.0, points: 30 },
            repeats: 5,
        },
        _ => Defaults {
            train_len: 400,
            grid: GridSpec { lo_ratio: 0.1, hi_ratio: 1000.0, points: 100 },
            repeats: 10,
        },
    }
}

fn default_gamma(kind: ExperimentKind) -> f64 {
    match kind {
        ExperimentKind::RbfEnsemble => 0.25,
        ExperimentKind::Ce8Rff => 0.2,
        _ => 0.6,
    }
}

fn default_lambdas(kind: ExperimentKind) -> Vec<f64> {
    match kind {
        ExperimentKind::RffRidge => vec![1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12],
        ExperimentKind::RbfEnsemble | ExperimentKind::Ce8Rff => vec![1e-14],
        _ => vec![1e-7],
    }
}

fn default_members(kind: ExperimentKind) -> usize {
    match kind {
        ExperimentKind::RffEnsemble => 1000,
        _ => 2000,
    }
}

fn single_lambda(kind: ExperimentKind, lambdas: &[f64]) -> Result<f64, ResolveError> {
    match lambdas {
        [l] => Ok(*l),
        _ => Err(ResolveError::Usage(format!("--lambda takes a single value for {kind}"))),
    }
}

impl Settings {
    /// Layers preset or experiment defaults, the `--config` file and the
    /// flags in `args`. `ce8` selects the measured-data defaults.
    pub fn resolve(args: SweepArgs, ce8: bool, env_seed: Option<u64>) -> Result<Settings, ResolveError> {
        let args = match &args.config {
            Some(path) => {
                let text = crate::read_config(path).map_err(ResolveError::Runtime)?;
                let file = parse_config(&text).map_err(|e| ResolveError::Usage(format!("{}: {e}", path.display())))?;
                file.overlay(args)
            }
            None => args,
        };
        let preset = args.preset.or(if ce8 { Some(Preset::Ce8) } else { None });
        let kind = args.experiment.or(preset.map(Preset::kind)).unwrap_or(ExperimentKind::RffMinNorm);
        let d = grid_defaults(preset.map_or(kind, Preset::kind));

        let lambdas = args.lambda.clone().unwrap_or_else(|| default_lambdas(kind));
        let members = args.ensemble_size.map_or(default_members(kind), |b| b as usize);
        let experiment = match kind {
            ExperimentKind::RffMinNorm => Experiment::RffMinNorm,
            ExperimentKind::RffRidge => Experiment::RffRidge { lambdas },
            ExperimentKind::RffEnsemble => Experiment::RffEnsemble { members, lambda_stab: single_lambda(kind, &lambdas)? },
            ExperimentKind::RbfEnsemble => Experiment::RbfEnsemble { members, lambda_stab: single_lambda(kind, &lambdas)? },
            ExperimentKind::Ce8Rff => Experiment::Ce8Rff { members, lambda_stab: single_lambda(kind, &lambdas)? },
            ExperimentKind::Forest => Experiment::Forest,
        };
        let seed = args.seed.or(env_seed).unwrap_or(0);
        let data = match &args.data {
            Some(path) => {
                let split = args.split.unwrap_or(DEFAULT_SPLIT);
                if !(split > 0.0 && split < 1.0) {
                    return Err(ResolveError::Usage(format!("split must lie in (0, 1), got {split}")));
                }
                DataSource::Table { path: path.clone(), split }
            }
            None => DataSource::chen(
                args.sigma_v.unwrap_or(0.1),
                args.omega_c.unwrap_or(0.7),
                args.train_len.map_or(d.train_len, |v| v as usize),
                args.test_len.map_or(100, |v| v as usize),
                seed,
            ),
        };
        let lags = LagSpec::new(args.n_u.unwrap_or(2) as usize, args.n_y.unwrap_or(2) as usize)
            .map_err(|e| ResolveError::Usage(e.to_string()))?;
        let config = SweepConfig {
            experiment,
            data,
            lags,
            gamma: args.gamma.unwrap_or(default_gamma(kind)),
            eta: args.eta.unwrap_or(5.0),
            grid: GridSpec {
                lo_ratio: args.lo_ratio.unwrap_or(d.grid.lo_ratio),
                hi_ratio: args.hi_ratio.unwrap_or(d.grid.hi_ratio),
                points: args.points.map_or(d.grid.points, |p| p as usize),
            },
            repeats: args.repeats.map_or(d.repeats, |r| r as usize),
            master_seed: seed,
            baseline: !args.no_baseline,
            record_wall_time: args.timing,
        };
        config.validate().map_err(|e| ResolveError::Usage(e.to_string()))?;
        Ok(Settings { config, jobs: args.jobs.map(|j| j as usize), out: args.out, data: args.data })
    }
}
