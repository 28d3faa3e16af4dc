//! `narxdd`: generate Chen datasets, run capacity sweeps and evaluate
//! single models from the command line.

mod settings;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use narx_dd::exec::with_threads;
use narx_dd::sweep::{
    evaluate_capacity, fit_baseline, format_f64, run_sweep, summarize, summary_file_name, write_records,
    write_summary, PreparedData,
};
use narx_dd::sysdata::{generate_chen, write_table, ChenConfig};
use narx_dd::Execution;

pub use settings::{Preset, Settings, SweepArgs};

/// Environment variable consulted when no seed is given.
pub const SEED_ENV: &str = "NARXDD_SEED";

#[derive(Debug, Parser)]
#[command(name = "narxdd", version, about = "Double-descent experiments for nonlinear ARX identification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write one Chen-system realization as a `u,y` table.
    Generate(GenerateArgs),
    /// Run a capacity sweep and write records and summary CSVs.
    Sweep(SweepArgs),
    /// Fit one model at one capacity and print its metrics.
    Eval(EvalArgs),
    /// Capacity sweep on a measured two-column data file.
    Ce8(SweepArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 400)]
    length: usize,
    #[arg(long, default_value_t = 0.1)]
    sigma_v: f64,
    #[arg(long, default_value_t = 0.7)]
    omega_c: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Number of features, or total leaves for forests.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    capacity: u64,
    #[arg(long, default_value_t = 0)]
    repeat: usize,
}

fn env_seed() -> anyhow::Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map(Some).with_context(|| format!("{SEED_ENV}=`{v}` is not an unsigned integer")),
        Err(_) => Ok(None),
    }
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let seed = args.seed.or(env_seed()?).unwrap_or(0);
    let series = generate_chen(&ChenConfig { sigma_v: args.sigma_v, omega_c: args.omega_c, length: args.length, seed })?;
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    write_table(&series, &args.out)?;
    println!("wrote {} samples to {}", series.len(), args.out.display());
    Ok(())
}

fn sweep(settings: Settings) -> anyhow::Result<()> {
    let Some(out) = settings.out.clone() else { bail!("--out is required") };
    let cfg = settings.config.clone();
    let run = with_threads(settings.jobs, || run_sweep(&cfg))??;
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let records = out.join("records.csv");
    write_records(&records, &run.records)?;
    println!("wrote {} records to {}", run.records.len(), records.display());
    let summaries = summarize(&run.records, run.baseline.as_ref());
    let single = summaries.len() == 1;
    for s in &summaries {
        let path = out.join(summary_file_name(&s.experiment, single));
        write_summary(&path, s)?;
        println!("wrote summary of {} to {}", s.experiment, path.display());
    }
    if let Some(b) = run.baseline {
        println!("linear baseline: test_mse_osa={} test_mse_free={}", format_f64(b.test_mse_osa), format_f64(b.test_mse_free));
    }
    Ok(())
}

fn eval(settings: Settings, capacity: usize, repeat: usize) -> anyhow::Result<()> {
    let cfg = settings.config.clone();
    let data = PreparedData::load(&cfg.data, cfg.lags)?;
    let exec = Execution::default();
    let recs = with_threads(settings.jobs, || evaluate_capacity(&cfg, &data, capacity, repeat, exec))??;
    println!("rows={} capacity={capacity} ratio={}", data.rows(), format_f64(capacity as f64 / data.rows() as f64));
    for r in recs {
        println!(
            "{} train_mse_osa={} test_mse_osa={} train_mse_free={} test_mse_free={} param_norm={} cond={} diverged={}",
            r.experiment,
            format_f64(r.train_mse_osa),
            format_f64(r.test_mse_osa),
            format_f64(r.train_mse_free),
            format_f64(r.test_mse_free),
            r.param_norm.map(format_f64).unwrap_or_else(|| "-".into()),
            r.cond.map(format_f64).unwrap_or_else(|| "-".into()),
            r.diverged,
        );
    }
    if cfg.baseline {
        let b = fit_baseline(&cfg, &data)?;
        println!("linear baseline test_mse_osa={} test_mse_free={}", format_f64(b.test_mse_osa), format_f64(b.test_mse_free));
    }
    Ok(())
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

fn resolve(args: SweepArgs, ce8: bool) -> Result<Settings, Failure> {
    Settings::resolve(args, ce8, env_seed().map_err(Failure::Runtime)?).map_err(|e| match e {
        settings::ResolveError::Usage(m) => Failure::Usage(m),
        settings::ResolveError::Runtime(e) => Failure::Runtime(e),
    })
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate(a) => generate(a).map_err(Failure::Runtime),
        Command::Sweep(a) => sweep(resolve(a, false)?).map_err(Failure::Runtime),
        Command::Ce8(a) => {
            let s = resolve(a, true)?;
            if s.data.is_none() {
                return Err(Failure::Usage("ce8 requires --data <FILE>".into()));
            }
            sweep(s).map_err(Failure::Runtime)
        }
        Command::Eval(a) => {
            let s = resolve(a.sweep, false)?;
            eval(s, a.capacity as usize, a.repeat).map_err(Failure::Runtime)
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code: 0 on success, 2 on usage errors, 1 on runtime
/// failures.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Reads `path` if given; used by [`Settings::resolve`] for `--config`.
pub(crate) fn read_config(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))
}
