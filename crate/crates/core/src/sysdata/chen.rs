use rand_distr::{Distribution, StandardNormal};

use super::filter::{apply_fir, design_lowpass, INPUT_FILTER_TAPS};
use super::{Signal, TimeSeries};
use crate::error::{invalid, Error, Result};
use crate::seed;

/// Magnitude beyond which a simulated output is treated as divergent.
pub const DIVERGENCE_BOUND: f64 = 1e6;

/// Parameters of one synthetic realization of Chen's system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChenConfig {
    /// Process-noise standard deviation.
    pub sigma_v: f64,
    /// Input low-pass cutoff as a fraction of Nyquist.
    pub omega_c: f64,
    pub length: usize,
    pub seed: u64,
}

impl ChenConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_v >= 0.0) || !self.sigma_v.is_finite() {
            return Err(invalid("sigma_v", format!("must be finite and >= 0, got {}", self.sigma_v)));
        }
        check_cutoff(self.omega_c)?;
        if self.length < 3 {
            return Err(invalid("length", format!("must be at least 3, got {}", self.length)));
        }
        Ok(())
    }
}

fn check_cutoff(omega_c: f64) -> Result<()> {
    if !(omega_c > 0.0 && omega_c <= 1.0) {
        return Err(invalid("omega_c", format!("must lie in (0, 1], got {omega_c}")));
    }
    Ok(())
}

/// Unit-variance Gaussian white noise passed through the 64-tap low-pass.
/// No rescaling is applied after filtering.
pub fn gen_filtered_input(length: usize, omega_c: f64, seed: u64) -> Result<Signal> {
    if length == 0 {
        return Err(invalid("length", "must be positive"));
    }
    check_cutoff(omega_c)?;
    let mut rng = seed::rng(seed);
    let white: Vec<f64> = (0..length).map(|_| StandardNormal.sample(&mut rng)).collect();
    let taps = design_lowpass(INPUT_FILTER_TAPS, omega_c);
    Signal::new(apply_fir(&taps, &white), seed)
}

/// Noise-free one-step map of Chen's system for regressor
/// `(u[t-1], u[t-2], y[t-1], y[t-2])`.
pub fn chen_step(u1: f64, u2: f64, y1: f64, y2: f64) -> f64 {
    let e = (-y1 * y1).exp();
    (0.8 - 0.5 * e) * y1 - (0.3 + 0.9 * e) * y2 + u1 + 0.2 * u2 + 0.1 * u1 * u2
}

/// Drives Chen's system with `input`. The first two outputs are zero; every
/// later output receives an independent `N(0, sigma_v^2)` disturbance drawn
/// from the stream seeded by `seed`.
pub fn simulate_chen(input: &Signal, sigma_v: f64, seed: u64) -> Result<TimeSeries> {
    let u = input.values();
    if u.len() < 3 {
        return Err(Error::SeriesTooShort { len: u.len(), horizon: 2 });
    }
    if !(sigma_v >= 0.0) || !sigma_v.is_finite() {
        return Err(invalid("sigma_v", format!("must be finite and >= 0, got {sigma_v}")));
    }
    let mut rng = seed::rng(seed);
    let mut y = vec![0.0; u.len()];
    for t in 2..u.len() {
        let noise: f64 = StandardNormal.sample(&mut rng);
        let value = chen_step(u[t - 1], u[t - 2], y[t - 1], y[t - 2]) + sigma_v * noise;
        if !(value.abs() <= DIVERGENCE_BOUND) {
            return Err(Error::SimulationDiverged { t, value, bound: DIVERGENCE_BOUND });
        }
        y[t] = value;
    }
    TimeSeries::new(input.clone(), Signal::new(y, seed)?)
}

/// One realization: fresh filtered input and fresh process noise, both
/// derived from `cfg.seed`.
pub fn generate_chen(cfg: &ChenConfig) -> Result<TimeSeries> {
    cfg.validate()?;
    let input = gen_filtered_input(
        cfg.length,
        cfg.omega_c,
        seed::derive(cfg.seed, seed::streams::INPUT),
    )?;
    simulate_chen(&input, cfg.sigma_v, seed::derive(cfg.seed, seed::streams::PROCESS_NOISE))
}

/// Independent train and hold-out realizations.
pub fn make_datasets(train: &ChenConfig, test: &ChenConfig) -> Result<(TimeSeries, TimeSeries)> {
    if train.seed == test.seed {
        return Err(invalid(
            "seed",
            format!("train and test realizations share seed {}", train.seed),
        ));
    }
    Ok((generate_chen(train)?, generate_chen(test)?))
}
