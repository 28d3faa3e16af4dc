//! One-step-ahead and free-run simulation metrics.

use crate::error::{Error, Result};
use crate::estimators::ParameterVector;
use crate::features::{FeatureMap, LagSpec};
use crate::forest::Forest;
use crate::numeric;
use crate::sysdata::TimeSeries;

/// Free-run outputs beyond this magnitude mark the simulation as diverged.
pub const FREE_RUN_BOUND: f64 = 1e6;

/// Anything that maps a lag vector `(u[t-1..], y[t-1..])` to a prediction
/// of `y[t]`.
pub trait NarxModel: Sync {
    fn lags(&self) -> LagSpec;

    /// Callers pass vectors of length `lags().dim()`.
    fn predict(&self, x: &[f64]) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// `sum_i theta_i phi_i(x)`.
    Features { map: FeatureMap, theta: ParameterVector },
    Forest(Forest),
}

/// An estimated model together with the lag structure it was trained on.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictor {
    lags: LagSpec,
    model: Model,
}

impl Predictor {
    pub fn linear_in_params(lags: LagSpec, map: FeatureMap, theta: ParameterVector) -> Result<Self> {
        if map.input_dim() != lags.dim() {
            return Err(Error::DimensionMismatch {
                context: "feature map input vs lag dimension",
                expected: lags.dim(),
                got: map.input_dim(),
            });
        }
        if theta.len() != map.m() {
            return Err(Error::DimensionMismatch {
                context: "parameter vector vs feature count",
                expected: map.m(),
                got: theta.len(),
            });
        }
        Ok(Self { lags, model: Model::Features { map, theta } })
    }

    pub fn forest(lags: LagSpec, forest: Forest) -> Result<Self> {
        if forest.input_dim() != lags.dim() {
            return Err(Error::DimensionMismatch {
                context: "forest input vs lag dimension",
                expected: lags.dim(),
                got: forest.input_dim(),
            });
        }
        Ok(Self { lags, model: Model::Forest(forest) })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }
}

impl NarxModel for Predictor {
    fn lags(&self) -> LagSpec {
        self.lags
    }

    fn predict(&self, x: &[f64]) -> f64 {
        match &self.model {
            Model::Features { map, theta } => map.dot(x, theta.as_slice()),
            Model::Forest(forest) => forest.predict_unchecked(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    /// Infinite when `diverged`.
    pub mse: f64,
    pub diverged: bool,
    pub trajectory: Option<Vec<f64>>,
}

fn check_length(series: &TimeSeries, lags: LagSpec) -> Result<()> {
    if series.len() <= lags.horizon() {
        return Err(Error::SeriesTooShort { len: series.len(), horizon: lags.horizon() });
    }
    Ok(())
}

/// MSE of predictions built entirely from observed data.
pub fn one_step_mse(model: &impl NarxModel, series: &TimeSeries) -> Result<EvalResult> {
    let lags = model.lags();
    check_length(series, lags)?;
    let (u, y) = (series.u().values(), series.y().values());
    let mut x = vec![0.0; lags.dim()];
    let mut pred = Vec::with_capacity(series.len() - lags.horizon());
    for t in lags.horizon()..series.len() {
        lags.fill(u, y, t, &mut x);
        pred.push(model.predict(&x));
    }
    let diverged = pred.iter().any(|p| !p.is_finite());
    let mse = if diverged { f64::INFINITY } else { numeric::mse(&pred, &y[lags.horizon()..]) };
    Ok(EvalResult { mse, diverged, trajectory: Some(pred) })
}

/// MSE of a recursive simulation that feeds predicted outputs back while
/// using observed inputs.
///
/// The first `max(n_u, n_y)` outputs are copied from the data and excluded
/// from the error. The returned trajectory covers the whole series, or
/// stops at the first sample whose magnitude exceeds [`FREE_RUN_BOUND`].
pub fn free_run_mse(model: &impl NarxModel, series: &TimeSeries) -> Result<EvalResult> {
    let lags = model.lags();
    check_length(series, lags)?;
    let (u, y) = (series.u().values(), series.y().values());
    let start = lags.horizon();
    let mut sim = y[..start].to_vec();
    let mut x = vec![0.0; lags.dim()];
    for t in start..series.len() {
        lags.fill(u, &sim, t, &mut x);
        let next = model.predict(&x);
        sim.push(next);
        if !(next.abs() <= FREE_RUN_BOUND) {
            return Ok(EvalResult { mse: f64::INFINITY, diverged: true, trajectory: Some(sim) });
        }
    }
    let mse = numeric::mse(&sim[start..], &y[start..]);
    Ok(EvalResult { mse, diverged: false, trajectory: Some(sim) })
}

/// `|theta|_2` for linear-in-the-parameters models.
pub fn param_norm(model: &Predictor) -> Option<f64> {
    match &model.model {
        Model::Features { theta, .. } => Some(theta.norm2()),
        Model::Forest(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysdata::{chen_step, generate_chen, ChenConfig};

    struct Chen;
    impl NarxModel for Chen {
        fn lags(&self) -> LagSpec {
            LagSpec::default()
        }
        fn predict(&self, x: &[f64]) -> f64 {
            chen_step(x[0], x[1], x[2], x[3])
        }
    }

    struct Constant(f64);
    impl NarxModel for Constant {
        fn lags(&self) -> LagSpec {
            LagSpec::default()
        }
        fn predict(&self, _: &[f64]) -> f64 {
            self.0
        }
    }

    struct Doubling;
    impl NarxModel for Doubling {
        fn lags(&self) -> LagSpec {
            LagSpec::new(1, 1).unwrap()
        }
        fn predict(&self, x: &[f64]) -> f64 {
            2.0 * x[1]
        }
    }

    #[test]
    fn true_system_on_noiseless_data() {
        let cfg = ChenConfig { sigma_v: 0.0, omega_c: 0.7, length: 300, seed: 4 };
        let series = generate_chen(&cfg).unwrap();
        let osa = one_step_mse(&Chen, &series).unwrap();
        assert!(osa.mse <= 1e-20);
        let free = free_run_mse(&Chen, &series).unwrap();
        assert!(!free.diverged);
        assert_eq!(free.mse, 0.0);
        assert_eq!(free.trajectory.unwrap(), series.y().values());
    }

    #[test]
    fn constant_predictor() {
        let series = TimeSeries::from_vecs(vec![0.0; 6], vec![3.0; 6]).unwrap();
        assert_eq!(one_step_mse(&Constant(0.0), &series).unwrap().mse, 9.0);
        // Ignores lagged outputs, so feedback changes nothing.
        assert_eq!(free_run_mse(&Constant(0.0), &series).unwrap().mse, 9.0);
    }

    #[test]
    fn geometric_growth_trips_the_guard() {
        let mut y = vec![0.0; 40];
        y[0] = 1.0;
        let series = TimeSeries::from_vecs(vec![0.0; 40], y).unwrap();
        let r = free_run_mse(&Doubling, &series).unwrap();
        assert!(r.diverged);
        assert!(r.mse.is_infinite());
        let traj = r.trajectory.unwrap();
        assert_eq!(&traj[..4], &[1.0, 2.0, 4.0, 8.0]);
        // 2^20 is the first power of two above 10^6; it sits at index 20.
        assert_eq!(traj.len(), 21);
        assert_eq!(*traj.last().unwrap(), 1048576.0);
    }

    #[test]
    fn too_short_series_is_an_error() {
        let series = TimeSeries::from_vecs(vec![0.0; 2], vec![0.0; 2]).unwrap();
        assert!(one_step_mse(&Chen, &series).is_err());
        assert!(free_run_mse(&Chen, &series).is_err());
    }

    #[test]
    fn parameter_norms() {
        let lags = LagSpec::default();
        let map = FeatureMap::linear(4).unwrap();
        let zero = Predictor::linear_in_params(lags, map.clone(), ParameterVector::zeros(5)).unwrap();
        assert_eq!(param_norm(&zero), Some(0.0));
        let p = Predictor::linear_in_params(lags, map, ParameterVector::new(vec![3.0, 4.0, 0.0, 0.0, 0.0]).unwrap()).unwrap();
        assert_eq!(param_norm(&p), Some(5.0));
        assert!(Predictor::linear_in_params(lags, FeatureMap::linear(3).unwrap(), ParameterVector::zeros(4)).is_err());
    }
}
