//! Least-squares estimators for linear-in-the-parameters NARX models.

mod descent;
mod ensemble;
mod spectral;

use std::fmt;

use nalgebra::DVector;

pub use descent::{gradient, gradient_descent, objective, GdOptions};
pub use ensemble::{subset_ensemble, subset_ensemble_with};
pub use spectral::WIDE_ASPECT;

use crate::error::{invalid, Result};
use crate::features::DesignMatrix;
use crate::numeric;
use spectral::Factor;

/// Parameter vector with its cached Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector {
    theta: Vec<f64>,
    norm2: f64,
}

impl ParameterVector {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if let Some(i) = theta.iter().position(|v| !v.is_finite()) {
            return Err(invalid("theta", format!("non-finite entry at index {i}")));
        }
        let norm2 = numeric::norm2(&theta);
        Ok(Self { theta, norm2 })
    }

    pub fn zeros(m: usize) -> Self {
        Self { theta: vec![0.0; m], norm2: 0.0 }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.theta)
    }

    pub fn norm2(&self) -> f64 {
        self.norm2
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

/// Which estimator produced a [`SolveReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMethod {
    MinNorm,
    Ridge { lambda: f64 },
    GradientDescent { step: f64, iterations: usize },
    Ensemble { members: usize, lambda: f64 },
}

impl fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveMethod::MinNorm => write!(f, "min-norm"),
            SolveMethod::Ridge { lambda } => write!(f, "ridge(lambda={lambda:e})"),
            SolveMethod::GradientDescent { step, iterations } => {
                write!(f, "gd(step={step:e}, iterations={iterations})")
            }
            SolveMethod::Ensemble { members, lambda } => {
                write!(f, "ensemble(B={members}, lambda={lambda:e})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub theta: ParameterVector,
    /// `(1/T) |y - Phi theta|^2` at the returned parameters.
    pub train_residual_mse: f64,
    /// `sigma_max / sigma_min` of `Phi` (infinite when rank deficient).
    pub cond: f64,
    pub rank: usize,
    pub method: SolveMethod,
}

pub(crate) fn residual_mse(design: &DesignMatrix, theta: &DVector<f64>) -> f64 {
    let pred = design.phi() * theta;
    numeric::mse(pred.as_slice(), design.targets().as_slice())
}

fn report(design: &DesignMatrix, theta: DVector<f64>, factor: &Factor, method: SolveMethod) -> Result<SolveReport> {
    let (t, m) = (design.rows(), design.cols());
    Ok(SolveReport {
        train_residual_mse: residual_mse(design, &theta),
        theta: ParameterVector::new(theta.as_slice().to_vec())?,
        cond: factor.condition_number(t, m),
        rank: factor.rank(t, m),
        method,
    })
}

/// Minimum-norm least-squares solution `Phi^+ y`.
///
/// Singular values at or below `eps * max(T, m) * sigma_max` are treated as
/// zero; the retained count is reported as `rank`.
pub fn min_norm_ls(design: &DesignMatrix) -> Result<SolveReport> {
    let factor = Factor::new(design.phi());
    let keep = factor.rank(design.rows(), design.cols());
    let theta = factor.filtered_solution(design.phi(), design.targets(), keep, |s2| 1.0 / s2);
    report(design, theta, &factor, SolveMethod::MinNorm)
}

/// Ridge solution `argmin (1/T)|y - Phi theta|^2 + lambda |theta|^2`,
/// i.e. `(Phi^T Phi + lambda T I)^{-1} Phi^T y`.
pub fn ridge(design: &DesignMatrix, lambda: f64) -> Result<SolveReport> {
    ridge_path(design, &[lambda]).map(|mut v| v.remove(0))
}

/// Ridge solutions for several `lambda` from a single factorization of `Phi`.
pub fn ridge_path(design: &DesignMatrix, lambdas: &[f64]) -> Result<Vec<SolveReport>> {
    for &lambda in lambdas {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(invalid("lambda", format!("must be finite and > 0, got {lambda}")));
        }
    }
    let factor = Factor::new(design.phi());
    let keep = factor.singular_values().iter().take_while(|&&s| s > 0.0).count();
    lambdas
        .iter()
        .map(|&lambda| {
            let shift = lambda * design.rows() as f64;
            let theta = factor.filtered_solution(design.phi(), design.targets(), keep, |s2| 1.0 / (s2 + shift));
            report(design, theta, &factor, SolveMethod::Ridge { lambda })
        })
        .collect()
}

/// Ratio of the largest to the smallest nonzero singular value of `Phi`;
/// infinite when `Phi` is rank deficient at working precision.
pub fn condition_number(design: &DesignMatrix) -> f64 {
    Factor::new(design.phi()).condition_number(design.rows(), design.cols())
}

/// Singular values of `Phi`, descending.
pub fn singular_values(design: &DesignMatrix) -> Vec<f64> {
    Factor::new(design.phi()).singular_values()
}
