use nalgebra::DVector;

use super::spectral::Factor;
use super::{residual_mse, ParameterVector, SolveMethod, SolveReport};
use crate::error::{invalid, Error, Result};
use crate::features::DesignMatrix;

const DIVERGENCE_NORM: f64 = 1e12;

/// `V(theta) = 0.5 |Phi theta - y|^2`.
pub fn objective(design: &DesignMatrix, theta: &DVector<f64>) -> f64 {
    0.5 * (design.phi() * theta - design.targets()).norm_squared()
}

/// `grad V(theta) = Phi^T (Phi theta - y)`.
pub fn gradient(design: &DesignMatrix, theta: &DVector<f64>) -> DVector<f64> {
    design.phi().tr_mul(&(design.phi() * theta - design.targets()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdOptions {
    pub step: f64,
    pub max_iters: usize,
    /// Stop once `|grad V| <= tol`.
    pub tol: f64,
}

impl GdOptions {
    /// Step `1 / sigma_max^2` (half the stability limit) and tolerance
    /// `1e-10 |Phi^T y|`.
    pub fn for_design(design: &DesignMatrix) -> Self {
        let smax = Factor::new(design.phi()).singular_values().first().copied().unwrap_or(1.0);
        let scale = design.phi().tr_mul(design.targets()).norm();
        Self {
            step: if smax > 0.0 { 1.0 / (smax * smax) } else { 1.0 },
            max_iters: 200_000,
            tol: if scale > 0.0 { 1e-10 * scale } else { 1e-300 },
        }
    }
}

/// Plain gradient descent on `V` from `theta0`.
///
/// Iterates never leave `theta0 + row space of Phi`, so from `theta0 = 0`
/// on a full-row-rank design the limit is the minimum-norm solution.
pub fn gradient_descent(design: &DesignMatrix, theta0: &ParameterVector, opts: GdOptions) -> Result<SolveReport> {
    if !(opts.step > 0.0) || !opts.step.is_finite() {
        return Err(invalid("step", format!("must be finite and > 0, got {}", opts.step)));
    }
    if opts.max_iters == 0 {
        return Err(invalid("max_iters", "must be positive"));
    }
    if !(opts.tol > 0.0) {
        return Err(invalid("tol", format!("must be > 0, got {}", opts.tol)));
    }
    if theta0.len() != design.cols() {
        return Err(Error::DimensionMismatch {
            context: "initial parameters",
            expected: design.cols(),
            got: theta0.len(),
        });
    }
    let mut theta = theta0.to_dvector();
    let mut iterations = 0;
    loop {
        let grad = gradient(design, &theta);
        if grad.norm() <= opts.tol || iterations == opts.max_iters {
            break;
        }
        theta.axpy(-opts.step, &grad, 1.0);
        iterations += 1;
        let norm = theta.norm();
        if !(norm <= DIVERGENCE_NORM) {
            return Err(Error::GradientDescentDiverged { step: opts.step, iterations });
        }
    }
    let factor = Factor::new(design.phi());
    let (t, m) = (design.rows(), design.cols());
    Ok(SolveReport {
        train_residual_mse: residual_mse(design, &theta),
        theta: ParameterVector::new(theta.as_slice().to_vec())?,
        cond: factor.condition_number(t, m),
        rank: factor.rank(t, m),
        method: SolveMethod::GradientDescent { step: opts.step, iterations },
    })
}
