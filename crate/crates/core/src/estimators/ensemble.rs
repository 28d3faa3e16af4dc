//! Averages of interpolating solutions on random column subsets.

use nalgebra::{Cholesky, DMatrix, DVector};

use super::spectral::{sorted_eigen, Factor};
use super::{residual_mse, ParameterVector, SolveMethod, SolveReport};
use crate::error::{invalid, Result};
use crate::exec::{map_indexed, Execution};
use crate::features::DesignMatrix;
use crate::seed;

/// Ridge solution on the square system `A theta = y` in dual form,
/// `A^T (A A^T + shift I)^{-1} y`.
fn square_ridge(a: &DMatrix<f64>, y: &DVector<f64>, shift: f64) -> DVector<f64> {
    let n = a.nrows();
    let mut g = a * a.transpose();
    for i in 0..n {
        g[(i, i)] += shift;
    }
    let dual = match Cholesky::new(g.clone()) {
        Some(chol) => chol.solve(y),
        // Loses definiteness only when the shift is below rounding noise.
        None => {
            let (q, lambda) = sorted_eigen(g);
            let mut dual = DVector::zeros(n);
            for (i, l) in lambda.iter().enumerate() {
                if *l > 0.0 {
                    let qi = q.column(i);
                    dual.axpy(qi.dot(y) / l, &qi, 1.0);
                }
            }
            dual
        }
    };
    a.tr_mul(&dual)
}

fn member(design: &DesignMatrix, lambda: f64, member_seed: u64) -> (Vec<usize>, DVector<f64>) {
    let (t, m) = (design.rows(), design.cols());
    let mut rng = seed::rng(member_seed);
    let mut cols = rand::seq::index::sample(&mut rng, m, t).into_vec();
    cols.sort_unstable();
    let a = design.phi().select_columns(cols.iter());
    let theta = square_ridge(&a, design.targets(), lambda * t as f64);
    (cols, theta)
}

/// [`subset_ensemble_with`] on the default execution mode.
pub fn subset_ensemble(design: &DesignMatrix, members: usize, lambda: f64, seed: u64) -> Result<SolveReport> {
    subset_ensemble_with(design, members, lambda, seed, Execution::default())
}

/// Averages `members` ridge solutions, each fitted on `T` columns drawn
/// without replacement and zero-filled back to `m` coordinates.
///
/// Member `b` draws its subset from the stream `derive(seed, b)`, so the
/// result does not depend on `exec`.
pub fn subset_ensemble_with(
    design: &DesignMatrix,
    members: usize,
    lambda: f64,
    seed: u64,
    exec: Execution,
) -> Result<SolveReport> {
    let (t, m) = (design.rows(), design.cols());
    if m < t {
        return Err(invalid(
            "m",
            format!("subset ensembles need at least as many features as samples ({m} < {t})"),
        ));
    }
    if members == 0 {
        return Err(invalid("members", "must be positive"));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("must be finite and > 0, got {lambda}")));
    }
    let solutions = map_indexed(members, exec, |b| member(design, lambda, seed::derive(seed, b as u64)));
    let mut sum = DVector::zeros(m);
    for (cols, theta) in &solutions {
        for (&c, v) in cols.iter().zip(theta.iter()) {
            sum[c] += v;
        }
    }
    let theta = sum / members as f64;
    let factor = Factor::new(design.phi());
    Ok(SolveReport {
        train_residual_mse: residual_mse(design, &theta),
        theta: ParameterVector::new(theta.as_slice().to_vec())?,
        cond: factor.condition_number(t, m),
        rank: factor.rank(t, m),
        method: SolveMethod::Ensemble { members, lambda },
    })
}
