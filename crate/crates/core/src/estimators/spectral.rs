//! Spectral solvers for `min (1/T)|y - Phi theta|^2 (+ lambda |theta|^2)`.
//!
//! Both the minimum-norm and the ridge solution are spectral filters of the
//! singular system of `Phi`. Tall and moderately wide designs use a thin SVD
//! of `Phi` directly. Very wide designs (`m > WIDE_ASPECT * T`) use the
//! eigendecomposition of the `T x T` Gram matrix `Phi Phi^T`, which yields
//! the same singular triplets at a fraction of the cost.

use nalgebra::{DMatrix, DMatrixView, DVector, SymmetricEigen, SVD};

/// Designs with more than `WIDE_ASPECT * T` columns are factored through
/// their Gram matrix.
pub const WIDE_ASPECT: usize = 3;

pub(crate) enum Factor {
    /// `Phi = U diag(s) V^T`, singular values sorted descending.
    Svd { u: DMatrix<f64>, s: Vec<f64>, vt: DMatrix<f64> },
    /// `Phi Phi^T = Q diag(lambda) Q^T`, eigenvalues sorted descending.
    Gram { q: DMatrix<f64>, lambda: Vec<f64> },
}

/// `Phi Phi^T` without materializing the transpose.
pub(crate) fn gram_rows(phi: &DMatrix<f64>) -> DMatrix<f64> {
    let (t, m) = phi.shape();
    let phi_t = DMatrixView::from_slice_with_strides(phi.as_slice(), m, t, t, 1);
    let mut g = DMatrix::zeros(t, t);
    g.gemm(1.0, phi, &phi_t, 0.0);
    g
}

/// Symmetric eigen-solve with eigenpairs sorted by descending eigenvalue.
pub(crate) fn sorted_eigen(g: DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let eig = SymmetricEigen::new(g);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut q = DMatrix::zeros(n, n);
    let mut lambda = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        q.set_column(dst, &eig.eigenvectors.column(src));
        lambda.push(eig.eigenvalues[src]);
    }
    (q, lambda)
}

impl Factor {
    pub(crate) fn new(phi: &DMatrix<f64>) -> Self {
        let (t, m) = phi.shape();
        if m > WIDE_ASPECT * t {
            let (q, lambda) = sorted_eigen(gram_rows(phi));
            Factor::Gram { q, lambda }
        } else {
            let svd = SVD::new(phi.clone(), true, true);
            Factor::Svd {
                u: svd.u.expect("requested U"),
                s: svd.singular_values.iter().copied().collect(),
                vt: svd.v_t.expect("requested V^T"),
            }
        }
    }

    /// Singular values of `Phi`, descending. Gram eigenvalues are clamped at
    /// zero before the square root.
    pub(crate) fn singular_values(&self) -> Vec<f64> {
        match self {
            Factor::Svd { s, .. } => s.clone(),
            Factor::Gram { lambda, .. } => lambda.iter().map(|l| l.max(0.0).sqrt()).collect(),
        }
    }

    /// Number of singular values treated as nonzero.
    ///
    /// The SVD route keeps `s_i > eps * max(T, m) * s_max`. The Gram route
    /// works on squared singular values, whose attainable accuracy is
    /// `eps * lambda_max`, so it keeps `lambda_i > eps * T * lambda_max`.
    pub(crate) fn rank(&self, t: usize, m: usize) -> usize {
        let eps = f64::EPSILON;
        match self {
            Factor::Svd { s, .. } => {
                let Some(&smax) = s.first() else { return 0 };
                let tol = eps * t.max(m) as f64 * smax;
                s.iter().take_while(|&&v| v > tol && smax > 0.0).count()
            }
            Factor::Gram { lambda, .. } => {
                let Some(&lmax) = lambda.first() else { return 0 };
                let tol = eps * t as f64 * lmax;
                lambda.iter().take_while(|&&v| v > tol && lmax > 0.0).count()
            }
        }
    }

    /// `sigma_max / sigma_min`, or infinity when rank deficient.
    pub(crate) fn condition_number(&self, t: usize, m: usize) -> f64 {
        let s = self.singular_values();
        let k = self.rank(t, m);
        if k == 0 || k < t.min(m) {
            return f64::INFINITY;
        }
        s[0] / s[k - 1]
    }

    /// `sum_{i < keep} sigma_i g(sigma_i^2) v_i (u_i . y)`.
    ///
    /// `g(s^2) = 1/s^2` gives the pseudo-inverse solution and
    /// `g(s^2) = 1/(s^2 + c)` the ridge solution with shift `c`.
    pub(crate) fn filtered_solution(
        &self,
        phi: &DMatrix<f64>,
        y: &DVector<f64>,
        keep: usize,
        g: impl Fn(f64) -> f64,
    ) -> DVector<f64> {
        match self {
            Factor::Svd { u, s, vt } => {
                let mut coeff = DVector::zeros(keep);
                for i in 0..keep {
                    let proj = u.column(i).dot(y);
                    coeff[i] = s[i] * g(s[i] * s[i]) * proj;
                }
                vt.rows(0, keep).tr_mul(&coeff)
            }
            Factor::Gram { q, lambda } => {
                let mut a = DVector::zeros(phi.nrows());
                for (i, &l) in lambda.iter().enumerate().take(keep) {
                    let qi = q.column(i);
                    let w = g(l) * qi.dot(y);
                    a.axpy(w, &qi, 1.0);
                }
                phi.tr_mul(&a)
            }
        }
    }
}
