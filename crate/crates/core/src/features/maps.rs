use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, Normal, Uniform};

use super::RegressorSet;
use crate::error::{invalid, Error, Result};
use crate::seed;

/// Parameters that fully determine a feature map; the map itself is
/// rebuilt from these instead of being stored densely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureMapSpec {
    Rff { input_dim: usize, m: usize, gamma: f64, seed: u64 },
    Rbf { input_dim: usize, m: usize, gamma: f64, eta: f64, seed: u64 },
    Linear { input_dim: usize },
}

impl FeatureMapSpec {
    pub fn build(&self) -> Result<FeatureMap> {
        match *self {
            FeatureMapSpec::Rff { input_dim, m, gamma, seed } => FeatureMap::rff(input_dim, m, gamma, seed),
            FeatureMapSpec::Rbf { input_dim, m, gamma, eta, seed } => {
                FeatureMap::rbf(input_dim, m, gamma, eta, seed)
            }
            FeatureMapSpec::Linear { input_dim } => FeatureMap::linear(input_dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Params {
    /// Frequencies (row-major `m x n`) and phases.
    Rff { gamma: f64, w: Vec<f64>, b: Vec<f64>, scale: f64 },
    /// Centers (row-major `m x n`).
    Rbf { gamma: f64, eta: f64, centers: Vec<f64> },
    Linear,
}

/// Frozen nonlinear map from a lag vector to `m` features.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    input_dim: usize,
    m: usize,
    seed: u64,
    params: Params,
}

fn check_dims(input_dim: usize, m: usize) -> Result<()> {
    if input_dim == 0 {
        return Err(invalid("input_dim", "must be positive"));
    }
    if m == 0 {
        return Err(invalid("m", "must be positive"));
    }
    Ok(())
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(invalid(name, format!("must be finite and > 0, got {v}")));
    }
    Ok(())
}

impl FeatureMap {
    /// Random Fourier features `sqrt(2/m) cos(w_i . x + b_i)` with
    /// `w_i ~ N(0, 2 gamma I)` and `b_i ~ U[0, 2 pi)`; inner products
    /// approximate `exp(-gamma |x - x'|^2)`.
    pub fn rff(input_dim: usize, m: usize, gamma: f64, seed: u64) -> Result<Self> {
        check_dims(input_dim, m)?;
        check_positive("gamma", gamma)?;
        let mut rng = seed::rng(seed);
        let normal = Normal::new(0.0, (2.0 * gamma).sqrt()).map_err(|e| invalid("gamma", e.to_string()))?;
        let w: Vec<f64> = (0..m * input_dim).map(|_| normal.sample(&mut rng)).collect();
        let phase = Uniform::new(0.0, 2.0 * PI).expect("non-empty range");
        let b: Vec<f64> = (0..m).map(|_| phase.sample(&mut rng)).collect();
        Ok(Self {
            input_dim,
            m,
            seed,
            params: Params::Rff { gamma, w, b, scale: (2.0 / m as f64).sqrt() },
        })
    }

    /// Radial features `exp(-gamma |x - c_i|)` (unsquared distance) with
    /// centers `c_i ~ N(0, eta I)`, `eta` being a variance.
    pub fn rbf(input_dim: usize, m: usize, gamma: f64, eta: f64, seed: u64) -> Result<Self> {
        check_dims(input_dim, m)?;
        check_positive("gamma", gamma)?;
        check_positive("eta", eta)?;
        let mut rng = seed::rng(seed);
        let normal = Normal::new(0.0, eta.sqrt()).map_err(|e| invalid("eta", e.to_string()))?;
        let centers = (0..m * input_dim).map(|_| normal.sample(&mut rng)).collect();
        Ok(Self { input_dim, m, seed, params: Params::Rbf { gamma, eta, centers } })
    }

    /// Raw regressor entries followed by a constant 1.
    pub fn linear(input_dim: usize) -> Result<Self> {
        check_dims(input_dim, 1)?;
        Ok(Self { input_dim, m: input_dim + 1, seed: 0, params: Params::Linear })
    }

    /// RFF map with explicit frequencies (row-major `m x input_dim`) and
    /// phases.
    pub fn rff_with_params(input_dim: usize, w: Vec<f64>, b: Vec<f64>, gamma: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        let m = b.len();
        check_dims(input_dim, m)?;
        if w.len() != m * input_dim {
            return Err(invalid("w", format!("expected {} entries, got {}", m * input_dim, w.len())));
        }
        if w.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(invalid("w", "entries must be finite"));
        }
        Ok(Self { input_dim, m, seed: 0, params: Params::Rff { gamma, w, b, scale: (2.0 / m as f64).sqrt() } })
    }

    /// Same map with explicit RBF centers (row-major `m x input_dim`).
    pub fn rbf_with_centers(input_dim: usize, centers: Vec<f64>, gamma: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        if input_dim == 0 || centers.is_empty() || !centers.len().is_multiple_of(input_dim) {
            return Err(invalid("centers", "length must be a positive multiple of input_dim"));
        }
        let m = centers.len() / input_dim;
        Ok(Self { input_dim, m, seed: 0, params: Params::Rbf { gamma, eta: f64::NAN, centers } })
    }

    pub fn spec(&self) -> FeatureMapSpec {
        match &self.params {
            Params::Rff { gamma, .. } => FeatureMapSpec::Rff {
                input_dim: self.input_dim,
                m: self.m,
                gamma: *gamma,
                seed: self.seed,
            },
            Params::Rbf { gamma, eta, .. } => FeatureMapSpec::Rbf {
                input_dim: self.input_dim,
                m: self.m,
                gamma: *gamma,
                eta: *eta,
                seed: self.seed,
            },
            Params::Linear => FeatureMapSpec::Linear { input_dim: self.input_dim },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.params {
            Params::Rff { .. } => "rff",
            Params::Rbf { .. } => "rbf",
            Params::Linear => "linear",
        }
    }

    /// Number of features.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    /// RFF frequency row `i`.
    pub fn frequency(&self, i: usize) -> Option<&[f64]> {
        match &self.params {
            Params::Rff { w, .. } => Some(&w[i * self.input_dim..(i + 1) * self.input_dim]),
            _ => None,
        }
    }

    /// RFF phase `i`.
    pub fn phase(&self, i: usize) -> Option<f64> {
        match &self.params {
            Params::Rff { b, .. } => Some(b[i]),
            _ => None,
        }
    }

    /// RBF center `i`.
    pub fn center(&self, i: usize) -> Option<&[f64]> {
        match &self.params {
            Params::Rbf { centers, .. } => Some(&centers[i * self.input_dim..(i + 1) * self.input_dim]),
            _ => None,
        }
    }

    /// Feature `i` of `x`. `x` must have `input_dim` entries.
    #[inline]
    pub fn feature(&self, i: usize, x: &[f64]) -> f64 {
        let n = self.input_dim;
        match &self.params {
            Params::Rff { w, b, scale, .. } => {
                let wi = &w[i * n..(i + 1) * n];
                let arg: f64 = wi.iter().zip(x).map(|(a, c)| a * c).sum::<f64>() + b[i];
                scale * arg.cos()
            }
            Params::Rbf { gamma, centers, .. } => {
                let ci = &centers[i * n..(i + 1) * n];
                let d2: f64 = ci.iter().zip(x).map(|(c, v)| (v - c) * (v - c)).sum();
                (-gamma * d2.sqrt()).exp()
            }
            Params::Linear => {
                if i < n {
                    x[i]
                } else {
                    1.0
                }
            }
        }
    }

    /// All `m` features of `x`.
    pub fn features(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok((0..self.m).map(|i| self.feature(i, x)).collect())
    }

    /// `sum_i theta_i phi_i(x)` without materializing the feature vector.
    pub fn dot(&self, x: &[f64], theta: &[f64]) -> f64 {
        debug_assert_eq!(theta.len(), self.m);
        let mut acc = 0.0;
        for (i, t) in theta.iter().enumerate() {
            acc += t * self.feature(i, x);
        }
        acc
    }

    pub(crate) fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                context: "feature map input",
                expected: self.input_dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// Feature matrix `Phi` (rows = samples) with the aligned targets.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    phi: DMatrix<f64>,
    targets: DVector<f64>,
}

impl DesignMatrix {
    pub fn new(phi: DMatrix<f64>, targets: DVector<f64>) -> Result<Self> {
        if phi.nrows() != targets.len() {
            return Err(Error::DimensionMismatch {
                context: "design matrix rows vs targets",
                expected: phi.nrows(),
                got: targets.len(),
            });
        }
        if phi.nrows() == 0 || phi.ncols() == 0 {
            return Err(invalid("phi", "must be non-empty"));
        }
        if phi.iter().chain(targets.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("phi", "entries must be finite"));
        }
        Ok(Self { phi, targets })
    }

    /// Convenience constructor from row-major data.
    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64], targets: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "design matrix data",
                expected: rows * cols,
                got: data.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(rows, cols, data), DVector::from_column_slice(targets))
    }

    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    pub fn targets(&self) -> &DVector<f64> {
        &self.targets
    }

    /// Number of samples `T`.
    pub fn rows(&self) -> usize {
        self.phi.nrows()
    }

    /// Number of features `m`.
    pub fn cols(&self) -> usize {
        self.phi.ncols()
    }
}

/// Evaluates `map` on every regressor row.
pub fn apply_map(map: &FeatureMap, regs: &RegressorSet) -> Result<DesignMatrix> {
    if regs.cols() != map.input_dim() {
        return Err(Error::DimensionMismatch {
            context: "regressor width vs feature map input",
            expected: map.input_dim(),
            got: regs.cols(),
        });
    }
    let rows = regs.rows();
    // Column-major fill: one feature at a time over all rows.
    let mut phi = DMatrix::zeros(rows, map.m());
    for (i, mut col) in phi.column_iter_mut().enumerate() {
        for (t, x) in regs.iter_rows().enumerate() {
            col[t] = map.feature(i, x);
        }
    }
    DesignMatrix::new(phi, DVector::from_column_slice(regs.targets()))
}
