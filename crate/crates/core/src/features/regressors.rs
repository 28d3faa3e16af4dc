use crate::error::{invalid, Error, Result};
use crate::sysdata::TimeSeries;

/// Input and output lag orders of a NARX regressor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LagSpec {
    pub n_u: usize,
    pub n_y: usize,
}

impl Default for LagSpec {
    fn default() -> Self {
        Self { n_u: 2, n_y: 2 }
    }
}

impl LagSpec {
    pub fn new(n_u: usize, n_y: usize) -> Result<Self> {
        if n_u == 0 {
            return Err(invalid("n_u", "must be at least 1"));
        }
        if n_y == 0 {
            return Err(invalid("n_y", "must be at least 1"));
        }
        Ok(Self { n_u, n_y })
    }

    /// Regressor dimension `n_u + n_y`.
    pub fn dim(&self) -> usize {
        self.n_u + self.n_y
    }

    /// Number of leading samples without a complete regressor.
    pub fn horizon(&self) -> usize {
        self.n_u.max(self.n_y)
    }

    /// Writes `(u[t-1..=t-n_u], y[t-1..=t-n_y])` into `out`.
    pub fn fill(&self, u: &[f64], y: &[f64], t: usize, out: &mut [f64]) {
        for k in 0..self.n_u {
            out[k] = u[t - 1 - k];
        }
        for k in 0..self.n_y {
            out[self.n_u + k] = y[t - 1 - k];
        }
    }
}

/// Row-major matrix of lag vectors with aligned one-step targets.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressorSet {
    data: Vec<f64>,
    targets: Vec<f64>,
    cols: usize,
    /// Zero-based sample index of the first target.
    t_index: usize,
}

impl RegressorSet {
    /// Builds a set from explicit rows. Mostly useful for tests and for
    /// tabular data that is already lagged.
    pub fn from_rows(rows: &[Vec<f64>], targets: Vec<f64>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(invalid("rows", "need at least one non-empty row"));
        }
        if rows.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                context: "regressor rows vs targets",
                expected: rows.len(),
                got: targets.len(),
            });
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "regressor row width",
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { data, targets, cols, t_index: 0 })
    }

    pub fn rows(&self) -> usize {
        self.targets.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.cols)
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn t_index(&self) -> usize {
        self.t_index
    }
}

/// Lag vectors for every sample with a complete history, in time order.
pub fn build_regressors(series: &TimeSeries, lags: LagSpec) -> Result<RegressorSet> {
    let horizon = lags.horizon();
    let len = series.len();
    if len <= horizon {
        return Err(Error::SeriesTooShort { len, horizon });
    }
    let (u, y) = (series.u().values(), series.y().values());
    let cols = lags.dim();
    let rows = len - horizon;
    let mut data = vec![0.0; rows * cols];
    for (r, t) in (horizon..len).enumerate() {
        lags.fill(u, y, t, &mut data[r * cols..(r + 1) * cols]);
    }
    Ok(RegressorSet {
        data,
        targets: y[horizon..].to_vec(),
        cols,
        t_index: horizon,
    })
}
