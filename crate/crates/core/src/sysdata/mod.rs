//! Identification data: synthetic Chen-system realizations and
//! two-column measurement tables (CE8 coupled drives).

mod chen;
pub mod filter;
mod table;

pub use chen::{
    chen_step, gen_filtered_input, generate_chen, make_datasets, simulate_chen, ChenConfig,
    DIVERGENCE_BOUND,
};
pub use table::{load_ce8, read_table, split_series, write_table, DEFAULT_SPLIT};

use crate::error::{invalid, Error, Result};

/// A finite, non-empty real sequence together with the seed that produced it
/// (zero for measured data).
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<f64>,
    seed: u64,
}

impl Signal {
    pub fn new(values: Vec<f64>, seed: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("signal", "must not be empty"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid("signal", format!("non-finite value at index {i}")));
        }
        Ok(Self { values, seed })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Paired input/output record of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    u: Signal,
    y: Signal,
}

impl TimeSeries {
    pub fn new(u: Signal, y: Signal) -> Result<Self> {
        if u.len() != y.len() {
            return Err(Error::DimensionMismatch {
                context: "time series (u vs y)",
                expected: u.len(),
                got: y.len(),
            });
        }
        Ok(Self { u, y })
    }

    /// Builds a measured series (seed 0) from raw vectors.
    pub fn from_vecs(u: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Self::new(Signal::new(u, 0)?, Signal::new(y, 0)?)
    }

    pub fn u(&self) -> &Signal {
        &self.u
    }

    pub fn y(&self) -> &Signal {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// FNV-1a over the bit patterns of both channels.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in self.u.values.iter().chain(&self.y.values) {
            for byte in v.to_bits().to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }
}
