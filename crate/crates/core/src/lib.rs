//! Nonlinear ARX identification across the interpolation threshold.
//!
//! The crate estimates NARX one-step predictors `y[t] = f(u[t-1..], y[t-1..])`
//! with model capacity swept from far below to far above the number of
//! training samples:
//!
//! * [`sysdata`]: Chen's nonlinear benchmark system driven by low-pass
//!   filtered noise, and two-column measurement tables (CE8 coupled drives).
//! * [`features`]: lag vectors and frozen random feature maps (random
//!   Fourier features, RBF networks, linear baseline).
//! * [`estimators`]: minimum-norm least squares, ridge, gradient descent and
//!   random-subset ensembles.
//! * [`forest`]: best-first regression trees and non-bootstrapped forests.
//! * [`evaluation`]: one-step-ahead and free-run simulation errors.
//! * [`sweep`]: seeded capacity sweeps with median/IQR summaries and CSV I/O.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod evaluation;
pub mod exec;
pub mod features;
pub mod forest;
pub mod numeric;
pub mod seed;
pub mod sweep;
pub mod sysdata;

pub use error::{Error, Result};
pub use exec::Execution;
