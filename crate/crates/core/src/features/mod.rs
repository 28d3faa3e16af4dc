//! Lagged regressors and randomized feature maps.

mod maps;
mod regressors;

pub use maps::{apply_map, DesignMatrix, FeatureMap, FeatureMapSpec};
pub use regressors::{build_regressors, LagSpec, RegressorSet};
