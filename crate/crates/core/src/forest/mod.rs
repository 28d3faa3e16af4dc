//! Regression trees and non-bootstrapped forests with total leaf count as
//! the capacity knob.

mod tree;

pub use tree::{fit_tree, RegressionTree};

use crate::error::{invalid, Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::features::RegressorSet;
use crate::numeric::shifted_mean;
use crate::seed;

/// Average of member trees.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<RegressionTree>,
    total_leaves: usize,
}

impl Forest {
    pub fn from_trees(trees: Vec<RegressionTree>) -> Result<Self> {
        let Some(first) = trees.first() else {
            return Err(invalid("trees", "a forest needs at least one tree"));
        };
        let dim = first.input_dim();
        if let Some(t) = trees.iter().find(|t| t.input_dim() != dim) {
            return Err(Error::DimensionMismatch {
                context: "forest member input",
                expected: dim,
                got: t.input_dim(),
            });
        }
        let total_leaves = trees.iter().map(RegressionTree::leaf_count).sum();
        Ok(Self { trees, total_leaves })
    }

    pub fn trees(&self) -> &[RegressionTree] {
        &self.trees
    }

    pub fn total_leaves(&self) -> usize {
        self.total_leaves
    }

    pub fn input_dim(&self) -> usize {
        self.trees[0].input_dim()
    }

    /// Mean of member predictions (exact when all members agree).
    pub fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let preds: Vec<f64> = self.trees.iter().map(|t| t.predict_unchecked(x)).collect();
        let (lo, hi) = preds
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));
        shifted_mean(&preds).clamp(lo, hi)
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                context: "forest input",
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        Ok(self.predict_unchecked(x))
    }
}

/// Number of member trees used for a total leaf budget on `rows` samples.
pub fn member_count(budget: usize, rows: usize) -> usize {
    if budget <= rows {
        1
    } else {
        ((budget as f64 / rows as f64).round() as usize).max(1)
    }
}

/// [`fit_forest_with`] on the default execution mode.
pub fn fit_forest(regs: &RegressorSet, total_leaf_budget: usize, seed: u64) -> Result<Forest> {
    fit_forest_with(regs, total_leaf_budget, seed, Execution::default())
}

/// Up to `T` leaves: one tree with that many leaves. Beyond `T`:
/// `round(budget / T)` trees, each grown on the full training set until it
/// interpolates. Member `b` uses seed `derive(seed, b)`.
pub fn fit_forest_with(regs: &RegressorSet, total_leaf_budget: usize, seed: u64, exec: Execution) -> Result<Forest> {
    if total_leaf_budget == 0 {
        return Err(invalid("total_leaf_budget", "must be positive"));
    }
    let rows = regs.rows();
    if rows == 0 {
        return Err(invalid("regs", "empty training set"));
    }
    let members = member_count(total_leaf_budget, rows);
    let max_leaves = if total_leaf_budget <= rows { total_leaf_budget } else { usize::MAX };
    let trees = map_indexed(members, exec, |b| fit_tree(regs, max_leaves, seed::derive(seed, b as u64)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Forest::from_trees(trees)
}
