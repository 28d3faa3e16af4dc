use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{invalid, Error, Result};
use crate::features::RegressorSet;
use crate::numeric::shifted_mean;
use crate::seed::{self, Rng};

/// Relative tolerance under which two split gains count as tied.
const TIE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf { value: f64 },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

/// Piecewise-constant regression tree; `x[feature] <= threshold` goes left.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTree {
    nodes: Vec<Node>,
    leaf_count: usize,
    input_dim: usize,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

struct OpenLeaf {
    node: usize,
    rows: Vec<usize>,
    best: Option<Candidate>,
}

fn leaf_value(regs: &RegressorSet, rows: &[usize]) -> f64 {
    let targets: Vec<f64> = rows.iter().map(|&r| regs.targets()[r]).collect();
    shifted_mean(&targets)
}

/// Largest SSE decrease over all (feature, midpoint) splits of `rows`.
///
/// Features are scanned in a random order and exact ties are resolved by a
/// uniform draw, so differently seeded trees differ only where the greedy
/// criterion is indifferent.
fn best_split(regs: &RegressorSet, rows: &[usize], rng: &mut Rng) -> Option<Candidate> {
    let n = rows.len();
    if n < 2 {
        return None;
    }
    let y = regs.targets();
    let total: f64 = rows.iter().map(|&r| y[r]).sum();
    let mut features: Vec<usize> = (0..regs.cols()).collect();
    features.shuffle(rng);

    let mut best_gain = 0.0_f64;
    let mut tied: Vec<Candidate> = Vec::new();
    let mut order = rows.to_vec();
    for &f in &features {
        order.sort_by(|&a, &b| regs.row(a)[f].total_cmp(&regs.row(b)[f]));
        let mut left_sum = 0.0;
        for k in 1..n {
            left_sum += y[order[k - 1]];
            let lo = regs.row(order[k - 1])[f];
            let hi = regs.row(order[k])[f];
            if lo == hi {
                continue;
            }
            let (nl, nr) = (k as f64, (n - k) as f64);
            let diff = left_sum / nl - (total - left_sum) / nr;
            // SSE(parent) - SSE(left) - SSE(right) = nl nr / n (mean_l - mean_r)^2
            let gain = nl * nr / n as f64 * diff * diff;
            if !(gain > 0.0) {
                continue;
            }
            let mut threshold = 0.5 * (lo + hi);
            if threshold >= hi {
                threshold = lo;
            }
            let cand = Candidate { feature: f, threshold, gain };
            if gain > best_gain * (1.0 + TIE_RTOL) {
                best_gain = gain;
                tied.clear();
                tied.push(cand);
            } else if gain >= best_gain * (1.0 - TIE_RTOL) {
                tied.push(cand);
            }
        }
    }
    match tied.len() {
        0 => None,
        1 => Some(tied[0]),
        k => Some(tied[rng.random_range(0..k)]),
    }
}

/// Grows a tree best-first: the open leaf whose best split removes the most
/// squared error is split next, until `max_leaves` leaves exist or no leaf
/// can be improved.
pub fn fit_tree(regs: &RegressorSet, max_leaves: usize, seed: u64) -> Result<RegressionTree> {
    if max_leaves == 0 {
        return Err(invalid("max_leaves", "must be positive"));
    }
    if regs.rows() == 0 {
        return Err(Error::SeriesTooShort { len: 0, horizon: 0 });
    }
    let mut rng = seed::rng(seed);
    let all: Vec<usize> = (0..regs.rows()).collect();
    let mut nodes = vec![Node::Leaf { value: leaf_value(regs, &all) }];
    let best = best_split(regs, &all, &mut rng);
    let mut open = vec![OpenLeaf { node: 0, rows: all, best }];
    let mut leaf_count = 1;

    while leaf_count < max_leaves {
        let mut pick: Option<(usize, f64)> = None;
        for (i, leaf) in open.iter().enumerate() {
            if let Some(c) = leaf.best {
                if pick.is_none_or(|(_, g)| c.gain > g) {
                    pick = Some((i, c.gain));
                }
            }
        }
        let Some((idx, _)) = pick else { break };
        let leaf = open.swap_remove(idx);
        let split = leaf.best.expect("picked leaf has a split");
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = leaf
            .rows
            .iter()
            .partition(|&&r| regs.row(r)[split.feature] <= split.threshold);

        let left = nodes.len();
        nodes.push(Node::Leaf { value: leaf_value(regs, &left_rows) });
        let right = nodes.len();
        nodes.push(Node::Leaf { value: leaf_value(regs, &right_rows) });
        nodes[leaf.node] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        leaf_count += 1;

        let left_best = best_split(regs, &left_rows, &mut rng);
        let right_best = best_split(regs, &right_rows, &mut rng);
        open.push(OpenLeaf { node: left, rows: left_rows, best: left_best });
        open.push(OpenLeaf { node: right, rows: right_rows, best: right_best });
    }

    Ok(RegressionTree { nodes, leaf_count, input_dim: regs.cols() })
}

impl RegressionTree {
    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    /// `(feature, threshold)` of the root split, if any.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes[0] {
            Node::Split { feature, threshold, .. } => Some((feature, threshold)),
            Node::Leaf { .. } => None,
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Leaf constant reached by `x`. Callers guarantee `x.len() == input_dim`.
    pub fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split { feature, threshold, left, right } => {
                    i = if x[feature] <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                context: "tree input",
                expected: self.input_dim,
                got: x.len(),
            });
        }
        Ok(self.predict_unchecked(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> RegressorSet {
        RegressorSet::from_rows(&[vec![1.0], vec![2.0], vec![3.0]], vec![0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn single_leaf_predicts_the_mean() {
        let regs = RegressorSet::from_rows(&[vec![1.0], vec![2.0], vec![4.0]], vec![1.0, 2.0, 6.0]).unwrap();
        let tree = fit_tree(&regs, 1, 0).unwrap();
        assert_eq!(tree.leaf_count(), 1);
        assert_eq!(tree.predict(&[100.0]).unwrap(), 3.0);
        assert_eq!(tree.predict(&[-7.0]).unwrap(), 3.0);
    }

    #[test]
    fn two_leaf_toy_split() {
        let tree = fit_tree(&toy(), 2, 0).unwrap();
        assert_eq!(tree.root_split(), Some((0, 2.5)));
        assert_eq!(tree.predict(&[1.5]).unwrap(), 0.0);
        assert_eq!(tree.predict(&[5.0]).unwrap(), 1.0);
        assert_eq!(tree.leaf_count(), 2);
    }

    #[test]
    fn grows_until_pure() {
        // Two of three leaves would suffice: the left pair is already pure.
        let tree = fit_tree(&toy(), 10, 0).unwrap();
        assert_eq!(tree.leaf_count(), 2);
        assert!(fit_tree(&toy(), 0, 0).is_err());
        assert!(tree.predict(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn duplicate_inputs_predict_their_mean() {
        let regs = RegressorSet::from_rows(&[vec![1.0], vec![1.0], vec![2.0]], vec![0.0, 1.0, 5.0]).unwrap();
        let tree = fit_tree(&regs, 10, 0).unwrap();
        assert_eq!(tree.leaf_count(), 2);
        assert_eq!(tree.predict(&[1.0]).unwrap(), 0.5);
    }
}
