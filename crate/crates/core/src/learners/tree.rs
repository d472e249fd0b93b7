//! Greedy top-down decision trees with Gini splits.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Hypothesis, Label, LabeledExample, Stump, TreeNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: 10,
            min_leaf: 1,
        }
    }
}

/// Fits a tree on `sample`.
///
/// Each node takes the `(feature, threshold)` split with the largest Gini
/// reduction, zero included, so balanced parities such as XOR still get
/// split. Earlier features and smaller thresholds win ties. Growth stops at
/// a pure node, at `max_depth`, or when no split leaves `min_leaf` examples
/// on both sides. A depth-one result is returned as a [`Stump`].
pub fn tree_learn(
    sample: &[LabeledExample],
    max_depth: usize,
    min_leaf: usize,
) -> Result<Hypothesis> {
    if sample.is_empty() {
        return Err(Error::Precondition(
            "cannot fit a tree on an empty sample".into(),
        ));
    }
    let dims = sample
        .iter()
        .map(|e| e.point.dimension())
        .min()
        .unwrap_or(0);
    let mut rows = Vec::with_capacity(sample.len());
    for (r, ex) in sample.iter().enumerate() {
        let mut features = Vec::with_capacity(dims);
        for f in 0..dims {
            let x = ex.point.feature(f).unwrap_or(f64::NAN);
            if !x.is_finite() {
                return Err(Error::Cell {
                    row: r,
                    column: format!("feature {f}"),
                    message: format!("non-numeric value {x}"),
                });
            }
            features.push(x);
        }
        rows.push((features, ex.label));
    }
    let builder = Builder {
        rows: &rows,
        dims,
        max_depth,
        min_leaf: min_leaf.max(1),
    };
    let mut index: Vec<usize> = (0..rows.len()).collect();
    let root = builder.grow(&mut index, 0);
    Ok(match root {
        TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        } if left.depth() == 0 && right.depth() == 0 => {
            let (TreeNode::Leaf(below), TreeNode::Leaf(above)) = (*left, *right) else {
                unreachable!()
            };
            Hypothesis::Stump(Stump {
                feature,
                threshold,
                below,
                above,
            })
        }
        node => Hypothesis::Tree(Arc::new(node)),
    })
}

struct Builder<'a> {
    rows: &'a [(Vec<f64>, Label)],
    dims: usize,
    max_depth: usize,
    min_leaf: usize,
}

struct Split {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

impl Builder<'_> {
    fn grow(&self, index: &mut [usize], depth: usize) -> TreeNode {
        let counts = label_counts(index.iter().map(|&i| self.rows[i].1));
        let pure = counts.len() <= 1;
        if pure || depth >= self.max_depth || index.len() < 2 * self.min_leaf {
            return TreeNode::Leaf(majority(&counts));
        }
        let Some(split) = self.best_split(index) else {
            return TreeNode::Leaf(majority(&counts));
        };
        // Partition in place: rows going left first.
        let mut boundary = 0;
        for j in 0..index.len() {
            if self.rows[index[j]].0[split.feature] <= split.threshold {
                index.swap(j, boundary);
                boundary += 1;
            }
        }
        let (left, right) = index.split_at_mut(boundary);
        TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: Box::new(self.grow(left, depth + 1)),
            right: Box::new(self.grow(right, depth + 1)),
        }
    }

    fn best_split(&self, index: &[usize]) -> Option<Split> {
        let n = index.len();
        let total = label_counts(index.iter().map(|&i| self.rows[i].1));
        let mut best: Option<Split> = None;
        let mut order: Vec<usize> = index.to_vec();
        for f in 0..self.dims {
            order.sort_by(|&a, &b| self.rows[a].0[f].total_cmp(&self.rows[b].0[f]));
            let mut left: BTreeMap<Label, usize> = BTreeMap::new();
            for pos in 0..n - 1 {
                let (x, label) = (&self.rows[order[pos]].0[f], self.rows[order[pos]].1);
                *left.entry(label).or_default() += 1;
                let next = self.rows[order[pos + 1]].0[f];
                let n_left = pos + 1;
                if next == *x || n_left < self.min_leaf || n - n_left < self.min_leaf {
                    continue;
                }
                let right: Vec<usize> = total
                    .iter()
                    .map(|(l, c)| c - left.get(l).copied().unwrap_or(0))
                    .collect();
                let impurity = n_left as f64 * gini(left.values().copied(), n_left)
                    + (n - n_left) as f64 * gini(right.into_iter(), n - n_left);
                if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                    let mut threshold = x + (next - x) / 2.0;
                    if threshold >= next {
                        threshold = *x;
                    }
                    best = Some(Split {
                        feature: f,
                        threshold,
                        impurity,
                    });
                }
            }
        }
        best
    }
}

fn label_counts(labels: impl Iterator<Item = Label>) -> BTreeMap<Label, usize> {
    let mut counts = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_default() += 1;
    }
    counts
}

/// Most frequent label; ties go to the smallest label.
fn majority(counts: &BTreeMap<Label, usize>) -> Label {
    let mut best = (0, 0);
    for (&label, &c) in counts {
        if c > best.1 {
            best = (label, c);
        }
    }
    best.0
}

fn gini(counts: impl Iterator<Item = usize>, n: usize) -> f64 {
    let n = n as f64;
    1.0 - counts.map(|c| (c as f64 / n).powi(2)).sum::<f64>()
}
