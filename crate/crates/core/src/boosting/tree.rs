//! Least-squares regression trees (CART) used as the boosting base learner.

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;

/// Tree node. Nodes are stored in preorder, so the left child of a split at
/// index `i` is `i + 1` and the right child is `right`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    nodes: Vec<Node>,
}

impl RegressionTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Index of the leaf reached by `x`. Rows go left when `x[feature] <= threshold`.
    pub fn leaf_index(&self, x: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { .. } => return i,
                Node::Split {
                    feature,
                    threshold,
                    right,
                } => {
                    i = if x[feature] <= threshold { i + 1 } else { right };
                }
            }
        }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        match self.nodes[self.leaf_index(x)] {
            Node::Leaf { value } => value,
            Node::Split { .. } => unreachable!("leaf_index returns leaves"),
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }

    /// Depth of the deepest leaf (a single leaf has depth 0).
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> (usize, usize) {
            // returns (depth below i, index after subtree)
            match nodes[i] {
                Node::Leaf { .. } => (0, i + 1),
                Node::Split { right, .. } => {
                    let (l, _) = walk(nodes, i + 1);
                    let (r, end) = walk(nodes, right);
                    (1 + l.max(r), end)
                }
            }
        }
        walk(&self.nodes, 0).0
    }

    /// Overwrites the value of leaf `i`.
    pub fn set_leaf_value(&mut self, i: usize, value: f64) {
        match &mut self.nodes[i] {
            Node::Leaf { value: v } => *v = value,
            Node::Split { .. } => panic!("node {i} is not a leaf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("cannot fit a tree on zero rows")]
    Empty,
    #[error("targets length {0} does not match {1} rows")]
    LengthMismatch(usize, usize),
}

/// Fits a least-squares tree on every row of `features`.
pub fn fit_tree(
    features: &Matrix,
    targets: &[f64],
    max_depth: usize,
) -> Result<RegressionTree, TreeError> {
    let rows: Vec<usize> = (0..features.rows()).collect();
    fit_tree_on(features, targets, &rows, max_depth)
}

/// Fits a least-squares tree on the listed rows. `targets` is indexed by row
/// number, like `features`.
///
/// Splits are chosen greedily to maximize the reduction in squared error;
/// candidate thresholds are midpoints between consecutive distinct values.
/// Ties go to the smaller feature index, then the smaller threshold. A node
/// becomes a leaf (holding the mean target) at `max_depth`, when its targets
/// are all equal, or when no split reduces the error.
pub fn fit_tree_on(
    features: &Matrix,
    targets: &[f64],
    rows: &[usize],
    max_depth: usize,
) -> Result<RegressionTree, TreeError> {
    if rows.is_empty() {
        return Err(TreeError::Empty);
    }
    if targets.len() != features.rows() {
        return Err(TreeError::LengthMismatch(targets.len(), features.rows()));
    }
    // One presorted row list per feature; children inherit sorted order by
    // stable partitioning.
    let sorted: Vec<Vec<usize>> = (0..features.cols())
        .map(|j| {
            let mut r = rows.to_vec();
            r.sort_by(|&a, &b| features.get(a, j).total_cmp(&features.get(b, j)).then(a.cmp(&b)));
            r
        })
        .collect();
    let mut builder = Builder {
        features,
        targets,
        max_depth,
        nodes: Vec::new(),
        goes_left: vec![false; features.rows()],
    };
    builder.build(sorted, rows.to_vec(), 0);
    Ok(RegressionTree {
        nodes: builder.nodes,
    })
}

struct Builder<'a> {
    features: &'a Matrix,
    targets: &'a [f64],
    max_depth: usize,
    nodes: Vec<Node>,
    goes_left: Vec<bool>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl Builder<'_> {
    fn build(&mut self, sorted: Vec<Vec<usize>>, rows: Vec<usize>, depth: usize) -> usize {
        let idx = self.nodes.len();
        let sum: f64 = rows.iter().map(|&r| self.targets[r]).sum();
        let mean = sum / rows.len() as f64;
        let first = self.targets[rows[0]];
        let pure = rows.iter().all(|&r| self.targets[r] == first);

        let split = if depth >= self.max_depth || pure || rows.len() < 2 {
            None
        } else {
            self.best_split(&sorted, sum)
        };
        let Some(split) = split else {
            self.nodes.push(Node::Leaf { value: mean });
            return idx;
        };

        for &r in &rows {
            self.goes_left[r] = self.features.get(r, split.feature) <= split.threshold;
        }
        let mut left_sorted = Vec::with_capacity(sorted.len());
        let mut right_sorted = Vec::with_capacity(sorted.len());
        for list in sorted {
            let (l, r): (Vec<usize>, Vec<usize>) = list.into_iter().partition(|&r| self.goes_left[r]);
            left_sorted.push(l);
            right_sorted.push(r);
        }
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
            rows.into_iter().partition(|&r| self.goes_left[r]);

        self.nodes.push(Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            right: 0,
        });
        self.build(left_sorted, left_rows, depth + 1);
        let right_idx = self.build(right_sorted, right_rows, depth + 1);
        if let Node::Split { right, .. } = &mut self.nodes[idx] {
            *right = right_idx;
        }
        idx
    }

    fn best_split(&self, sorted: &[Vec<usize>], sum: f64) -> Option<Candidate> {
        let n = sorted[0].len() as f64;
        let sum_sq: f64 = sorted[0].iter().map(|&r| self.targets[r].powi(2)).sum();
        let base = sum * sum / n;
        // Gains below this are rounding noise, not an error reduction.
        let min_gain = 1e-14 * sum_sq.max(f64::MIN_POSITIVE);
        let mut best: Option<Candidate> = None;
        for (feature, list) in sorted.iter().enumerate() {
            let mut left_sum = 0.0;
            for k in 0..list.len() - 1 {
                left_sum += self.targets[list[k]];
                let a = self.features.get(list[k], feature);
                let b = self.features.get(list[k + 1], feature);
                if a >= b {
                    continue;
                }
                let nl = (k + 1) as f64;
                let right_sum = sum - left_sum;
                let gain = left_sum * left_sum / nl + right_sum * right_sum / (n - nl) - base;
                if gain > min_gain && best.as_ref().is_none_or(|c| gain > c.gain) {
                    let mut threshold = a + (b - a) / 2.0;
                    if threshold >= b {
                        threshold = a;
                    }
                    best = Some(Candidate {
                        feature,
                        threshold,
                        gain,
                    });
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn column(v: &[f64]) -> Matrix {
        Matrix::from_vec(v.len(), 1, v.to_vec())
    }

    fn sse(tree: &RegressionTree, x: &Matrix, t: &[f64]) -> f64 {
        x.iter_rows()
            .zip(t)
            .map(|(r, &y)| (tree.predict(r) - y).powi(2))
            .sum()
    }

    /// Exhaustive depth-1 search over every midpoint of every feature.
    fn best_stump_sse(x: &Matrix, t: &[f64]) -> f64 {
        let mut best = {
            let m = t.iter().sum::<f64>() / t.len() as f64;
            t.iter().map(|y| (y - m).powi(2)).sum::<f64>()
        };
        for j in 0..x.cols() {
            for a in 0..x.rows() {
                for b in 0..x.rows() {
                    let (va, vb) = (x.get(a, j), x.get(b, j));
                    if va >= vb {
                        continue;
                    }
                    let thr = (va + vb) / 2.0;
                    let (l, r): (Vec<f64>, Vec<f64>) = {
                        let mut l = vec![];
                        let mut r = vec![];
                        for i in 0..x.rows() {
                            if x.get(i, j) <= thr { l.push(t[i]) } else { r.push(t[i]) }
                        }
                        (l, r)
                    };
                    let cost = |v: &[f64]| {
                        let m = v.iter().sum::<f64>() / v.len() as f64;
                        v.iter().map(|y| (y - m).powi(2)).sum::<f64>()
                    };
                    best = best.min(cost(&l) + cost(&r));
                }
            }
        }
        best
    }

    #[test]
    fn depth_zero_is_mean_leaf() {
        let t = fit_tree(&column(&[1.0, 2.0, 3.0]), &[1.0, 2.0, 6.0], 0).unwrap();
        assert_eq!(t.nodes(), &[Node::Leaf { value: 3.0 }]);
    }

    #[test]
    fn single_split_example() {
        let x = column(&[1.0, 2.0, 3.0]);
        let t = fit_tree(&x, &[0.0, 0.0, 1.0], 1).unwrap();
        assert_eq!(
            t.nodes(),
            &[
                Node::Split { feature: 0, threshold: 2.5, right: 2 },
                Node::Leaf { value: 0.0 },
                Node::Leaf { value: 1.0 },
            ]
        );
        assert_eq!(sse(&t, &x, &[0.0, 0.0, 1.0]), 0.0);
        assert_eq!(best_stump_sse(&x, &[0.0, 0.0, 1.0]), 0.0);
    }

    #[test]
    fn ties_prefer_lower_feature() {
        // identical columns give identical gains
        let x = Matrix::from_rows(&[[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]).unwrap();
        let t = fit_tree(&x, &[0.0, 0.0, 1.0], 1).unwrap();
        assert!(matches!(t.nodes()[0], Node::Split { feature: 0, .. }));
        // symmetric targets: thresholds 1.5 and 2.5 tie, smaller wins
        let x = column(&[1.0, 2.0, 3.0]);
        let t = fit_tree(&x, &[1.0, 0.0, 1.0], 1).unwrap();
        assert!(matches!(t.nodes()[0], Node::Split { threshold, .. } if threshold == 1.5));
    }

    #[test]
    fn errors() {
        let x = column(&[1.0]);
        assert_eq!(fit_tree_on(&x, &[1.0], &[], 3), Err(TreeError::Empty));
        assert_eq!(fit_tree(&x, &[1.0, 2.0], 3), Err(TreeError::LengthMismatch(2, 1)));
    }

    #[test]
    fn pure_targets_stop() {
        let t = fit_tree(&column(&[1.0, 2.0, 3.0]), &[4.0, 4.0, 4.0], 5).unwrap();
        assert_eq!(t.leaf_count(), 1);
    }

    proptest! {
        #[test]
        fn stump_matches_exhaustive_search(
            pts in prop::collection::vec((0i32..6, 0i32..6, -5i32..5), 2..12),
        ) {
            let rows: Vec<[f64; 2]> = pts.iter().map(|p| [p.0 as f64, p.1 as f64]).collect();
            let t: Vec<f64> = pts.iter().map(|p| p.2 as f64).collect();
            let x = Matrix::from_rows(&rows).unwrap();
            let tree = fit_tree(&x, &t, 1).unwrap();
            prop_assert!((sse(&tree, &x, &t) - best_stump_sse(&x, &t)).abs() < 1e-9);
        }

        #[test]
        fn unlimited_depth_interpolates_distinct_rows(
            vals in prop::collection::btree_set(-1000i32..1000, 1..40),
            seed in 0u64..100,
        ) {
            let xs: Vec<f64> = vals.iter().map(|&v| v as f64 / 7.0).collect();
            let t: Vec<f64> = xs.iter().enumerate().map(|(i, _)| ((i as u64 * 31 + seed) % 11) as f64).collect();
            let x = column(&xs);
            let tree = fit_tree(&x, &t, usize::MAX).unwrap();
            prop_assert_eq!(sse(&tree, &x, &t), 0.0);
        }

        #[test]
        fn depth_is_bounded(
            pts in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 1..60),
            max_depth in 0usize..5,
        ) {
            let rows: Vec<[f64; 2]> = pts.iter().map(|p| [p.0, p.1]).collect();
            let t: Vec<f64> = pts.iter().map(|p| p.0 * p.1).collect();
            let tree = fit_tree(&Matrix::from_rows(&rows).unwrap(), &t, max_depth).unwrap();
            prop_assert!(tree.depth() <= max_depth);
        }
    }
}
