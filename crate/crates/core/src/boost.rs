//! Additive regression-tree models fitted by second-order (Newton) gradient
//! boosting: one depth-limited tree per round on the gradient/Hessian of the
//! loss, update scaled by the shrinkage factor. Exact greedy split search
//! with deterministic tie-breaking (lowest feature index, then lowest
//! threshold), so refitting a prefix reproduces the same trees.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::path::ModelPath;
use crate::scalar::{log1p_exp, logit, sigmoid, Real};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "F: Serialize + serde::de::DeserializeOwned")]
#[serde(rename_all = "snake_case")]
pub enum TreeNode<F> {
    Leaf {
        value: F,
    },
    Split {
        feature: usize,
        threshold: F,
        left: Box<TreeNode<F>>,
        right: Box<TreeNode<F>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "F: Serialize + serde::de::DeserializeOwned")]
pub struct RegressionTree<F> {
    pub root: TreeNode<F>,
}

impl<F: Real> RegressionTree<F> {
    pub fn predict_row(&self, row: &[F]) -> F {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] < *threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk<F>(node: &TreeNode<F>) -> usize {
            match node {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(left).max(walk(right)),
            }
        }
        walk(&self.root)
    }

    /// Feature indices used by splits anywhere in the tree.
    pub fn split_features(&self) -> Vec<usize> {
        fn walk<F>(node: &TreeNode<F>, out: &mut Vec<usize>) {
            if let TreeNode::Split {
                feature,
                left,
                right,
                ..
            } = node
            {
                out.push(*feature);
                walk(left, out);
                walk(right, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoostOptions<F> {
    pub shrinkage: F,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub lambda_leaf: F,
}

impl<F: Real> Default for BoostOptions<F> {
    fn default() -> Self {
        BoostOptions {
            shrinkage: F::of(0.1),
            max_depth: 3,
            min_leaf: 10,
            lambda_leaf: F::one(),
        }
    }
}

/// A fitted boosted ensemble. Stage-m prediction uses the first m trees,
/// each scaled by `shrinkage`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "F: Serialize + serde::de::DeserializeOwned")]
pub struct BoostModel<F> {
    pub base_score: F,
    pub shrinkage: F,
    pub max_depth: usize,
    pub trees: Vec<RegressionTree<F>>,
    /// Mean training loss after each round (index 0 = base model only).
    #[serde(skip)]
    pub train_loss: Vec<F>,
}

impl<F: Real> BoostModel<F> {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Raw score f₀ + ν·Σ_{j≤m} f_j(x) using the first `m` trees.
    pub fn staged_raw(&self, row: &[F], m: usize) -> F {
        let mut acc = F::zero();
        for tree in &self.trees[..m] {
            acc = acc + tree.predict_row(row);
        }
        self.base_score + self.shrinkage * acc
    }

    pub fn predict_raw(&self, row: &[F]) -> F {
        self.staged_raw(row, self.trees.len())
    }
}

/// Probabilities from the stage-m model.
pub fn staged_predict_proba<F: Real>(
    model: &BoostModel<F>,
    x: &Matrix<F>,
    m: usize,
) -> Result<Vec<F>> {
    if m > model.trees.len() {
        return Err(Error::data(format!(
            "stage {m} out of range: model has {} trees",
            model.trees.len()
        )));
    }
    Ok((0..x.rows())
        .map(|i| sigmoid(model.staged_raw(x.row(i), m)))
        .collect())
}

/// Wrap staged predictions as a path over the ascending stage grid.
pub fn as_model_path<F: Real>(model: BoostModel<F>, m_grid: Vec<usize>) -> Result<ModelPath<F>> {
    ModelPath::boost(model, m_grid)
}

struct SplitSearch<'a, F> {
    x: &'a Matrix<F>,
    features: &'a [usize],
    /// per active feature: all row indices sorted by that feature's value
    sorted: Vec<Vec<u32>>,
    grad: Vec<F>,
    hess: Vec<F>,
    opts: BoostOptions<F>,
}

struct BestSplit<F> {
    gain: F,
    feature_pos: usize,
    threshold: F,
}

impl<'a, F: Real> SplitSearch<'a, F> {
    fn new(x: &'a Matrix<F>, features: &'a [usize], opts: BoostOptions<F>) -> Self {
        let n = x.rows();
        let sorted = features
            .iter()
            .map(|&f| {
                let mut order: Vec<u32> = (0..n as u32).collect();
                order.sort_by(|&a, &b| {
                    x.get(a as usize, f)
                        .partial_cmp(&x.get(b as usize, f))
                        .expect("finite covariates")
                        .then(a.cmp(&b))
                });
                order
            })
            .collect();
        SplitSearch {
            x,
            features,
            sorted,
            grad: vec![F::zero(); n],
            hess: vec![F::zero(); n],
            opts,
        }
    }

    fn leaf_value(&self, g: F, h: F) -> F {
        let denom = h + self.opts.lambda_leaf;
        if denom <= F::zero() {
            F::zero()
        } else {
            -(g / denom)
        }
    }

    fn node_score(&self, g: F, h: F) -> F {
        g * g / (h + self.opts.lambda_leaf)
    }

    /// Best split of `membership`-marked rows, or None when no split
    /// satisfies the constraints with positive gain.
    fn best_split(&self, membership: &[bool], g_total: F, h_total: F, count: usize) -> Option<BestSplit<F>> {
        if count < 2 * self.opts.min_leaf {
            return None;
        }
        let mut best: Option<BestSplit<F>> = None;
        let parent_score = self.node_score(g_total, h_total);
        for (pos, order) in self.sorted.iter().enumerate() {
            let feature = self.features[pos];
            let mut g_left = F::zero();
            let mut h_left = F::zero();
            let mut n_left = 0usize;
            let mut prev_value: Option<F> = None;
            for &r in order {
                let r = r as usize;
                if !membership[r] {
                    continue;
                }
                let value = self.x.get(r, feature);
                if let Some(pv) = prev_value {
                    if value > pv
                        && n_left >= self.opts.min_leaf
                        && count - n_left >= self.opts.min_leaf
                    {
                        let gain = self.node_score(g_left, h_left)
                            + self.node_score(g_total - g_left, h_total - h_left)
                            - parent_score;
                        let threshold = (pv + value) / F::of(2.0);
                        let better = match &best {
                            None => gain > F::zero(),
                            Some(b) => gain > b.gain,
                        };
                        if better {
                            best = Some(BestSplit {
                                gain,
                                feature_pos: pos,
                                threshold,
                            });
                        }
                    }
                }
                g_left = g_left + self.grad[r];
                h_left = h_left + self.hess[r];
                n_left += 1;
                prev_value = Some(value);
            }
        }
        best
    }

    fn grow(&self, membership: &mut Vec<bool>, count: usize, depth: usize) -> TreeNode<F> {
        let mut g_total = F::zero();
        let mut h_total = F::zero();
        for (r, &m) in membership.iter().enumerate() {
            if m {
                g_total = g_total + self.grad[r];
                h_total = h_total + self.hess[r];
            }
        }
        if depth == 0 {
            return TreeNode::Leaf {
                value: self.leaf_value(g_total, h_total),
            };
        }
        let Some(split) = self.best_split(membership, g_total, h_total, count) else {
            return TreeNode::Leaf {
                value: self.leaf_value(g_total, h_total),
            };
        };
        let feature = self.features[split.feature_pos];
        let mut left_membership = vec![false; membership.len()];
        let mut left_count = 0usize;
        for (r, m) in membership.iter_mut().enumerate() {
            if *m && self.x.get(r, feature) < split.threshold {
                left_membership[r] = true;
                *m = false;
                left_count += 1;
            }
        }
        let right_count = count - left_count;
        let left = self.grow(&mut left_membership, left_count, depth - 1);
        let right = self.grow(membership, right_count, depth - 1);
        TreeNode::Split {
            feature,
            threshold: split.threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

/// Fit a logistic-loss boosted ensemble: f₀ = logit(ȳ), then `m_max`
/// Newton-boosting rounds on g = p − y, h = p(1 − p).
pub fn fit_boost<F: Real>(
    dataset: &Dataset<F>,
    m_max: usize,
    opts: &BoostOptions<F>,
) -> Result<BoostModel<F>> {
    if dataset.n() == 0 {
        return Err(Error::data("cannot fit on an empty dataset"));
    }
    let pos = dataset.positives();
    if pos == 0 || pos == dataset.n() {
        return Err(Error::data(
            "boosting requires both classes present (base score is a logit)",
        ));
    }
    if m_max == 0 {
        return Err(Error::config("m_max must be at least 1"));
    }
    let x = dataset.covariates();
    let y = dataset.labels();
    let n = dataset.n();
    let features: Vec<usize> = (0..dataset.p()).collect();
    let mut search = SplitSearch::new(x, &features, *opts);
    let base_score = logit(dataset.label_mean());
    let mut raw = vec![base_score; n];
    let logistic_loss = |raw: &[F]| -> F {
        let mut acc = F::zero();
        for (i, &eta) in raw.iter().enumerate() {
            acc = acc + log1p_exp(eta) - F::of_usize(y[i] as usize) * eta;
        }
        acc / F::of_usize(n)
    };
    let mut train_loss = vec![logistic_loss(&raw)];
    let mut trees = Vec::with_capacity(m_max);
    for _ in 0..m_max {
        for i in 0..n {
            let p = sigmoid(raw[i]);
            search.grad[i] = p - F::of_usize(y[i] as usize);
            search.hess[i] = p * (F::one() - p);
        }
        let mut membership = vec![true; n];
        let root = search.grow(&mut membership, n, opts.max_depth);
        let tree = RegressionTree { root };
        for i in 0..n {
            raw[i] = raw[i] + opts.shrinkage * tree.predict_row(x.row(i));
        }
        trees.push(tree);
        let loss = logistic_loss(&raw);
        debug_assert!(
            loss <= *train_loss.last().unwrap() + F::epsilon() * F::of(100.0) + F::of(1e-12),
            "training loss increased"
        );
        train_loss.push(loss);
    }
    Ok(BoostModel {
        base_score,
        shrinkage: opts.shrinkage,
        max_depth: opts.max_depth,
        trees,
        train_loss,
    })
}

/// Squared-error boosting on real-valued targets, optionally restricted to a
/// feature subset. Used to construct generating models for synthetic data.
pub fn fit_boost_squared<F: Real>(
    x: &Matrix<F>,
    targets: &[F],
    m_max: usize,
    opts: &BoostOptions<F>,
    feature_subset: Option<&[usize]>,
) -> Result<BoostModel<F>> {
    if x.rows() == 0 || x.rows() != targets.len() {
        return Err(Error::data("empty data or target length mismatch"));
    }
    if m_max == 0 {
        return Err(Error::config("m_max must be at least 1"));
    }
    let n = x.rows();
    let all: Vec<usize> = (0..x.cols()).collect();
    let features: Vec<usize> = match feature_subset {
        Some(subset) => {
            let mut s = subset.to_vec();
            s.sort_unstable();
            s.dedup();
            if s.iter().any(|&f| f >= x.cols()) {
                return Err(Error::config("feature subset index out of range"));
            }
            s
        }
        None => all,
    };
    let mut search = SplitSearch::new(x, &features, *opts);
    let base_score = targets.iter().copied().sum::<F>() / F::of_usize(n);
    let mut raw = vec![base_score; n];
    let squared_loss = |raw: &[F]| -> F {
        let mut acc = F::zero();
        for (i, &pred) in raw.iter().enumerate() {
            let d = pred - targets[i];
            acc = acc + d * d;
        }
        acc / F::of_usize(n)
    };
    let mut train_loss = vec![squared_loss(&raw)];
    let mut trees = Vec::with_capacity(m_max);
    for _ in 0..m_max {
        for i in 0..n {
            search.grad[i] = raw[i] - targets[i];
            search.hess[i] = F::one();
        }
        let mut membership = vec![true; n];
        let tree = RegressionTree {
            root: search.grow(&mut membership, n, opts.max_depth),
        };
        for i in 0..n {
            raw[i] = raw[i] + opts.shrinkage * tree.predict_row(x.row(i));
        }
        trees.push(tree);
        train_loss.push(squared_loss(&raw));
    }
    Ok(BoostModel {
        base_score,
        shrinkage: opts.shrinkage,
        max_depth: opts.max_depth,
        trees,
        train_loss,
    })
}
