//! The quantities every selection decision is built from: top-k labeling,
//! fraud loss, classification error, and the Wilcoxon AUC statistic.
//!
//! The fraud loss of a size-k selection is the number of negatives among
//! the k selected cases, i.e. k·(1 − precision@k).

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The outcome of flagging exactly k cases by score.
#[derive(Debug, Clone)]
pub struct TopKSelection<F> {
    pub k: usize,
    /// Selected row indices, ascending.
    pub selected: Vec<usize>,
    /// The k-th largest score, i.e. the (n−k+1)-th order statistic.
    pub threshold: F,
}

/// Flag the k largest scores. Ties at the threshold are broken by ascending
/// row index so that exactly k cases are selected.
pub fn top_k_labels<F: Real>(scores: &[F], k: usize) -> Result<TopKSelection<F>> {
    let n = scores.len();
    if k == 0 || k > n {
        return Err(Error::data(format!(
            "k = {k} out of range for {n} scores"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("scores must not be NaN")
            .then(a.cmp(&b))
    });
    let mut selected: Vec<usize> = order[..k].to_vec();
    let threshold = scores[order[k - 1]];
    selected.sort_unstable();
    Ok(TopKSelection {
        k,
        selected,
        threshold,
    })
}

/// Number of negatives among the selected cases: Σᵢ (1 − yᵢ) ŷᵢ.
pub fn fraud_loss(labels: &[u8], selection: &TopKSelection<impl Real>) -> usize {
    selection
        .selected
        .iter()
        .filter(|&&i| labels[i] == 0)
        .count()
}

/// Fraud loss normalized by the number of selected cases.
pub fn fraud_loss_fraction<F: Real>(labels: &[u8], selection: &TopKSelection<F>) -> F {
    F::of_usize(fraud_loss(labels, selection)) / F::of_usize(selection.k)
}

/// Classification error Σᵢ |yᵢ − ŷᵢ| for predicted labels constrained to
/// sum to k. Errs when the constraint is violated.
pub fn classification_error(labels: &[u8], predicted: &[u8], k: usize) -> Result<usize> {
    if predicted.len() != labels.len() {
        return Err(Error::data("label/prediction length mismatch"));
    }
    if predicted.iter().any(|&v| v > 1) {
        return Err(Error::data("predicted labels must be 0 or 1"));
    }
    let total: usize = predicted.iter().map(|&v| v as usize).sum();
    if total != k {
        return Err(Error::data(format!(
            "predicted labels sum to {total}, expected k = {k}"
        )));
    }
    Ok(labels
        .iter()
        .zip(predicted.iter())
        .filter(|(y, yhat)| y != yhat)
        .count())
}

/// Strict-inequality Wilcoxon pair count: the number of (negative, positive)
/// pairs where the positive is scored strictly higher. Tied pairs count 0.
///
/// Returns (favorable pairs, positives, negatives).
pub fn wilcoxon_pair_count<F: Real>(labels: &[u8], scores: &[F]) -> Result<(u64, u64, u64)> {
    if labels.len() != scores.len() {
        return Err(Error::data("label/score length mismatch"));
    }
    let n_pos = labels.iter().filter(|&&y| y == 1).count() as u64;
    let n_neg = labels.len() as u64 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::data(
            "AUC requires both classes present in the evaluation data",
        ));
    }
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("no NaN scores"));
    // walk tie groups in ascending score order; within a group no pair counts
    let mut favorable = 0u64;
    let mut negatives_below = 0u64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let group = &order[i..j];
        let pos_in_group = group.iter().filter(|&&r| labels[r] == 1).count() as u64;
        favorable += pos_in_group * negatives_below;
        negatives_below += group.len() as u64 - pos_in_group;
        i = j;
    }
    Ok((favorable, n_pos, n_neg))
}

/// AUC estimated by the strict-inequality Wilcoxon statistic, in O(n log n).
pub fn auc_wilcoxon<F: Real>(labels: &[u8], scores: &[F]) -> Result<F> {
    let (favorable, n_pos, n_neg) = wilcoxon_pair_count(labels, scores)?;
    Ok(F::of(favorable as f64) / F::of((n_pos * n_neg) as f64))
}
