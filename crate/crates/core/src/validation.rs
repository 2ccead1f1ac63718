//! Out-of-sample estimation of the fraud loss and the AUC by repeated
//! (optionally stratified) cross-validation or bootstrap validation, and
//! tuning-value selection from the resulting criterion tables.
//!
//! One model path is fitted per resampling unit and scored for every tuning
//! value and every selection fraction τ; fits are never repeated per tuning
//! value.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::wilcoxon_pair_count;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::path::PathFitter;
use crate::rng::{stream_rng, Rng};
use crate::scalar::Real;

/// Resampling scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum Scheme {
    Cv {
        folds: usize,
        #[serde(default = "default_repeats")]
        repeats: usize,
        #[serde(default)]
        stratified: bool,
    },
    Bootstrap {
        folds: usize,
    },
}

fn default_repeats() -> usize {
    1
}

impl Scheme {
    pub fn label(&self) -> String {
        match self {
            Scheme::Cv {
                folds,
                repeats,
                stratified,
            } => format!(
                "cv{folds}x{repeats}{}",
                if *stratified { "s" } else { "" }
            ),
            Scheme::Bootstrap { folds } => format!("boot{folds}"),
        }
    }
}

/// A declarative resampling plan: scheme, selection fraction, fold seed.
#[derive(Debug, Clone, Copy)]
pub struct ValidationPlan {
    pub scheme: Scheme,
    pub tau: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    #[serde(rename = "fraud")]
    FraudLoss,
    Auc,
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::FraudLoss => "fraud",
            Criterion::Auc => "auc",
        }
    }
}

/// Per-tuning-value out-of-sample statistic.
#[derive(Debug, Clone)]
pub struct CriterionTable {
    pub tuning_values: Vec<f64>,
    pub statistic: Vec<f64>,
    pub criterion: Criterion,
    /// Per-unit statistics (unit-major), for diagnostics.
    pub per_fold_detail: Option<Vec<Vec<f64>>>,
    /// Evaluation folds skipped because the statistic was undefined there.
    pub skipped_folds: usize,
}

impl CriterionTable {
    fn validate(&self) -> Result<()> {
        if self.tuning_values.is_empty() || self.tuning_values.len() != self.statistic.len() {
            return Err(Error::data("criterion table shape mismatch"));
        }
        if self.statistic.iter().any(|s| !s.is_finite()) {
            return Err(Error::numerical("criterion statistic is not finite"));
        }
        Ok(())
    }

    /// The selected tuning value and its index: argmin for fraud loss,
    /// argmax for AUC. Ties resolve toward the more regularized end
    /// (lower index: larger λ, smaller M).
    pub fn select_tuning(&self) -> (f64, usize) {
        let mut best = 0usize;
        for i in 1..self.statistic.len() {
            let better = match self.criterion {
                Criterion::FraudLoss => self.statistic[i] < self.statistic[best],
                Criterion::Auc => self.statistic[i] > self.statistic[best],
            };
            if better {
                best = i;
            }
        }
        (self.tuning_values[best], best)
    }

    /// CSV in the `tuning,statistic,criterion` layout.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "tuning,statistic,criterion")?;
        for (t, s) in self.tuning_values.iter().zip(self.statistic.iter()) {
            writeln!(w, "{t},{s},{}", self.criterion.name())?;
        }
        Ok(())
    }
}

/// D independent partitions of {0..n−1} into L folds with sizes differing
/// by at most one. The stratified variant partitions each class separately
/// and merges, aligning remainders so totals still differ by at most one.
pub fn make_folds(
    n: usize,
    folds: usize,
    repeats: usize,
    stratified: bool,
    labels: &[u8],
    rng: &mut Rng,
) -> Result<Vec<Vec<Vec<usize>>>> {
    if folds < 2 || folds > n {
        return Err(Error::config(format!("need 2 ≤ folds ≤ n, got {folds}")));
    }
    if repeats == 0 {
        return Err(Error::config("need at least one repetition"));
    }
    if labels.len() != n {
        return Err(Error::config("labels length must equal n"));
    }
    let mut plans = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let partition = if stratified {
            let pos: Vec<usize> = (0..n).filter(|&i| labels[i] == 1).collect();
            let neg: Vec<usize> = (0..n).filter(|&i| labels[i] == 0).collect();
            if pos.is_empty() || neg.is_empty() {
                return Err(Error::config(
                    "stratified folds need both classes present",
                ));
            }
            let totals = balanced_counts(n, folds);
            let pos_counts = balanced_counts(pos.len(), folds);
            if pos_counts
                .iter()
                .zip(totals.iter())
                .any(|(p, t)| p > t)
            {
                return Err(Error::config(
                    "impossible stratification: a fold cannot hold its positive share",
                ));
            }
            let mut pos = pos;
            let mut neg = neg;
            pos.shuffle(rng);
            neg.shuffle(rng);
            let mut out = vec![Vec::new(); folds];
            let mut pos_iter = pos.into_iter();
            let mut neg_iter = neg.into_iter();
            for l in 0..folds {
                for _ in 0..pos_counts[l] {
                    out[l].push(pos_iter.next().unwrap());
                }
                for _ in 0..totals[l] - pos_counts[l] {
                    out[l].push(neg_iter.next().unwrap());
                }
                out[l].sort_unstable();
            }
            out
        } else {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let totals = balanced_counts(n, folds);
            let mut out = Vec::with_capacity(folds);
            let mut cursor = 0usize;
            for &t in &totals {
                let mut fold: Vec<usize> = order[cursor..cursor + t].to_vec();
                fold.sort_unstable();
                out.push(fold);
                cursor += t;
            }
            out
        };
        debug_assert_eq!(partition.iter().map(Vec::len).sum::<usize>(), n);
        plans.push(partition);
    }
    Ok(plans)
}

fn balanced_counts(n: usize, parts: usize) -> Vec<usize> {
    let base = n / parts;
    let extra = n % parts;
    (0..parts)
        .map(|i| base + usize::from(i < extra))
        .collect()
}

/// One bootstrap fold: the with-replacement resample and the left-out rows.
#[derive(Debug, Clone)]
pub struct BootstrapFold {
    pub resample: Vec<usize>,
    pub left_out: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BootstrapFolds {
    pub folds: Vec<BootstrapFold>,
    /// Folds dropped because the resample left nothing out.
    pub skipped_empty: usize,
}

/// `folds` resamples of size n with replacement; each evaluation set is the
/// complement of the resample's support.
pub fn make_bootstrap_folds(n: usize, folds: usize, rng: &mut Rng) -> Result<BootstrapFolds> {
    if folds == 0 {
        return Err(Error::config("need at least one bootstrap fold"));
    }
    if n == 0 {
        return Err(Error::config("need at least one observation"));
    }
    let mut out = Vec::with_capacity(folds);
    let mut skipped_empty = 0usize;
    for _ in 0..folds {
        let mut included = vec![false; n];
        let resample: Vec<usize> = (0..n)
            .map(|_| {
                let i = rng.random_range(0..n);
                included[i] = true;
                i
            })
            .collect();
        let left_out: Vec<usize> = (0..n).filter(|&i| !included[i]).collect();
        if left_out.is_empty() {
            skipped_empty += 1;
            continue;
        }
        out.push(BootstrapFold { resample, left_out });
    }
    Ok(BootstrapFolds {
        folds: out,
        skipped_empty,
    })
}

/// Nearest integer to τ·n_eval, floored at one selected case.
pub fn fold_k(tau: f64, n_eval: usize) -> usize {
    let k = (tau * n_eval as f64 + 0.5).floor() as usize;
    k.clamp(1, n_eval)
}

/// The paper's computational-parity repetition counts relative to plain
/// 10-fold CV: 10→1, 5→2, 3→4, 2→9 (doubled: 2, 4, 8, 18).
pub fn parity_repetitions(folds: usize, doubled: bool) -> Result<usize> {
    let single = match folds {
        10 => 1,
        5 => 2,
        3 => 4,
        2 => 9,
        _ => {
            return Err(Error::config(format!(
                "no parity repetition count for {folds}-fold CV"
            )))
        }
    };
    Ok(if doubled { 2 * single } else { single })
}

/// Bootstrap fold counts under the same parity scheme: 9, doubled 18.
pub fn parity_bootstrap_folds(doubled: bool) -> usize {
    if doubled {
        18
    } else {
        9
    }
}

struct ResampleUnit {
    rep: usize,
    fold: usize,
    train: Vec<usize>,
    eval: Vec<usize>,
}

fn realize_units(
    scheme: Scheme,
    n: usize,
    labels: &[u8],
    seed: u64,
) -> Result<(Vec<ResampleUnit>, usize)> {
    let mut rng = stream_rng(seed, &[crate::rng::STREAM_PLAN]);
    match scheme {
        Scheme::Cv {
            folds,
            repeats,
            stratified,
        } => {
            let partitions = make_folds(n, folds, repeats, stratified, labels, &mut rng)?;
            let mut units = Vec::with_capacity(folds * repeats);
            for (d, partition) in partitions.into_iter().enumerate() {
                for (l, eval) in partition.into_iter().enumerate() {
                    let mut in_eval = vec![false; n];
                    for &i in &eval {
                        in_eval[i] = true;
                    }
                    let train: Vec<usize> = (0..n).filter(|&i| !in_eval[i]).collect();
                    units.push(ResampleUnit {
                        rep: d,
                        fold: l,
                        train,
                        eval,
                    });
                }
            }
            Ok((units, 0))
        }
        Scheme::Bootstrap { folds } => {
            let boot = make_bootstrap_folds(n, folds, &mut rng)?;
            let units = boot
                .folds
                .into_iter()
                .enumerate()
                .map(|(b, fold)| ResampleUnit {
                    rep: 0,
                    fold: b,
                    train: fold.resample,
                    eval: fold.left_out,
                })
                .collect();
            Ok((units, boot.skipped_empty))
        }
    }
}

struct UnitOutcome {
    rep: usize,
    tuning_values: Vec<f64>,
    /// false positives among the selected, per (τ, tuning)
    fraud_fp: Vec<Vec<u32>>,
    /// selected count per τ
    k_fold: Vec<u32>,
    /// per-tuning AUC on the left-out rows; None when undefined
    auc: Vec<Option<f64>>,
}

/// Everything a plan evaluation produces, for all τ values at once.
#[derive(Debug, Clone)]
pub struct PlanEvaluation {
    pub tuning_values: Vec<f64>,
    /// fraud statistic per (τ index, tuning index)
    pub fraud: Vec<Vec<f64>>,
    /// per-unit normalized fraud loss, unit-major, for the first τ
    pub fraud_detail_tau0: Vec<Vec<f64>>,
    pub auc: Vec<f64>,
    pub auc_skipped_folds: usize,
    pub bootstrap_skipped_folds: usize,
    pub fits: usize,
}

/// Fit and score a resampling plan once, deriving the fraud statistic for
/// every τ in `taus` and the AUC statistic from the same fits.
pub fn evaluate_plan_multi<F: Real, P: PathFitter<F> + ?Sized>(
    fitter: &P,
    dataset: &Dataset<F>,
    scheme: Scheme,
    taus: &[f64],
    seed: u64,
) -> Result<PlanEvaluation> {
    // τ = 1 (select the whole evaluation set) is admissible: it arises from
    // k = n_test grid points
    if taus.is_empty() || taus.iter().any(|&t| t <= 0.0 || t > 1.0) {
        return Err(Error::config("τ values must lie in (0,1]"));
    }
    let n = dataset.n();
    let labels = dataset.labels();
    let (units, bootstrap_skipped) = realize_units(scheme, n, labels, seed)?;
    if units.is_empty() {
        return Err(Error::data("no usable resampling folds"));
    }
    // single-class training slices cannot support every estimator; surface
    // the stratification hint deterministically before any fitting
    for unit in &units {
        let pos = unit.train.iter().filter(|&&i| labels[i] == 1).count();
        if pos == 0 || pos == unit.train.len() {
            return Err(Error::StratificationRequired {
                rep: unit.rep,
                fold: unit.fold,
            });
        }
    }

    let outcomes: Vec<Result<UnitOutcome>> = units
        .par_iter()
        .map(|unit| {
            let train = dataset.subset(&unit.train);
            let path = fitter.fit_path(&train)?;
            let scores = path.score_matrix(&eval_matrix(dataset, &unit.eval))?;
            let eval_labels: Vec<u8> = unit.eval.iter().map(|&i| labels[i]).collect();
            let n_eval = unit.eval.len();
            let t_count = path.len();

            let mut fraud_fp = vec![vec![0u32; t_count]; taus.len()];
            let mut k_fold_by_tau = vec![0u32; taus.len()];
            for (ti, k) in k_fold_by_tau.iter_mut().enumerate() {
                *k = fold_k(taus[ti], n_eval) as u32;
            }
            let mut auc = Vec::with_capacity(t_count);
            let mut order: Vec<u32> = (0..n_eval as u32).collect();
            for t in 0..t_count {
                let col: Vec<F> = (0..n_eval).map(|i| scores.get(i, t)).collect();
                // descending score, ascending index on ties
                order.sort_by(|&a, &b| {
                    col[b as usize]
                        .partial_cmp(&col[a as usize])
                        .expect("finite scores")
                        .then(a.cmp(&b))
                });
                // prefix false-positive counts over the sorted order
                let mut fp_prefix = Vec::with_capacity(n_eval + 1);
                fp_prefix.push(0u32);
                let mut acc = 0u32;
                for &r in &order {
                    acc += u32::from(eval_labels[r as usize] == 0);
                    fp_prefix.push(acc);
                }
                for (ti, fp_row) in fraud_fp.iter_mut().enumerate() {
                    fp_row[t] = fp_prefix[k_fold_by_tau[ti] as usize];
                }
                auc.push(match wilcoxon_pair_count(&eval_labels, &col) {
                    Ok((fav, n1, n0)) => Some(fav as f64 / (n1 * n0) as f64),
                    Err(_) => None,
                });
            }
            Ok(UnitOutcome {
                rep: unit.rep,
                tuning_values: path.tuning_values(),
                fraud_fp,
                k_fold: k_fold_by_tau,
                auc,
            })
        })
        .collect();

    let mut resolved = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        resolved.push(o?);
    }
    let tuning_values = resolved[0].tuning_values.clone();
    let t_count = tuning_values.len();
    if resolved.iter().any(|o| o.tuning_values != tuning_values) {
        return Err(Error::numerical(
            "fitter produced different tuning grids across folds; fix the grid up front",
        ));
    }

    // aggregate
    let n_units = resolved.len();
    let mut fraud = vec![vec![0.0f64; t_count]; taus.len()];
    match scheme {
        Scheme::Cv { repeats, .. } => {
            // mean over folds within a repetition, then mean over repetitions
            for ti in 0..taus.len() {
                for t in 0..t_count {
                    let mut by_rep = vec![(0.0f64, 0usize); repeats];
                    for o in &resolved {
                        by_rep[o.rep].0 += o.fraud_fp[ti][t] as f64 / o.k_fold[ti] as f64;
                        by_rep[o.rep].1 += 1;
                    }
                    fraud[ti][t] = by_rep
                        .iter()
                        .map(|(sum, count)| sum / *count as f64)
                        .sum::<f64>()
                        / repeats as f64;
                }
            }
        }
        Scheme::Bootstrap { .. } => {
            // pooled ratio: Σ_b FP_b / Σ_b k_b
            for ti in 0..taus.len() {
                let total_k: f64 = resolved.iter().map(|o| o.k_fold[ti] as f64).sum();
                for t in 0..t_count {
                    let total_fp: f64 =
                        resolved.iter().map(|o| o.fraud_fp[ti][t] as f64).sum();
                    fraud[ti][t] = total_fp / total_k;
                }
            }
        }
    }

    // AUC undefined on every fold degrades to NaN; only the AUC table
    // constructor treats that as an error
    let mut auc = vec![0.0f64; t_count];
    let mut auc_skipped = 0usize;
    for t in 0..t_count {
        let mut sum = 0.0;
        let mut count = 0usize;
        for o in &resolved {
            match o.auc[t] {
                Some(v) => {
                    sum += v;
                    count += 1;
                }
                None => {
                    if t == 0 {
                        auc_skipped += 1;
                    }
                }
            }
        }
        auc[t] = if count == 0 {
            f64::NAN
        } else {
            sum / count as f64
        };
    }

    let fraud_detail_tau0: Vec<Vec<f64>> = resolved
        .iter()
        .map(|o| {
            (0..t_count)
                .map(|t| o.fraud_fp[0][t] as f64 / o.k_fold[0] as f64)
                .collect()
        })
        .collect();

    Ok(PlanEvaluation {
        tuning_values,
        fraud,
        fraud_detail_tau0,
        auc,
        auc_skipped_folds: auc_skipped,
        bootstrap_skipped_folds: bootstrap_skipped,
        fits: n_units,
    })
}

fn eval_matrix<F: Real>(dataset: &Dataset<F>, rows: &[usize]) -> crate::linalg::Matrix<F> {
    let p = dataset.p();
    let mut data = Vec::with_capacity(rows.len() * p);
    for &i in rows {
        data.extend_from_slice(dataset.covariates().row(i));
    }
    crate::linalg::Matrix::from_vec(rows.len(), p, data)
}

/// Cross-validated fraud loss at the plan's τ.
pub fn cv_fraud_loss<F: Real, P: PathFitter<F>>(
    fitter: &P,
    dataset: &Dataset<F>,
    plan: &ValidationPlan,
) -> Result<CriterionTable> {
    let Scheme::Cv { .. } = plan.scheme else {
        return Err(Error::config("cv_fraud_loss requires a CV plan"));
    };
    fraud_table(fitter, dataset, plan)
}

/// Bootstrap-validated fraud loss (pooled Efron ratio) at the plan's τ.
pub fn boot_fraud_loss<F: Real, P: PathFitter<F>>(
    fitter: &P,
    dataset: &Dataset<F>,
    plan: &ValidationPlan,
) -> Result<CriterionTable> {
    let Scheme::Bootstrap { .. } = plan.scheme else {
        return Err(Error::config("boot_fraud_loss requires a bootstrap plan"));
    };
    fraud_table(fitter, dataset, plan)
}

fn fraud_table<F: Real, P: PathFitter<F>>(
    fitter: &P,
    dataset: &Dataset<F>,
    plan: &ValidationPlan,
) -> Result<CriterionTable> {
    let eval = evaluate_plan_multi(fitter, dataset, plan.scheme, &[plan.tau], plan.seed)?;
    let table = CriterionTable {
        tuning_values: eval.tuning_values,
        statistic: eval.fraud.into_iter().next().unwrap(),
        criterion: Criterion::FraudLoss,
        per_fold_detail: Some(eval.fraud_detail_tau0),
        skipped_folds: eval.bootstrap_skipped_folds,
    };
    table.validate()?;
    Ok(table)
}

/// Out-of-sample AUC averaged over folds and repetitions (CV) or folds
/// (bootstrap). Folds with a single class in the evaluation set are
/// skipped and counted.
pub fn cv_auc<F: Real, P: PathFitter<F>>(
    fitter: &P,
    dataset: &Dataset<F>,
    plan: &ValidationPlan,
) -> Result<CriterionTable> {
    let eval = evaluate_plan_multi(fitter, dataset, plan.scheme, &[plan.tau], plan.seed)?;
    if eval.auc.iter().any(|v| v.is_nan()) {
        return Err(Error::data(
            "AUC undefined on every evaluation fold; stratify or enlarge folds",
        ));
    }
    let table = CriterionTable {
        tuning_values: eval.tuning_values,
        statistic: eval.auc,
        criterion: Criterion::Auc,
        per_fold_detail: None,
        skipped_folds: eval.auc_skipped_folds + eval.bootstrap_skipped_folds,
    };
    table.validate()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::path::ModelPath;
    use crate::ridge::{RidgeModel, Standardization};
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn toy_dataset(labels: Vec<u8>) -> Dataset<f64> {
        let n = labels.len();
        let data: Vec<f64> = (0..n).map(|i| i as f64).collect();
        Dataset::new(Matrix::from_vec(n, 1, data), labels).unwrap()
    }

    /// Ignores its training data: every tuning value scores all rows with
    /// the same constant. Counts fit calls.
    struct ConstantFitter {
        tunings: usize,
        fits: AtomicUsize,
    }

    impl ConstantFitter {
        fn new(tunings: usize) -> Self {
            ConstantFitter {
                tunings,
                fits: AtomicUsize::new(0),
            }
        }
    }

    impl PathFitter<f64> for ConstantFitter {
        fn fit_path(&self, _data: &Dataset<f64>) -> Result<ModelPath<f64>> {
            self.fits.fetch_add(1, Ordering::SeqCst);
            let models = (0..self.tunings)
                .map(|t| RidgeModel {
                    intercept: 0.0,
                    coefficients: vec![0.0],
                    lambda: (self.tunings - t) as f64,
                    standardization: Standardization {
                        means: vec![0.0],
                        scales: vec![1.0],
                    },
                })
                .collect();
            ModelPath::ridge(models)
        }
    }

    /// Scores each row by its single covariate value (the original row
    /// index in `toy_dataset`), so score order is known in tests.
    struct LookupFitter;

    impl PathFitter<f64> for LookupFitter {
        fn fit_path(&self, _data: &Dataset<f64>) -> Result<ModelPath<f64>> {
            let models = vec![RidgeModel {
                intercept: 0.0,
                coefficients: vec![1.0],
                lambda: 1.0,
                standardization: Standardization {
                    means: vec![0.0],
                    scales: vec![1.0],
                },
            }];
            ModelPath::ridge(models)
        }
    }

    #[test]
    fn folds_partition_and_balance() {
        let labels = vec![0u8; 10];
        let mut rng = stream_rng(1, &[1]);
        let plans = make_folds(10, 2, 1, false, &labels, &mut rng).unwrap();
        assert_eq!(plans.len(), 1);
        let folds = &plans[0];
        assert_eq!(folds.len(), 2);
        assert_eq!(folds[0].len(), 5);
        assert_eq!(folds[1].len(), 5);
        let mut all: Vec<usize> = folds.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn fold_sizes_differ_by_at_most_one() {
        let labels = vec![0u8; 7];
        let mut rng = stream_rng(2, &[1]);
        let plans = make_folds(7, 3, 1, false, &labels, &mut rng).unwrap();
        let mut sizes: Vec<usize> = plans[0].iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 3]);
    }

    #[test]
    fn stratified_folds_split_positives_evenly() {
        let mut labels = vec![0u8; 100];
        for l in labels.iter_mut().take(20) {
            *l = 1;
        }
        let mut rng = stream_rng(3, &[1]);
        let plans = make_folds(100, 5, 3, true, &labels, &mut rng).unwrap();
        for partition in &plans {
            for fold in partition {
                let pos = fold.iter().filter(|&&i| labels[i] == 1).count();
                assert_eq!(pos, 4);
                assert_eq!(fold.len(), 20);
            }
        }
    }

    #[test]
    fn stratified_proportion_within_one_over_fold_size() {
        // uneven class count and fold remainder
        let mut labels = vec![0u8; 103];
        for l in labels.iter_mut().take(21) {
            *l = 1;
        }
        let mut rng = stream_rng(4, &[1]);
        let plans = make_folds(103, 5, 2, true, &labels, &mut rng).unwrap();
        let pi = 21.0 / 103.0;
        for partition in &plans {
            let sizes: Vec<usize> = partition.iter().map(Vec::len).collect();
            assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            for fold in partition {
                let pos = fold.iter().filter(|&&i| labels[i] == 1).count() as f64;
                let share = pos / fold.len() as f64;
                assert!((share - pi).abs() <= 1.0 / fold.len() as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn bootstrap_left_out_complements_support() {
        let mut rng = stream_rng(5, &[1]);
        let boot = make_bootstrap_folds(50, 10, &mut rng).unwrap();
        for fold in &boot.folds {
            assert_eq!(fold.resample.len(), 50);
            let support: std::collections::HashSet<usize> =
                fold.resample.iter().copied().collect();
            for &i in &fold.left_out {
                assert!(!support.contains(&i));
            }
            assert_eq!(
                support.len() + fold.left_out.len(),
                50,
                "support and left-out must partition the index set"
            );
        }
    }

    #[test]
    fn bootstrap_exclusion_rate_near_e_inverse() {
        let mut rng = stream_rng(6, &[1]);
        let n = 1000;
        let boot = make_bootstrap_folds(n, 500, &mut rng).unwrap();
        let mean_frac: f64 = boot
            .folds
            .iter()
            .map(|f| f.left_out.len() as f64 / n as f64)
            .sum::<f64>()
            / boot.folds.len() as f64;
        assert!((mean_frac - 0.368).abs() < 0.01, "left-out {mean_frac}");
    }

    #[test]
    fn parity_table_matches() {
        assert_eq!(parity_repetitions(10, false).unwrap(), 1);
        assert_eq!(parity_repetitions(5, false).unwrap(), 2);
        assert_eq!(parity_repetitions(3, false).unwrap(), 4);
        assert_eq!(parity_repetitions(2, false).unwrap(), 9);
        assert_eq!(parity_repetitions(10, true).unwrap(), 2);
        assert_eq!(parity_repetitions(5, true).unwrap(), 4);
        assert_eq!(parity_repetitions(3, true).unwrap(), 8);
        assert_eq!(parity_repetitions(2, true).unwrap(), 18);
        assert!(parity_repetitions(4, false).is_err());
        assert_eq!(parity_bootstrap_folds(false), 9);
        assert_eq!(parity_bootstrap_folds(true), 18);
    }

    #[test]
    fn fold_k_rounds_half_up_with_floor_one() {
        assert_eq!(fold_k(0.2, 10), 2);
        assert_eq!(fold_k(0.25, 10), 3); // 2.5 rounds up
        assert_eq!(fold_k(0.01, 10), 1); // floored at 1
        assert_eq!(fold_k(0.99, 2), 2);
    }

    #[test]
    fn select_tuning_prefers_regularized_end_on_ties() {
        let table = CriterionTable {
            tuning_values: vec![100.0, 10.0, 1.0],
            statistic: vec![0.3, 0.3, 0.3],
            criterion: Criterion::FraudLoss,
            per_fold_detail: None,
            skipped_folds: 0,
        };
        assert_eq!(table.select_tuning(), (100.0, 0));
        let auc_table = CriterionTable {
            tuning_values: vec![1.0, 2.0, 3.0],
            statistic: vec![0.6, 0.8, 0.8],
            criterion: Criterion::Auc,
            per_fold_detail: None,
            skipped_folds: 0,
        };
        assert_eq!(auc_table.select_tuning(), (2.0, 1));
    }

    #[test]
    fn select_tuning_monotone_statistic_takes_endpoint() {
        let table = CriterionTable {
            tuning_values: vec![8.0, 4.0, 2.0],
            statistic: vec![0.5, 0.4, 0.3],
            criterion: Criterion::FraudLoss,
            per_fold_detail: None,
            skipped_folds: 0,
        };
        assert_eq!(table.select_tuning(), (2.0, 2));
    }

    #[test]
    fn constant_fitter_statistic_is_fold_negative_rate_when_selecting_all() {
        // τ close to 1 selects every evaluation row, so the fraud statistic
        // equals the mean fold negative rate for every tuning value
        let labels = vec![1u8, 0, 1, 0, 0, 1, 0, 0];
        let data = toy_dataset(labels.clone());
        let fitter = ConstantFitter::new(3);
        let eval = evaluate_plan_multi(
            &fitter,
            &data,
            Scheme::Cv {
                folds: 2,
                repeats: 1,
                stratified: true,
            },
            &[0.999],
            7,
        )
        .unwrap();
        // stratified 2-fold on 8 rows with 3 positives: folds hold 2 and 1
        // positives among 4 rows → negative rates 0.5 and 0.75, mean 0.625
        for t in 0..3 {
            let stat = eval.fraud[0][t];
            assert!((stat - 0.625).abs() < 1e-12, "tuning {t}: {stat}");
        }
    }

    #[test]
    fn constant_fitter_statistic_identical_across_tunings() {
        let labels = vec![1u8, 0, 1, 0, 1, 0, 0, 0, 1, 0];
        let data = toy_dataset(labels);
        let fitter = ConstantFitter::new(4);
        let eval = evaluate_plan_multi(
            &fitter,
            &data,
            Scheme::Cv {
                folds: 2,
                repeats: 2,
                stratified: true,
            },
            &[0.3, 0.6],
            13,
        )
        .unwrap();
        for row in &eval.fraud {
            for t in 1..row.len() {
                assert_eq!(row[0], row[t]);
            }
        }
    }

    #[test]
    fn one_fit_per_unit_never_per_tuning() {
        let labels = vec![1u8, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0];
        let data = toy_dataset(labels);
        let fitter = ConstantFitter::new(5);
        let eval = evaluate_plan_multi(
            &fitter,
            &data,
            Scheme::Cv {
                folds: 3,
                repeats: 2,
                stratified: true,
            },
            &[0.2, 0.4, 0.6, 0.8],
            99,
        )
        .unwrap();
        assert_eq!(eval.fits, 6);
        assert_eq!(fitter.fits.load(Ordering::SeqCst), 6);
    }

    #[test]
    fn perfect_scores_give_zero_fraud_loss_and_unit_auc() {
        // lookup fitter scores by covariate value = row index; labels follow
        // the same order so the top rows are exactly the positives
        let labels = vec![0u8, 0, 0, 0, 0, 0, 1, 1, 1, 1];
        let data = toy_dataset(labels.clone());
        let fitter = LookupFitter;
        let plan = ValidationPlan {
            scheme: Scheme::Cv {
                folds: 2,
                repeats: 1,
                stratified: true,
            },
            tau: 0.4,
            seed: 3,
        };
        let table = cv_fraud_loss(&fitter, &data, &plan).unwrap();
        assert_eq!(table.statistic[0], 0.0);
        let auc = cv_auc(&fitter, &data, &plan).unwrap();
        assert_eq!(auc.statistic[0], 1.0);
    }

    #[test]
    fn hand_computed_two_fold_example() {
        // n = 6, L = 2, D = 1, τ = 0.5 ⇒ k_fold = round(0.5·3)+... = 2
        // per fold. Scores are the row indices (LookupFitter); labels below.
        // Construct the fold split deterministically by seed probing: we
        // instead verify against an independent recomputation from the same
        // realized folds.
        let labels = vec![0u8, 1, 0, 1, 0, 1];
        let data = toy_dataset(labels.clone());
        let fitter = LookupFitter;
        let plan = ValidationPlan {
            scheme: Scheme::Cv {
                folds: 2,
                repeats: 1,
                stratified: false,
            },
            tau: 0.5,
            seed: 41,
        };
        let table = cv_fraud_loss(&fitter, &data, &plan).unwrap();

        // independent recomputation: realize the same folds, apply the
        // formula (1/L) Σ_l FP_l / k_l by hand
        let mut rng = stream_rng(41, &[crate::rng::STREAM_PLAN]);
        let partitions = make_folds(6, 2, 1, false, &labels, &mut rng).unwrap();
        let mut expect = 0.0;
        for fold in &partitions[0] {
            let k = fold_k(0.5, fold.len());
            // scores are row indices; top-k are the largest indices
            let mut sorted = fold.clone();
            sorted.sort_by(|a, b| b.cmp(a));
            let fp = sorted[..k].iter().filter(|&&i| labels[i] == 0).count();
            expect += fp as f64 / k as f64;
        }
        expect /= 2.0;
        assert!((table.statistic[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn two_fold_auc_is_the_mean_of_per_fold_aucs() {
        let labels = vec![0u8, 1, 0, 1, 0, 1, 1, 0];
        let data = toy_dataset(labels.clone());
        let fitter = LookupFitter;
        let plan = ValidationPlan {
            scheme: Scheme::Cv {
                folds: 2,
                repeats: 1,
                stratified: true,
            },
            tau: 0.5,
            seed: 23,
        };
        let table = cv_auc(&fitter, &data, &plan).unwrap();

        // hand recomputation: realize the same folds, score by row index,
        // average the two fold AUCs
        let mut rng = stream_rng(23, &[crate::rng::STREAM_PLAN]);
        let partitions = make_folds(8, 2, 1, true, &labels, &mut rng).unwrap();
        let mut expect = 0.0;
        for fold in &partitions[0] {
            let fold_labels: Vec<u8> = fold.iter().map(|&i| labels[i]).collect();
            let fold_scores: Vec<f64> = fold.iter().map(|&i| i as f64).collect();
            expect += crate::criteria::auc_wilcoxon(&fold_labels, &fold_scores).unwrap();
        }
        expect /= 2.0;
        assert!((table.statistic[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn bootstrap_single_fold_is_plain_ratio() {
        let labels = vec![0u8, 1, 0, 1, 0, 1, 0, 1];
        let data = toy_dataset(labels.clone());
        let fitter = LookupFitter;
        let plan = ValidationPlan {
            scheme: Scheme::Bootstrap { folds: 1 },
            tau: 0.5,
            seed: 11,
        };
        let table = boot_fraud_loss(&fitter, &data, &plan).unwrap();

        let mut rng = stream_rng(11, &[crate::rng::STREAM_PLAN]);
        let boot = make_bootstrap_folds(8, 1, &mut rng).unwrap();
        let left = &boot.folds[0].left_out;
        let k = fold_k(0.5, left.len());
        let mut sorted = left.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        let fp = sorted[..k].iter().filter(|&&i| labels[i] == 0).count();
        assert!((table.statistic[0] - fp as f64 / k as f64).abs() < 1e-12);
    }

    #[test]
    fn single_class_training_fold_demands_stratification() {
        // 2 positives in 8 rows: unstratified 2-fold will sometimes place
        // both positives in one fold, leaving the other fold single-class;
        // scan seeds until the error path triggers
        let labels = vec![1u8, 1, 0, 0, 0, 0, 0, 0];
        let data = toy_dataset(labels);
        let fitter = LookupFitter;
        let mut saw_error = false;
        for seed in 0..200 {
            let plan = ValidationPlan {
                scheme: Scheme::Cv {
                    folds: 2,
                    repeats: 1,
                    stratified: false,
                },
                tau: 0.5,
                seed,
            };
            match cv_fraud_loss(&fitter, &data, &plan) {
                Err(Error::StratificationRequired { .. }) => {
                    saw_error = true;
                    break;
                }
                Ok(_) => {}
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
        assert!(saw_error, "stratification error never triggered");
    }

    #[test]
    fn reproducible_given_seed() {
        let labels = vec![1u8, 0, 1, 0, 1, 0, 1, 0, 1, 0];
        let data = toy_dataset(labels);
        let fitter = LookupFitter;
        let plan = ValidationPlan {
            scheme: Scheme::Cv {
                folds: 5,
                repeats: 2,
                stratified: true,
            },
            tau: 0.3,
            seed: 7,
        };
        let a = cv_fraud_loss(&fitter, &data, &plan).unwrap();
        let b = cv_fraud_loss(&fitter, &data, &plan).unwrap();
        assert_eq!(a.statistic, b.statistic);
    }

    #[test]
    fn csv_layout() {
        let table = CriterionTable {
            tuning_values: vec![2.0, 1.0],
            statistic: vec![0.25, 0.5],
            criterion: Criterion::FraudLoss,
            per_fold_detail: None,
            skipped_folds: 0,
        };
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "tuning,statistic,criterion\n2,0.25,fraud\n1,0.5,fraud\n"
        );
    }
}
