//! L2-penalized logistic regression fitted by iteratively reweighted least
//! squares (Newton with step halving), over a warm-started grid of penalty
//! values. The intercept is never penalized. Covariates are standardized
//! internally; fitted models store the transform.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, dot, Matrix};
use crate::path::ModelPath;
use crate::scalar::{log1p_exp, sigmoid, Real};

#[derive(Debug, Clone, Copy)]
pub struct RidgeOptions<F> {
    pub max_iter: usize,
    /// Converged when the penalized-objective gradient sup-norm drops below this.
    pub gradient_tol: F,
}

impl<F: Real> Default for RidgeOptions<F> {
    fn default() -> Self {
        RidgeOptions {
            max_iter: 100,
            gradient_tol: F::of(1e-8),
        }
    }
}

/// Per-feature affine transform applied before fitting and prediction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "F: Serialize + serde::de::DeserializeOwned")]
pub struct Standardization<F> {
    pub means: Vec<F>,
    pub scales: Vec<F>,
}

impl<F: Real> Standardization<F> {
    pub fn fit(x: &Matrix<F>) -> Self {
        let (n, p) = (x.rows(), x.cols());
        let nf = F::of_usize(n.max(1));
        let mut means = vec![F::zero(); p];
        let mut scales = vec![F::zero(); p];
        for i in 0..n {
            for (j, &v) in x.row(i).iter().enumerate() {
                means[j] = means[j] + v;
            }
        }
        for m in means.iter_mut() {
            *m = *m / nf;
        }
        for i in 0..n {
            for (j, &v) in x.row(i).iter().enumerate() {
                let d = v - means[j];
                scales[j] = scales[j] + d * d;
            }
        }
        for s in scales.iter_mut() {
            *s = (*s / nf).sqrt();
            // constant columns pass through centered; coefficient stays 0
            if *s < F::of(1e-12) {
                *s = F::one();
            }
        }
        Standardization { means, scales }
    }

    pub fn apply(&self, x: &Matrix<F>) -> Matrix<F> {
        let (n, p) = (x.rows(), x.cols());
        assert_eq!(p, self.means.len());
        let mut out = Matrix::zeros(n, p);
        for i in 0..n {
            let row = x.row(i);
            let out_row = out.row_mut(i);
            for j in 0..p {
                out_row[j] = (row[j] - self.means[j]) / self.scales[j];
            }
        }
        out
    }
}

/// A fitted ridge-logistic model. Coefficients live in standardized
/// covariate space.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "F: Serialize + serde::de::DeserializeOwned")]
pub struct RidgeModel<F> {
    pub intercept: F,
    pub coefficients: Vec<F>,
    pub lambda: F,
    pub standardization: Standardization<F>,
}

impl<F: Real> RidgeModel<F> {
    /// Predicted probabilities for raw (unstandardized) covariates.
    pub fn predict_proba(&self, x: &Matrix<F>) -> Result<Vec<F>> {
        if x.cols() != self.coefficients.len() {
            return Err(Error::data(format!(
                "model expects {} covariates, got {}",
                self.coefficients.len(),
                x.cols()
            )));
        }
        let std = self.standardization.apply(x);
        Ok((0..std.rows())
            .map(|i| sigmoid(self.intercept + dot(std.row(i), &self.coefficients)))
            .collect())
    }
}

/// Penalized log-likelihood Σᵢ[yᵢηᵢ + log(1−pᵢ)] − λΣⱼβⱼ², evaluated on
/// an already-standardized covariate matrix.
pub fn penalized_objective<F: Real>(
    x_std: &Matrix<F>,
    y: &[u8],
    intercept: F,
    coefficients: &[F],
    lambda: F,
) -> F {
    let mut ll = F::zero();
    for i in 0..x_std.rows() {
        let eta = intercept + dot(x_std.row(i), coefficients);
        let yi = F::of_usize(y[i] as usize);
        ll = ll + yi * eta - log1p_exp(eta);
    }
    let penalty = coefficients.iter().map(|&b| b * b).sum::<F>();
    ll - lambda * penalty
}

/// Gradient of [`penalized_objective`] in (intercept, coefficients) order.
pub fn penalized_gradient<F: Real>(
    x_std: &Matrix<F>,
    y: &[u8],
    intercept: F,
    coefficients: &[F],
    lambda: F,
) -> Vec<F> {
    let p = coefficients.len();
    let mut grad = vec![F::zero(); p + 1];
    for i in 0..x_std.rows() {
        let row = x_std.row(i);
        let eta = intercept + dot(row, coefficients);
        let resid = F::of_usize(y[i] as usize) - sigmoid(eta);
        grad[0] = grad[0] + resid;
        for j in 0..p {
            grad[j + 1] = grad[j + 1] + resid * row[j];
        }
    }
    let two = F::of(2.0);
    for j in 0..p {
        grad[j + 1] = grad[j + 1] - two * lambda * coefficients[j];
    }
    grad
}

fn sup_norm<F: Real>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |m, &x| m.max(x.abs()))
}

/// Newton/IRLS on standardized data from a caller-supplied start.
fn fit_standardized<F: Real>(
    x_std: &Matrix<F>,
    y: &[u8],
    lambda: F,
    start: (F, Vec<F>),
    opts: &RidgeOptions<F>,
) -> Result<(F, Vec<F>)> {
    let (n, p) = (x_std.rows(), x_std.cols());
    let (mut intercept, mut beta) = start;
    let two = F::of(2.0);
    let mut objective = penalized_objective(x_std, y, intercept, &beta, lambda);
    for iter in 0..opts.max_iter {
        let grad = penalized_gradient(x_std, y, intercept, &beta, lambda);
        let gnorm = sup_norm(&grad);
        if gnorm < opts.gradient_tol {
            return Ok((intercept, beta));
        }
        // negative Hessian: [[Σw, Σw xᵀ], [Σw x, XᵀWX + 2λI]]
        let mut h = Matrix::zeros(p + 1, p + 1);
        for i in 0..n {
            let row = x_std.row(i);
            let eta = intercept + dot(row, &beta);
            let pi = sigmoid(eta);
            let w = (pi * (F::one() - pi)).max(F::of(1e-12));
            h.set(0, 0, h.get(0, 0) + w);
            for j in 0..p {
                let wx = w * row[j];
                h.set(0, j + 1, h.get(0, j + 1) + wx);
                let hrow = h.row_mut(j + 1);
                for k in j..p {
                    hrow[k + 1] = hrow[k + 1] + wx * row[k];
                }
            }
        }
        for j in 0..p {
            h.set(j + 1, j + 1, h.get(j + 1, j + 1) + two * lambda);
        }
        for a in 0..p + 1 {
            for b in 0..a {
                h.set(a, b, h.get(b, a));
            }
        }
        let chol = match h.cholesky() {
            Ok(c) => c,
            Err(_) => {
                // near-singular weighted design; tiny jitter, one retry
                let bump = F::of(1e-10) * (F::one() + h.get(0, 0));
                for d in 0..p + 1 {
                    h.set(d, d, h.get(d, d) + bump);
                }
                h.cholesky().map_err(|_| {
                    nonconvergence_error(iter, gnorm, intercept, &beta)
                })?
            }
        };
        let direction = cholesky_solve(&chol, &grad);

        // step halving keeps the objective non-decreasing up to evaluation
        // noise: near the optimum the true Newton improvement is below the
        // objective's rounding error, and rejecting such steps would freeze
        // the iterate with the gradient still above tolerance
        let noise = F::epsilon() * (F::one() + objective.abs()) * F::of(4.0);
        let mut step = F::one();
        let mut accepted = false;
        for _ in 0..50 {
            let cand_intercept = intercept + step * direction[0];
            let cand_beta: Vec<F> = beta
                .iter()
                .zip(direction[1..].iter())
                .map(|(&b, &d)| b + step * d)
                .collect();
            let cand_obj = penalized_objective(x_std, y, cand_intercept, &cand_beta, lambda);
            if cand_obj.is_finite() && cand_obj >= objective - noise {
                intercept = cand_intercept;
                beta = cand_beta;
                objective = cand_obj;
                accepted = true;
                break;
            }
            step = step / two;
        }
        if !accepted {
            let grad = penalized_gradient(x_std, y, intercept, &beta, lambda);
            let gnorm = sup_norm(&grad);
            if gnorm < opts.gradient_tol {
                return Ok((intercept, beta));
            }
            return Err(nonconvergence_error(iter + 1, gnorm, intercept, &beta));
        }
    }
    let grad = penalized_gradient(x_std, y, intercept, &beta, lambda);
    let gnorm = sup_norm(&grad);
    if gnorm < opts.gradient_tol {
        return Ok((intercept, beta));
    }
    Err(nonconvergence_error(opts.max_iter, gnorm, intercept, &beta))
}

fn nonconvergence_error<F: Real>(iterations: usize, gnorm: F, intercept: F, beta: &[F]) -> Error {
    let mut last = Vec::with_capacity(beta.len() + 1);
    last.push(intercept.into_f64());
    last.extend(beta.iter().map(|b| b.into_f64()));
    Error::NoConvergence {
        iterations,
        gradient_norm: gnorm.into_f64(),
        last_iterate: last,
    }
}

fn smoothed_logit_start<F: Real>(dataset: &Dataset<F>) -> F {
    let n = dataset.n();
    let pos = dataset.positives();
    let p = (pos as f64 + 0.5) / (n as f64 + 1.0);
    F::of((p / (1.0 - p)).ln())
}

/// Maximize the penalized log-likelihood at a single penalty value.
pub fn fit_ridge<F: Real>(
    dataset: &Dataset<F>,
    lambda: F,
    opts: &RidgeOptions<F>,
) -> Result<RidgeModel<F>> {
    if dataset.n() == 0 {
        return Err(Error::data("cannot fit on an empty dataset"));
    }
    if lambda < F::zero() {
        return Err(Error::config("lambda must be nonnegative"));
    }
    let pos = dataset.positives();
    if lambda == F::zero() && (pos == 0 || pos == dataset.n()) {
        return Err(Error::data(
            "unpenalized fit requires both classes present",
        ));
    }
    let standardization = Standardization::fit(dataset.covariates());
    let x_std = standardization.apply(dataset.covariates());
    let start = (smoothed_logit_start(dataset), vec![F::zero(); dataset.p()]);
    let (intercept, coefficients) =
        fit_standardized(&x_std, dataset.labels(), lambda, start, opts)?;
    Ok(RidgeModel {
        intercept,
        coefficients,
        lambda,
        standardization,
    })
}

/// Fit a descending penalty grid with warm starts.
pub fn fit_ridge_path<F: Real>(
    dataset: &Dataset<F>,
    lambda_grid: &[F],
    opts: &RidgeOptions<F>,
) -> Result<ModelPath<F>> {
    validate_lambda_grid(lambda_grid)?;
    let standardization = Standardization::fit(dataset.covariates());
    let x_std = standardization.apply(dataset.covariates());
    let mut models = Vec::with_capacity(lambda_grid.len());
    let mut start = (smoothed_logit_start(dataset), vec![F::zero(); dataset.p()]);
    for &lambda in lambda_grid {
        let (intercept, coefficients) =
            fit_standardized(&x_std, dataset.labels(), lambda, start.clone(), opts)?;
        start = (intercept, coefficients.clone());
        models.push(RidgeModel {
            intercept,
            coefficients,
            lambda,
            standardization: standardization.clone(),
        });
    }
    ModelPath::ridge(models)
}

pub fn validate_lambda_grid<F: Real>(grid: &[F]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::config("lambda grid must be nonempty"));
    }
    if grid.iter().any(|&l| l <= F::zero()) {
        return Err(Error::config("lambda grid values must be positive"));
    }
    if grid.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::config("lambda grid must be strictly descending"));
    }
    Ok(())
}

/// Data-driven default grid: `count` log-spaced values from λ_max (the
/// smallest power-of-two multiple of the null-model gradient scale at which
/// every coefficient shrinks below 1e-4) down to `min_ratio`·λ_max.
pub fn default_lambda_grid<F: Real>(
    dataset: &Dataset<F>,
    count: usize,
    min_ratio: F,
    opts: &RidgeOptions<F>,
) -> Result<Vec<F>> {
    if count == 0 {
        return Err(Error::config("grid length must be positive"));
    }
    let standardization = Standardization::fit(dataset.covariates());
    let x_std = standardization.apply(dataset.covariates());
    let y = dataset.labels();
    // gradient scale at the null model
    let ybar = dataset.label_mean();
    let mut scale = F::zero();
    for i in 0..x_std.rows() {
        let resid = F::of_usize(y[i] as usize) - ybar;
        for (j, &v) in x_std.row(i).iter().enumerate() {
            let _ = j;
            scale = scale.max((resid * v).abs());
        }
    }
    let mut lambda_max = scale.max(F::of(1e-4));
    let mut start = (smoothed_logit_start(dataset), vec![F::zero(); dataset.p()]);
    let threshold = F::of(1e-4);
    for _ in 0..80 {
        let (b0, beta) = fit_standardized(&x_std, y, lambda_max, start.clone(), opts)?;
        start = (b0, beta.clone());
        if sup_norm(&beta) < threshold {
            break;
        }
        lambda_max = lambda_max * F::of(2.0);
    }
    let lambda_min = lambda_max * min_ratio;
    Ok(log_spaced_descending(lambda_max, lambda_min, count))
}

fn log_spaced_descending<F: Real>(hi: F, lo: F, count: usize) -> Vec<F> {
    if count == 1 {
        return vec![hi];
    }
    let (lh, ll) = (hi.ln(), lo.ln());
    (0..count)
        .map(|i| {
            let t = F::of_usize(i) / F::of_usize(count - 1);
            (lh + (ll - lh) * t).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng as _;
    use rand_distr::{Distribution, StandardNormal};

    fn random_instance(n: usize, p: usize, seed: u64) -> Dataset<f64> {
        let mut rng = stream_rng(seed, &[100]);
        let mut data = Vec::with_capacity(n * p);
        for _ in 0..n * p {
            let z: f64 = StandardNormal.sample(&mut rng);
            data.push(z);
        }
        let x = Matrix::from_vec(n, p, data);
        let beta: Vec<f64> = (0..p)
            .map(|j| if j % 3 == 0 { 0.8 } else { -0.3 })
            .collect();
        let labels: Vec<u8> = (0..n)
            .map(|i| {
                let eta = -0.5 + dot(x.row(i), &beta);
                u8::from(rng.random::<f64>() < sigmoid(eta))
            })
            .collect();
        Dataset::new(x, labels).unwrap()
    }

    #[test]
    fn huge_lambda_collapses_to_intercept_model() {
        let data = random_instance(200, 5, 1);
        let model = fit_ridge(&data, 1e12, &RidgeOptions::default()).unwrap();
        for &b in &model.coefficients {
            assert!(b.abs() < 1e-6, "coefficient {b} not collapsed");
        }
        let ybar = data.label_mean();
        assert!((model.intercept - (ybar / (1.0 - ybar)).ln()).abs() < 1e-4);
    }

    #[test]
    fn unpenalized_1d_matches_grid_search_mle() {
        // balanced two-point design, no separation
        let x = Matrix::from_vec(8, 1, vec![-1.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0]);
        let y = vec![0u8, 0, 1, 1, 0, 1, 1, 1];
        let data = Dataset::new(x, y.clone()).unwrap();
        let model = fit_ridge(&data, 0.0, &RidgeOptions::default()).unwrap();

        // two-parameter grid-search oracle on the same standardized data
        let x_std = model.standardization.apply(data.covariates());
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        let mut b0 = -2.0;
        while b0 <= 2.0 {
            let mut b1 = -2.0;
            while b1 <= 2.0 {
                let obj = penalized_objective(&x_std, &y, b0, &[b1], 0.0);
                if obj > best.0 {
                    best = (obj, b0, b1);
                }
                b1 += 1e-4;
            }
            b0 += 1e-4;
        }
        assert!((model.intercept - best.1).abs() < 1e-4);
        assert!((model.coefficients[0] - best.2).abs() < 1e-4);
    }

    #[test]
    fn gradient_at_optimum_is_tiny() {
        for seed in 0..5 {
            let data = random_instance(150, 8, seed);
            for &lambda in &[0.1, 10.0, 1e4] {
                let model = fit_ridge(&data, lambda, &RidgeOptions::default()).unwrap();
                let x_std = model.standardization.apply(data.covariates());
                let grad = penalized_gradient(
                    &x_std,
                    data.labels(),
                    model.intercept,
                    &model.coefficients,
                    lambda,
                );
                assert!(sup_norm(&grad) < 1e-8, "λ={lambda} seed={seed}");
            }
        }
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let data = random_instance(60, 4, 7);
        let std = Standardization::fit(data.covariates());
        let x_std = std.apply(data.covariates());
        let y = data.labels();
        let lambda = 2.5;
        let b0 = 0.3;
        let beta = [0.5, -0.2, 0.0, 1.1];
        let grad = penalized_gradient(&x_std, y, b0, &beta, lambda);
        let h = 1e-6;
        let scale = sup_norm(&grad).max(1.0);
        // intercept coordinate
        let fd0 = (penalized_objective(&x_std, y, b0 + h, &beta, lambda)
            - penalized_objective(&x_std, y, b0 - h, &beta, lambda))
            / (2.0 * h);
        assert!((fd0 - grad[0]).abs() / scale < 1e-5);
        for j in 0..beta.len() {
            let mut up = beta;
            up[j] += h;
            let mut down = beta;
            down[j] -= h;
            let fd = (penalized_objective(&x_std, y, b0, &up, lambda)
                - penalized_objective(&x_std, y, b0, &down, lambda))
                / (2.0 * h);
            assert!((fd - grad[j + 1]).abs() / scale < 1e-5, "coordinate {j}");
        }
    }

    #[test]
    fn predictions_match_direct_formula() {
        let data = random_instance(40, 3, 9);
        let model = fit_ridge(&data, 1.0, &RidgeOptions::default()).unwrap();
        let probs = model.predict_proba(data.covariates()).unwrap();
        for i in 0..data.n() {
            let row = data.covariates().row(i);
            let mut eta = model.intercept;
            for j in 0..3 {
                eta += model.coefficients[j] * (row[j] - model.standardization.means[j])
                    / model.standardization.scales[j];
            }
            let direct = 1.0 / (1.0 + (-eta).exp());
            assert!((probs[i] - direct).abs() < 1e-12);
            assert!(probs[i] > 0.0 && probs[i] < 1.0);
        }
    }

    #[test]
    fn intercept_only_prediction_is_constant() {
        let model = RidgeModel {
            intercept: (0.2f64 / 0.8).ln(),
            coefficients: vec![0.0, 0.0],
            lambda: 1.0,
            standardization: Standardization {
                means: vec![0.0, 0.0],
                scales: vec![1.0, 1.0],
            },
        };
        let x = Matrix::from_vec(2, 2, vec![5.0, -3.0, 0.1, 9.0]);
        for p in model.predict_proba(&x).unwrap() {
            assert!((p - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn predict_rejects_column_mismatch() {
        let data = random_instance(30, 3, 2);
        let model = fit_ridge(&data, 1.0, &RidgeOptions::default()).unwrap();
        let bad = Matrix::from_vec(1, 2, vec![0.0, 0.0]);
        assert!(model.predict_proba(&bad).is_err());
    }

    #[test]
    fn row_permutation_leaves_fit_unchanged() {
        let data = random_instance(80, 4, 3);
        let model = fit_ridge(&data, 0.7, &RidgeOptions::default()).unwrap();
        let perm: Vec<usize> = (0..80).rev().collect();
        let shuffled = data.subset(&perm);
        let model2 = fit_ridge(&shuffled, 0.7, &RidgeOptions::default()).unwrap();
        assert!((model.intercept - model2.intercept).abs() < 1e-9);
        for (a, b) in model.coefficients.iter().zip(model2.coefficients.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn covariate_rescaling_leaves_predictions_invariant() {
        // with internal standardization, affine re-expression of a column
        // must not change predicted probabilities, penalized or not
        let data = random_instance(60, 3, 4);
        for &lambda in &[0.0, 3.0] {
            let model = fit_ridge(&data, lambda, &RidgeOptions::default()).unwrap();
            let probs = model.predict_proba(data.covariates()).unwrap();

            let mut rescaled = Matrix::zeros(60, 3);
            for i in 0..60 {
                let row = data.covariates().row(i);
                rescaled.set(i, 0, 10.0 * row[0] - 4.0);
                rescaled.set(i, 1, row[1]);
                rescaled.set(i, 2, -0.5 * row[2]);
            }
            let data2 = Dataset::new(rescaled.clone(), data.labels().to_vec()).unwrap();
            let model2 = fit_ridge(&data2, lambda, &RidgeOptions::default()).unwrap();
            let probs2 = model2.predict_proba(&rescaled).unwrap();
            for (a, b) in probs.iter().zip(probs2.iter()) {
                assert!((a - b).abs() < 1e-6, "λ = {lambda}");
            }
        }
    }

    #[test]
    fn iteration_cap_reports_nonconvergence_with_last_iterate() {
        let data = random_instance(80, 4, 11);
        let opts = RidgeOptions {
            max_iter: 1,
            ..RidgeOptions::default()
        };
        match fit_ridge(&data, 0.5, &opts) {
            Err(Error::NoConvergence {
                last_iterate,
                gradient_norm,
                iterations,
            }) => {
                assert_eq!(last_iterate.len(), 5);
                assert!(gradient_norm.is_finite() && gradient_norm > 1e-8);
                assert_eq!(iterations, 1);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn unpenalized_separable_data_converges_or_errors_explicitly() {
        // with perfect separation the MLE diverges; numerically the solver
        // either reaches the gradient tolerance at large coefficients or
        // reports non-convergence, never a silent bad fit
        let x = Matrix::from_vec(6, 1, vec![-3.0, -2.0, -1.0, 1.0, 2.0, 3.0]);
        let y = vec![0u8, 0, 0, 1, 1, 1];
        let data = Dataset::new(x, y.clone()).unwrap();
        match fit_ridge(&data, 0.0, &RidgeOptions::default()) {
            Ok(model) => {
                assert!(model.coefficients[0] > 2.0, "separation drives β up");
                let x_std = model.standardization.apply(data.covariates());
                let grad =
                    penalized_gradient(&x_std, &y, model.intercept, &model.coefficients, 0.0);
                assert!(sup_norm(&grad) < 1e-8);
            }
            Err(Error::NoConvergence { last_iterate, .. }) => {
                assert_eq!(last_iterate.len(), 2);
            }
            Err(other) => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn single_fit_equals_path_of_length_one() {
        let data = random_instance(50, 4, 5);
        let single = fit_ridge(&data, 2.0, &RidgeOptions::default()).unwrap();
        let path = fit_ridge_path(&data, &[2.0], &RidgeOptions::default()).unwrap();
        let from_path = path.ridge_models().unwrap();
        assert_eq!(from_path.len(), 1);
        assert!((from_path[0].intercept - single.intercept).abs() < 1e-9);
        for (a, b) in from_path[0]
            .coefficients
            .iter()
            .zip(single.coefficients.iter())
        {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn training_likelihood_nondecreasing_along_descending_grid() {
        let data = random_instance(120, 6, 6);
        let grid = default_lambda_grid(&data, 25, 1e-4, &RidgeOptions::default()).unwrap();
        let path = fit_ridge_path(&data, &grid, &RidgeOptions::default()).unwrap();
        let models = path.ridge_models().unwrap();
        let mut prev = f64::NEG_INFINITY;
        for m in models {
            let x_std = m.standardization.apply(data.covariates());
            let ll =
                penalized_objective(&x_std, data.labels(), m.intercept, &m.coefficients, 0.0);
            assert!(ll >= prev - 1e-9, "ll {ll} dropped from {prev}");
            prev = ll;
        }
    }

    #[test]
    fn default_grid_endpoints_and_shape() {
        let data = random_instance(100, 5, 8);
        let grid = default_lambda_grid(&data, 100, 1e-4, &RidgeOptions::default()).unwrap();
        assert_eq!(grid.len(), 100);
        assert!(validate_lambda_grid(&grid).is_ok());
        assert!((grid[99] / grid[0] - 1e-4).abs() < 1e-10);
        // λ_max really collapses the coefficients
        let top = fit_ridge(&data, grid[0], &RidgeOptions::default()).unwrap();
        assert!(top.coefficients.iter().all(|b| b.abs() < 1e-4));
    }

    #[test]
    fn grid_validation_rejects_bad_grids() {
        assert!(validate_lambda_grid::<f64>(&[]).is_err());
        assert!(validate_lambda_grid(&[1.0, 1.0]).is_err());
        assert!(validate_lambda_grid(&[1.0, 2.0]).is_err());
        assert!(validate_lambda_grid(&[1.0, 0.0]).is_err());
        assert!(validate_lambda_grid(&[2.0, 1.0]).is_ok());
    }
}
