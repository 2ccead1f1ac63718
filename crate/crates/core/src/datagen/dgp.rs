//! Generative models for synthetic fraud data: correlated mixed-type
//! covariates through the t-copula, a fixed log-odds predictor (linear or
//! tree ensemble), and an intercept calibrated per dataset so the mean
//! fraud probability hits the target rate.

use rand::Rng as _;
use rand_distr::{Distribution, Exp};

use crate::boost::{fit_boost_squared, BoostModel, BoostOptions};
use crate::dataset::Dataset;
use crate::datagen::copula::sample_copula;
use crate::datagen::correlation::CorrelationMatrix;
use crate::datagen::margins::MarginSpec;
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::rng::Rng;
use crate::scalar::{sigmoid, Real};

/// The true log-odds function (up to the calibrated intercept).
#[derive(Debug, Clone)]
pub enum PredictorModel<F> {
    Linear {
        intercept: F,
        coefficients: Vec<F>,
    },
    TreeEnsemble {
        input_dim: usize,
        model: BoostModel<F>,
    },
}

impl<F: Real> PredictorModel<F> {
    pub fn input_dim(&self) -> usize {
        match self {
            PredictorModel::Linear { coefficients, .. } => coefficients.len(),
            PredictorModel::TreeEnsemble { input_dim, .. } => *input_dim,
        }
    }

    pub fn eval_row(&self, row: &[F]) -> F {
        match self {
            PredictorModel::Linear {
                intercept,
                coefficients,
            } => *intercept + dot(row, coefficients),
            PredictorModel::TreeEnsemble { model, .. } => model.predict_raw(row),
        }
    }

    pub fn nonzero_coefficients(&self) -> usize {
        match self {
            PredictorModel::Linear { coefficients, .. } => {
                coefficients.iter().filter(|&&b| b != F::zero()).count()
            }
            PredictorModel::TreeEnsemble { model, .. } => {
                let mut features: Vec<usize> = model
                    .trees
                    .iter()
                    .flat_map(|t| t.split_features())
                    .collect();
                features.sort_unstable();
                features.dedup();
                features.len()
            }
        }
    }
}

/// A complete data-generating process.
#[derive(Debug, Clone)]
pub struct DgpSpec<F> {
    pub correlation: CorrelationMatrix<F>,
    pub margins: Vec<MarginSpec<F>>,
    pub predictor: PredictorModel<F>,
    pub target_mean_prob: F,
    pub copula_df: F,
}

impl<F: Real> DgpSpec<F> {
    pub fn validate(&self) -> Result<()> {
        let p = self.correlation.dim();
        if self.margins.len() != p {
            return Err(Error::config(format!(
                "margins ({}) must match correlation dimension ({p})",
                self.margins.len()
            )));
        }
        if self.predictor.input_dim() != p {
            return Err(Error::config(format!(
                "predictor input dimension ({}) must match p ({p})",
                self.predictor.input_dim()
            )));
        }
        for m in &self.margins {
            m.validate()?;
        }
        if self.target_mean_prob <= F::zero() || self.target_mean_prob >= F::one() {
            return Err(Error::config("target mean probability must be in (0,1)"));
        }
        if self.copula_df <= F::zero() {
            return Err(Error::config("copula degrees of freedom must be positive"));
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.correlation.dim()
    }
}

/// Apply each column's quantile function to copula uniforms.
pub fn transform_margins<F: Real>(
    uniforms: &Matrix<F>,
    margins: &[MarginSpec<F>],
) -> Result<Matrix<F>> {
    if uniforms.cols() != margins.len() {
        return Err(Error::config(format!(
            "{} margins for {} columns",
            margins.len(),
            uniforms.cols()
        )));
    }
    for m in margins {
        m.validate()?;
    }
    let (n, p) = (uniforms.rows(), uniforms.cols());
    let mut out = Matrix::zeros(n, p);
    for i in 0..n {
        let u_row = uniforms.row(i);
        let out_row = out.row_mut(i);
        for j in 0..p {
            out_row[j] = margins[j].quantile(u_row[j]);
        }
    }
    Ok(out)
}

/// Solve (1/n)Σ sigmoid(β₀ + fᵢ) = p₀ for β₀ by bisection. The mean
/// probability is strictly increasing in β₀, so the root is unique; the
/// initial bracket [logit(p₀) − max|f| − 1, logit(p₀) + max|f| + 1]
/// encloses it.
pub fn calibrate_intercept<F: Real>(predictor_values: &[F], p0: F) -> F {
    assert!(
        p0 > F::zero() && p0 < F::one(),
        "target mean probability must be in (0,1)"
    );
    assert!(!predictor_values.is_empty(), "need at least one value");
    let n = F::of_usize(predictor_values.len());
    let mean_prob = |b0: F| {
        predictor_values
            .iter()
            .map(|&f| sigmoid(b0 + f))
            .sum::<F>()
            / n
    };
    let center = (p0 / (F::one() - p0)).ln();
    let spread = predictor_values
        .iter()
        .fold(F::zero(), |m, &f| m.max(f.abs()))
        + F::one();
    let mut lo = center - spread;
    let mut hi = center + spread;
    let half = F::of(0.5);
    for _ in 0..200 {
        let mid = (lo + hi) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        if mean_prob(mid) < p0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < F::of(1e-10) {
            break;
        }
    }
    (lo + hi) * half
}

/// Linear predictor with `n_nonzero` active coefficients drawn uniformly
/// from (coef_low, coef_high) at uniformly chosen positions; intercept left
/// at zero (calibrated per dataset).
pub fn make_linear_dgp<F: Real>(
    p: usize,
    n_nonzero: usize,
    coef_low: f64,
    coef_high: f64,
    rng: &mut Rng,
) -> Result<PredictorModel<F>> {
    if n_nonzero > p {
        return Err(Error::config("n_nonzero cannot exceed p"));
    }
    if coef_low >= coef_high {
        return Err(Error::config("coefficient range must be nonempty"));
    }
    let mut coefficients = vec![F::zero(); p];
    let mut active = rand::seq::index::sample(rng, p, n_nonzero).into_vec();
    active.sort_unstable();
    for idx in active {
        let draw = coef_low + (coef_high - coef_low) * rng.random::<f64>();
        coefficients[idx] = F::of(draw);
    }
    Ok(PredictorModel::Linear {
        intercept: F::zero(),
        coefficients,
    })
}

/// Construction response for the tree generator: B·E₁ − (1−B)·E₂ with
/// B ~ Bernoulli(1/2), E₁ ~ Exp(rate 0.2), E₂ ~ Exp(rate 0.1).
pub(crate) fn sample_signed_exponential(rng: &mut Rng) -> f64 {
    let positive = rng.random::<f64>() < 0.5;
    if positive {
        Exp::new(0.2).expect("valid rate").sample(rng)
    } else {
        -Exp::new(0.1).expect("valid rate").sample(rng)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TreeDgpOptions<F> {
    /// Rows in the construction sample the generating ensemble is fitted to.
    pub n_build: usize,
    pub n_trees: usize,
    pub boost: BoostOptions<F>,
}

impl<F: Real> Default for TreeDgpOptions<F> {
    fn default() -> Self {
        TreeDgpOptions {
            n_build: 1000,
            n_trees: 100,
            boost: BoostOptions {
                shrinkage: F::of(0.1),
                max_depth: 3,
                min_leaf: 10,
                lambda_leaf: F::one(),
            },
        }
    }
}

/// Build a tree-ensemble log-odds function: draw a construction covariate
/// matrix through the same copula/margins pipeline, draw the signed
/// exponential response, and fit a squared-error boosted ensemble on a
/// random `active_count`-feature subset. The ensemble is then held fixed
/// across generated datasets.
pub fn make_tree_dgp<F: Real>(
    correlation: &CorrelationMatrix<F>,
    margins: &[MarginSpec<F>],
    copula_df: F,
    active_count: usize,
    opts: &TreeDgpOptions<F>,
    rng: &mut Rng,
) -> Result<PredictorModel<F>> {
    let p = correlation.dim();
    if active_count > p {
        return Err(Error::config("active_count cannot exceed p"));
    }
    let uniforms = sample_copula(opts.n_build, correlation, copula_df, rng)?;
    let x_build = transform_margins(&uniforms, margins)?;
    let targets: Vec<F> = (0..opts.n_build)
        .map(|_| F::of(sample_signed_exponential(rng)))
        .collect();
    let mut active = rand::seq::index::sample(rng, p, active_count).into_vec();
    active.sort_unstable();
    let model = fit_boost_squared(&x_build, &targets, opts.n_trees, &opts.boost, Some(&active))?;
    Ok(PredictorModel::TreeEnsemble {
        input_dim: p,
        model,
    })
}

/// Full generation pipeline; returns the dataset and the calibrated β₀.
pub fn generate_dataset_with_intercept<F: Real>(
    spec: &DgpSpec<F>,
    n: usize,
    rng: &mut Rng,
) -> Result<(Dataset<F>, F)> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::config("n must be positive"));
    }
    let uniforms = sample_copula(n, &spec.correlation, spec.copula_df, rng)?;
    let x = transform_margins(&uniforms, &spec.margins)?;
    let f: Vec<F> = (0..n).map(|i| spec.predictor.eval_row(x.row(i))).collect();
    let beta0 = calibrate_intercept(&f, spec.target_mean_prob);
    let labels: Vec<u8> = f
        .iter()
        .map(|&fi| u8::from(F::of(rng.random::<f64>()) < sigmoid(beta0 + fi)))
        .collect();
    let dataset = Dataset::new(x, labels)?;
    Ok((dataset, beta0))
}

/// Generate `n` rows from the process: copula → margins → predictor →
/// calibrated intercept → Bernoulli labels.
pub fn generate_dataset<F: Real>(spec: &DgpSpec<F>, n: usize, rng: &mut Rng) -> Result<Dataset<F>> {
    generate_dataset_with_intercept(spec, n, rng).map(|(d, _)| d)
}
