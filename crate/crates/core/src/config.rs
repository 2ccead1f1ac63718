//! Declarative configuration: serde structures describing a generative
//! process and a full study, and their materialization into runtime types.
//! Generative components are specified by seeds so a config file pins an
//! entire study.

use serde::{Deserialize, Serialize};

use crate::boost::BoostOptions;
use crate::datagen::correlation::{build_block_correlation, sample_correlation_matrix};
use crate::datagen::dgp::{make_linear_dgp, make_tree_dgp, DgpSpec, TreeDgpOptions};
use crate::datagen::margins::{table_margins, MarginSpec};
use crate::error::{Error, Result};
use crate::experiments::{percent_k_grid, Estimator, ExperimentConfig, PlanSpec};
use crate::ridge::RidgeOptions;
use crate::rng::{stream_rng, STREAM_CORRELATION, STREAM_MARGINS, STREAM_PREDICTOR};
use crate::scalar::Real;
use crate::validation::{Criterion, Scheme};

fn default_blocks() -> usize {
    1
}

fn default_copula_df() -> f64 {
    2.0
}

/// A data-generating process, specified declaratively.
///
/// The correlation matrix is drawn uniformly over the elliptope from
/// `correlation_seed` (optionally block-stacked); margins come either from
/// an explicit `margins` list or drawn from the 17-family table via
/// `margins_seed`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DgpConfig {
    pub p: usize,
    pub correlation_seed: u64,
    #[serde(default = "default_blocks")]
    pub correlation_blocks: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margins: Option<Vec<MarginSpec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margins_seed: Option<u64>,
    pub p0: f64,
    #[serde(default = "default_copula_df")]
    pub copula_df: f64,
    pub predictor: PredictorConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictorConfig {
    Linear {
        seed: u64,
        n_nonzero: usize,
        coef_low: f64,
        coef_high: f64,
    },
    Tree {
        seed: u64,
        active_count: usize,
        #[serde(default = "default_n_build")]
        n_build: usize,
        #[serde(default = "default_n_trees")]
        n_trees: usize,
        #[serde(default = "default_tree_depth")]
        max_depth: usize,
        #[serde(default = "default_shrinkage")]
        shrinkage: f64,
        #[serde(default = "default_min_leaf")]
        min_leaf: usize,
        #[serde(default = "default_lambda_leaf")]
        lambda_leaf: f64,
    },
}

fn default_n_build() -> usize {
    1000
}
fn default_n_trees() -> usize {
    100
}
fn default_tree_depth() -> usize {
    3
}
fn default_shrinkage() -> f64 {
    0.1
}
fn default_min_leaf() -> usize {
    10
}
fn default_lambda_leaf() -> f64 {
    1.0
}

impl DgpConfig {
    /// Realize the process: sample the correlation matrix, resolve margins,
    /// construct the predictor. Deterministic in the config's seeds.
    pub fn materialize<F: Real>(&self) -> Result<DgpSpec<F>> {
        if self.p < 2 {
            return Err(Error::config("p must be at least 2"));
        }
        if self.correlation_blocks == 0 || !self.p.is_multiple_of(self.correlation_blocks) {
            return Err(Error::config(
                "correlation_blocks must divide p",
            ));
        }
        let base_dim = self.p / self.correlation_blocks;
        if base_dim < 2 {
            return Err(Error::config("each correlation block needs dimension ≥ 2"));
        }
        let mut corr_rng = stream_rng(self.correlation_seed, &[STREAM_CORRELATION]);
        let base = sample_correlation_matrix::<F>(base_dim, &mut corr_rng);
        let correlation = if self.correlation_blocks == 1 {
            base
        } else {
            build_block_correlation(&base, self.correlation_blocks)
        };

        let margins: Vec<MarginSpec<F>> = match (&self.margins, self.margins_seed) {
            (Some(list), None) => {
                if list.len() != self.p {
                    return Err(Error::config(format!(
                        "margins list has {} entries for p = {}",
                        list.len(),
                        self.p
                    )));
                }
                list.iter().map(|m| convert_margin(*m)).collect()
            }
            (None, Some(seed)) => {
                let table = table_margins::<F>();
                let mut rng = stream_rng(seed, &[STREAM_MARGINS]);
                (0..self.p)
                    .map(|_| {
                        use rand::Rng as _;
                        table[rng.random_range(0..table.len())]
                    })
                    .collect()
            }
            (Some(_), Some(_)) => {
                return Err(Error::config(
                    "give either a margins list or margins_seed, not both",
                ))
            }
            (None, None) => {
                return Err(Error::config(
                    "one of margins or margins_seed is required",
                ))
            }
        };

        let copula_df = F::of(self.copula_df);
        let predictor = match &self.predictor {
            PredictorConfig::Linear {
                seed,
                n_nonzero,
                coef_low,
                coef_high,
            } => {
                let mut rng = stream_rng(*seed, &[STREAM_PREDICTOR]);
                make_linear_dgp::<F>(self.p, *n_nonzero, *coef_low, *coef_high, &mut rng)?
            }
            PredictorConfig::Tree {
                seed,
                active_count,
                n_build,
                n_trees,
                max_depth,
                shrinkage,
                min_leaf,
                lambda_leaf,
            } => {
                let mut rng = stream_rng(*seed, &[STREAM_PREDICTOR]);
                let opts = TreeDgpOptions {
                    n_build: *n_build,
                    n_trees: *n_trees,
                    boost: BoostOptions {
                        shrinkage: F::of(*shrinkage),
                        max_depth: *max_depth,
                        min_leaf: *min_leaf,
                        lambda_leaf: F::of(*lambda_leaf),
                    },
                };
                make_tree_dgp(
                    &correlation,
                    &margins,
                    copula_df,
                    *active_count,
                    &opts,
                    &mut rng,
                )?
            }
        };

        let spec = DgpSpec {
            correlation,
            margins,
            predictor,
            target_mean_prob: F::of(self.p0),
            copula_df,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn convert_margin<F: Real>(m: MarginSpec<f64>) -> MarginSpec<F> {
    match m {
        MarginSpec::Bernoulli(p) => MarginSpec::Bernoulli(F::of(p)),
        MarginSpec::Beta(a, b) => MarginSpec::Beta(F::of(a), F::of(b)),
        MarginSpec::Gamma(a, b) => MarginSpec::Gamma(F::of(a), F::of(b)),
        MarginSpec::Normal(mu, sd) => MarginSpec::Normal(F::of(mu), F::of(sd)),
        MarginSpec::StudentT(df) => MarginSpec::StudentT(F::of(df)),
        MarginSpec::Poisson(l) => MarginSpec::Poisson(F::of(l)),
    }
}

/// Study-level settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudySection {
    pub replicates: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub master_seed: u64,
    pub criteria: Vec<Criterion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_grid: Option<Vec<usize>>,
    #[serde(default = "default_focus_lo")]
    pub focus_tau_low: f64,
    #[serde(default = "default_focus_hi")]
    pub focus_tau_high: f64,
}

fn default_focus_lo() -> f64 {
    0.16
}
fn default_focus_hi() -> f64 {
    0.25
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimatorConfig {
    Ridge {
        #[serde(default = "default_n_lambdas")]
        n_lambdas: usize,
        #[serde(default = "default_lambda_min_ratio")]
        lambda_min_ratio: f64,
    },
    Boost {
        #[serde(default = "default_m_max")]
        m_max: usize,
        #[serde(default = "default_shrinkage")]
        shrinkage: f64,
        #[serde(default = "default_tree_depth")]
        max_depth: usize,
        #[serde(default = "default_min_leaf")]
        min_leaf: usize,
        #[serde(default = "default_lambda_leaf")]
        lambda_leaf: f64,
    },
}

fn default_n_lambdas() -> usize {
    100
}
fn default_lambda_min_ratio() -> f64 {
    1e-4
}
fn default_m_max() -> usize {
    1000
}

impl EstimatorConfig {
    pub fn materialize<F: Real>(&self) -> Estimator<F> {
        match self {
            EstimatorConfig::Ridge {
                n_lambdas,
                lambda_min_ratio,
            } => Estimator::Ridge {
                n_lambdas: *n_lambdas,
                lambda_min_ratio: F::of(*lambda_min_ratio),
                opts: RidgeOptions::default(),
            },
            EstimatorConfig::Boost {
                m_max,
                shrinkage,
                max_depth,
                min_leaf,
                lambda_leaf,
            } => Estimator::Boost {
                m_max: *m_max,
                opts: BoostOptions {
                    shrinkage: F::of(*shrinkage),
                    max_depth: *max_depth,
                    min_leaf: *min_leaf,
                    lambda_leaf: F::of(*lambda_leaf),
                },
            },
        }
    }
}

/// One resampling plan in a config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanConfig {
    #[serde(flatten)]
    pub scheme: Scheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl PlanConfig {
    pub fn materialize(&self) -> PlanSpec {
        PlanSpec {
            label: self
                .label
                .clone()
                .unwrap_or_else(|| self.scheme.label()),
            scheme: self.scheme,
        }
    }
}

/// A full study configuration file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentFile {
    pub study: StudySection,
    pub estimator: EstimatorConfig,
    pub plans: Vec<PlanConfig>,
    pub dgp: DgpConfig,
}

impl ExperimentFile {
    pub fn materialize<F: Real>(&self) -> Result<ExperimentConfig<F>> {
        let dgp = self.dgp.materialize::<F>()?;
        let k_grid = match &self.study.k_grid {
            Some(grid) => grid.clone(),
            None => percent_k_grid(self.study.n_test),
        };
        let config = ExperimentConfig {
            dgp,
            n_train: self.study.n_train,
            n_test: self.study.n_test,
            estimator: self.estimator.materialize::<F>(),
            plans: self.plans.iter().map(PlanConfig::materialize).collect(),
            criteria: self.study.criteria.clone(),
            k_grid,
            focus_tau: (self.study.focus_tau_low, self.study.focus_tau_high),
            replicates: self.study.replicates,
            master_seed: self.study.master_seed,
        };
        config.validate()?;
        Ok(config)
    }
}
