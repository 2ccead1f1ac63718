//! Selecting the complexity of binary fraud-prediction models by minimizing
//! an out-of-sample estimate of the top-k fraud loss (the number of
//! non-fraudulent cases among the k selected), with AUC-based selection as
//! the benchmark alternative.
//!
//! The crate provides
//! - `ridge`: L2-penalized logistic regression over a warm-started λ path,
//! - `boost`: gradient-boosted tree ensembles with staged prediction paths,
//! - `criteria`: top-k labeling, fraud loss, classification error, AUC,
//! - `validation`: repeated/stratified CV and bootstrap selection statistics,
//! - `datagen`: t₂-copula simulation of correlated mixed-type covariates
//!   with calibrated binary outcomes,
//! - `experiments`: the replicated train/test study with relative-fraud-loss
//!   aggregation,
//! - `config`: declarative TOML/JSON-friendly study descriptions.
//!
//! Everything numeric is generic over the [`scalar::Real`] scalar type;
//! concrete `f64` aliases live at the crate root.

// index-coupled loops over co-addressed buffers are the clearest form for
// the numeric kernels here
#![allow(clippy::needless_range_loop)]

pub mod boost;
pub mod config;
pub mod criteria;
pub mod dataset;
pub mod datagen;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod path;
pub mod ridge;
pub mod rng;
pub mod scalar;
pub mod special;
pub mod validation;

pub use error::{Error, Result};
pub use scalar::Real;

/// f64 instantiations of the core types.
pub type Dataset64 = dataset::Dataset<f64>;
pub type Matrix64 = linalg::Matrix<f64>;
pub type CorrelationMatrix64 = datagen::CorrelationMatrix<f64>;
pub type MarginSpec64 = datagen::MarginSpec<f64>;
pub type DgpSpec64 = datagen::DgpSpec<f64>;
pub type PredictorModel64 = datagen::PredictorModel<f64>;
pub type RidgeModel64 = ridge::RidgeModel<f64>;
pub type RidgeOptions64 = ridge::RidgeOptions<f64>;
pub type BoostModel64 = boost::BoostModel<f64>;
pub type BoostOptions64 = boost::BoostOptions<f64>;
pub type ModelPath64 = path::ModelPath<f64>;
pub type ExperimentConfig64 = experiments::ExperimentConfig<f64>;
pub type Estimator64 = experiments::Estimator<f64>;
