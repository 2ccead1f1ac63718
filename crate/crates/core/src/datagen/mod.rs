//! Synthetic data generation: random correlation matrices, t-copula
//! sampling, margin transforms, and calibrated binary outcomes.

pub mod copula;
pub mod correlation;
pub mod dgp;
pub mod margins;

pub use copula::sample_copula;
pub use correlation::{build_block_correlation, sample_correlation_matrix, CorrelationMatrix};
pub use dgp::{
    calibrate_intercept, generate_dataset, generate_dataset_with_intercept, make_linear_dgp,
    make_tree_dgp, transform_margins, DgpSpec, PredictorModel, TreeDgpOptions,
};
pub use margins::{table_margins, MarginSpec};
