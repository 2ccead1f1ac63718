//! A model path is an ordered family of fitted probability predictors
//! indexed by a tuning value: λ (descending) for ridge, the stage count M
//! (ascending) for boosting. Validation fits one path per resampling unit
//! and scores every tuning value from it.

use crate::boost::BoostModel;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ridge::RidgeModel;
use crate::scalar::{sigmoid, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathFamily {
    Ridge,
    Boost,
}

#[derive(Debug, Clone)]
pub enum ModelPath<F> {
    Ridge {
        models: Vec<RidgeModel<F>>,
    },
    Boost {
        m_grid: Vec<usize>,
        model: BoostModel<F>,
    },
}

impl<F: Real> ModelPath<F> {
    pub fn ridge(models: Vec<RidgeModel<F>>) -> Result<Self> {
        if models.is_empty() {
            return Err(Error::config("model path must be nonempty"));
        }
        if models
            .windows(2)
            .any(|w| w[0].lambda <= w[1].lambda)
        {
            return Err(Error::config("ridge path must have strictly descending λ"));
        }
        Ok(ModelPath::Ridge { models })
    }

    pub fn boost(model: BoostModel<F>, m_grid: Vec<usize>) -> Result<Self> {
        if m_grid.is_empty() {
            return Err(Error::config("model path must be nonempty"));
        }
        if m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("stage grid must be strictly ascending"));
        }
        if *m_grid.last().unwrap() > model.n_trees() {
            return Err(Error::config(format!(
                "stage grid exceeds fitted rounds ({} > {})",
                m_grid.last().unwrap(),
                model.n_trees()
            )));
        }
        Ok(ModelPath::Boost { m_grid, model })
    }

    pub fn family(&self) -> PathFamily {
        match self {
            ModelPath::Ridge { .. } => PathFamily::Ridge,
            ModelPath::Boost { .. } => PathFamily::Boost,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ModelPath::Ridge { models } => models.len(),
            ModelPath::Boost { m_grid, .. } => m_grid.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Tuning values in path order, as reals for reporting.
    pub fn tuning_values(&self) -> Vec<f64> {
        match self {
            ModelPath::Ridge { models } => {
                models.iter().map(|m| m.lambda.into_f64()).collect()
            }
            ModelPath::Boost { m_grid, .. } => m_grid.iter().map(|&m| m as f64).collect(),
        }
    }

    pub fn ridge_models(&self) -> Option<&[RidgeModel<F>]> {
        match self {
            ModelPath::Ridge { models } => Some(models),
            _ => None,
        }
    }

    pub fn boost_model(&self) -> Option<(&BoostModel<F>, &[usize])> {
        match self {
            ModelPath::Boost { model, m_grid } => Some((model, m_grid)),
            _ => None,
        }
    }

    /// Probability scores for every tuning value: n × len(path).
    ///
    /// Boost paths accumulate tree outputs once and snapshot at each stage
    /// in the grid, so the whole path costs one pass over the ensemble.
    pub fn score_matrix(&self, x: &Matrix<F>) -> Result<Matrix<F>> {
        let n = x.rows();
        let t = self.len();
        let mut out = Matrix::zeros(n, t);
        match self {
            ModelPath::Ridge { models } => {
                for (col, model) in models.iter().enumerate() {
                    let probs = model.predict_proba(x)?;
                    for (i, p) in probs.into_iter().enumerate() {
                        out.set(i, col, p);
                    }
                }
            }
            ModelPath::Boost { m_grid, model } => {
                for i in 0..n {
                    let row = x.row(i);
                    let mut acc = F::zero();
                    let mut next_tree = 0usize;
                    for (col, &m) in m_grid.iter().enumerate() {
                        while next_tree < m {
                            acc = acc + model.trees[next_tree].predict_row(row);
                            next_tree += 1;
                        }
                        out.set(i, col, sigmoid(model.base_score + model.shrinkage * acc));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Anything that fits a model path on a training slice. Implementations
/// must be pure functions of the data so parallel validation stays
/// reproducible.
pub trait PathFitter<F: Real>: Sync {
    fn fit_path(&self, data: &Dataset<F>) -> Result<ModelPath<F>>;
}

impl<F: Real, T: PathFitter<F> + ?Sized> PathFitter<F> for &T {
    fn fit_path(&self, data: &Dataset<F>) -> Result<ModelPath<F>> {
        (**self).fit_path(data)
    }
}

impl<F: Real, T: PathFitter<F> + ?Sized> PathFitter<F> for Box<T> {
    fn fit_path(&self, data: &Dataset<F>) -> Result<ModelPath<F>> {
        (**self).fit_path(data)
    }
}

/// Ridge fitter with a grid fixed up front (so fold fits share it).
#[derive(Debug, Clone)]
pub struct RidgeFitter<F> {
    pub grid: Vec<F>,
    pub opts: crate::ridge::RidgeOptions<F>,
}

impl<F: Real> RidgeFitter<F> {
    pub fn new(grid: Vec<F>, opts: crate::ridge::RidgeOptions<F>) -> Result<Self> {
        crate::ridge::validate_lambda_grid(&grid)?;
        Ok(RidgeFitter { grid, opts })
    }

    /// Grid derived from a dataset (normally the full training set).
    pub fn from_dataset(
        data: &Dataset<F>,
        count: usize,
        min_ratio: F,
        opts: crate::ridge::RidgeOptions<F>,
    ) -> Result<Self> {
        let grid = crate::ridge::default_lambda_grid(data, count, min_ratio, &opts)?;
        Ok(RidgeFitter { grid, opts })
    }
}

impl<F: Real> PathFitter<F> for RidgeFitter<F> {
    fn fit_path(&self, data: &Dataset<F>) -> Result<ModelPath<F>> {
        crate::ridge::fit_ridge_path(data, &self.grid, &self.opts)
    }
}

/// Boost fitter: fit once at the largest stage, expose the staged path.
#[derive(Debug, Clone)]
pub struct BoostFitter<F> {
    pub m_grid: Vec<usize>,
    pub opts: crate::boost::BoostOptions<F>,
}

impl<F: Real> BoostFitter<F> {
    pub fn new(m_grid: Vec<usize>, opts: crate::boost::BoostOptions<F>) -> Result<Self> {
        if m_grid.is_empty() || m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("stage grid must be nonempty and ascending"));
        }
        Ok(BoostFitter { m_grid, opts })
    }

    pub fn full_grid(m_max: usize, opts: crate::boost::BoostOptions<F>) -> Result<Self> {
        Self::new((1..=m_max).collect(), opts)
    }
}

impl<F: Real> PathFitter<F> for BoostFitter<F> {
    fn fit_path(&self, data: &Dataset<F>) -> Result<ModelPath<F>> {
        let m_max = *self.m_grid.last().unwrap();
        let model = crate::boost::fit_boost(data, m_max, &self.opts)?;
        ModelPath::boost(model, self.m_grid.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boost::{fit_boost, staged_predict_proba, BoostOptions};
    use crate::rng::stream_rng;
    use rand::Rng as _;

    fn toy(n: usize, seed: u64) -> Dataset<f64> {
        let mut rng = stream_rng(seed, &[300]);
        let mut data = Vec::with_capacity(n * 2);
        for _ in 0..n * 2 {
            data.push(rng.random::<f64>() * 2.0 - 1.0);
        }
        let x = Matrix::from_vec(n, 2, data);
        let labels = (0..n)
            .map(|i| u8::from(x.get(i, 0) + 0.3 * rng.random::<f64>() > 0.0))
            .collect();
        Dataset::new(x, labels).unwrap()
    }

    #[test]
    fn ridge_path_rejects_unordered_lambdas() {
        let data = toy(60, 1);
        let opts = crate::ridge::RidgeOptions::default();
        assert!(crate::ridge::fit_ridge_path(&data, &[1.0, 2.0], &opts).is_err());
    }

    #[test]
    fn boost_path_single_entry_equals_full_model() {
        let data = toy(80, 2);
        let model = fit_boost(&data, 10, &BoostOptions::default()).unwrap();
        let expect = staged_predict_proba(&model, data.covariates(), 10).unwrap();
        let path = ModelPath::boost(model, vec![10]).unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(path.tuning_values(), vec![10.0]);
        let scores = path.score_matrix(data.covariates()).unwrap();
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(scores.get(i, 0), *e);
        }
    }

    #[test]
    fn boost_score_matrix_matches_staged_predictions() {
        let data = toy(50, 3);
        let model = fit_boost(&data, 8, &BoostOptions::default()).unwrap();
        let grid = vec![1usize, 3, 8];
        let path = ModelPath::boost(model.clone(), grid.clone()).unwrap();
        let scores = path.score_matrix(data.covariates()).unwrap();
        for (col, &m) in grid.iter().enumerate() {
            let staged = staged_predict_proba(&model, data.covariates(), m).unwrap();
            for i in 0..data.n() {
                assert_eq!(scores.get(i, col), staged[i], "col {col} row {i}");
            }
        }
    }

    #[test]
    fn boost_grid_bounds_checked() {
        let data = toy(50, 4);
        let model = fit_boost(&data, 5, &BoostOptions::default()).unwrap();
        assert!(ModelPath::boost(model.clone(), vec![1, 6]).is_err());
        assert!(ModelPath::boost(model.clone(), vec![3, 3]).is_err());
        assert!(ModelPath::boost(model, vec![]).is_err());
    }

    #[test]
    fn boost_stage_zero_is_the_intercept_only_entry() {
        let data = toy(60, 6);
        let ybar: f64 = data.label_mean();
        let model = fit_boost(&data, 4, &BoostOptions::default()).unwrap();
        let path = ModelPath::boost(model, vec![0]).unwrap();
        assert_eq!(path.len(), 1);
        let scores = path.score_matrix(data.covariates()).unwrap();
        for i in 0..data.n() {
            assert!((scores.get(i, 0) - ybar).abs() < 1e-12);
        }
    }

    #[test]
    fn fitters_produce_expected_shapes() {
        let data = toy(100, 5);
        let ridge = RidgeFitter::from_dataset(
            &data,
            12,
            1e-3,
            crate::ridge::RidgeOptions::default(),
        )
        .unwrap();
        let path = ridge.fit_path(&data).unwrap();
        assert_eq!(path.len(), 12);
        assert_eq!(path.family(), PathFamily::Ridge);

        let boost = BoostFitter::full_grid(
            6,
            BoostOptions {
                min_leaf: 5,
                ..BoostOptions::default()
            },
        )
        .unwrap();
        let bpath = boost.fit_path(&data).unwrap();
        assert_eq!(bpath.len(), 6);
        assert_eq!(bpath.tuning_values(), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }
}
