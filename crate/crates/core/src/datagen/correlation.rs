//! Random correlation matrices distributed uniformly over the set of
//! positive-definite correlation matrices (the elliptope), generated by the
//! C-vine partial-correlation construction, plus block-diagonal stacking
//! for high-dimensional settings.

use rand::Rng as _;
use rand_distr::{Beta as BetaDist, Distribution};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::Rng;
use crate::scalar::Real;

/// A symmetric positive-definite matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix<F> {
    entries: Matrix<F>,
}

impl<F: Real> CorrelationMatrix<F> {
    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, F::one());
        }
        CorrelationMatrix { entries: m }
    }

    /// Wrap a matrix, checking symmetry, unit diagonal, entry range, and
    /// positive definiteness.
    pub fn from_matrix(entries: Matrix<F>) -> Result<Self> {
        if entries.rows() != entries.cols() {
            return Err(Error::config("correlation matrix must be square"));
        }
        let d = entries.rows();
        for i in 0..d {
            if (entries.get(i, i) - F::one()).abs() > F::epsilon() {
                return Err(Error::config("correlation diagonal must be 1"));
            }
            for j in 0..i {
                let a = entries.get(i, j);
                if a != entries.get(j, i) {
                    return Err(Error::config("correlation matrix must be symmetric"));
                }
                if a < -F::one() || a > F::one() {
                    return Err(Error::config("correlations must lie in [-1, 1]"));
                }
            }
        }
        if !entries.is_positive_definite() {
            return Err(Error::config("correlation matrix is not positive definite"));
        }
        Ok(CorrelationMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix<F> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.entries.get(i, j)
    }

    pub fn cholesky(&self) -> Result<Matrix<F>> {
        self.entries.cholesky()
    }

    /// Smallest eigenvalue, located by bisection on the Cholesky
    /// positive-definiteness test of R − μI.
    pub fn min_eigenvalue(&self) -> F {
        let d = self.dim();
        let shifted_is_pd = |mu: F| {
            let mut m = self.entries.clone();
            for i in 0..d {
                m.set(i, i, m.get(i, i) - mu);
            }
            m.is_positive_definite()
        };
        let mut lo = F::zero(); // PD by invariant
        let mut hi = F::one() + F::one(); // λ_min ≤ 1 < 2 for unit trace/dim
        for _ in 0..100 {
            let mid = (lo + hi) / F::of(2.0);
            if shifted_is_pd(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < F::of(1e-13) {
                break;
            }
        }
        (lo + hi) / F::of(2.0)
    }
}

/// Draw from the uniform distribution over positive-definite correlation
/// matrices of the given dimension.
///
/// C-vine construction: the partial correlation of pair (i, j), i < j,
/// given variables 0..i is Beta(a, a) on (−1, 1) with a = 1 + (dim−2−i)/2,
/// de-conditioned level by level into raw correlations. For dim = 2 the
/// off-diagonal is exactly uniform on (−1, 1); positive definiteness holds
/// by construction.
pub fn sample_correlation_matrix<F: Real>(dim: usize, rng: &mut Rng) -> CorrelationMatrix<F> {
    assert!(dim >= 2, "need dim >= 2");
    // partial correlations ρ_{i,j | 0..i-1}, f64 internally
    let mut partial = vec![vec![0.0f64; dim]; dim];
    let mut entries = Matrix::zeros(dim, dim);
    for i in 0..dim {
        entries.set(i, i, F::one());
    }
    for i in 0..dim - 1 {
        let a = 1.0 + (dim - 2 - i) as f64 / 2.0;
        for j in i + 1..dim {
            let draw = if (a - 1.0).abs() < 1e-12 {
                rng.random::<f64>()
            } else {
                BetaDist::new(a, a).expect("valid Beta parameters").sample(rng)
            };
            partial[i][j] = 2.0 * draw - 1.0;
            // remove conditioning variables l = i-1, ..., 0
            let mut rho = partial[i][j];
            for l in (0..i).rev() {
                rho = rho
                    * ((1.0 - partial[l][i].powi(2)) * (1.0 - partial[l][j].powi(2))).sqrt()
                    + partial[l][i] * partial[l][j];
            }
            entries.set(i, j, F::of(rho));
            entries.set(j, i, F::of(rho));
        }
    }
    CorrelationMatrix { entries }
}

/// Stack `base` `blocks` times along the diagonal; zero elsewhere.
pub fn build_block_correlation<F: Real>(
    base: &CorrelationMatrix<F>,
    blocks: usize,
) -> CorrelationMatrix<F> {
    assert!(blocks >= 1, "need at least one block");
    let d = base.dim();
    let full = d * blocks;
    let mut entries = Matrix::zeros(full, full);
    for b in 0..blocks {
        let off = b * d;
        for i in 0..d {
            for j in 0..d {
                entries.set(off + i, off + j, base.get(i, j));
            }
        }
    }
    CorrelationMatrix { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn identity_blocks_give_identity() {
        let base = CorrelationMatrix::<f64>::identity(2);
        let stacked = build_block_correlation(&base, 2);
        assert_eq!(stacked.dim(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(stacked.get(i, j), expect);
            }
        }
    }

    #[test]
    fn block_nonzero_count_is_blocks_times_dim_squared() {
        // same 1/4 density as stacking a 1000-dim base 4 times
        let mut rng = stream_rng(7, &[1]);
        let base = sample_correlation_matrix::<f64>(100, &mut rng);
        let stacked = build_block_correlation(&base, 4);
        let nonzero = stacked
            .entries()
            .data()
            .iter()
            .filter(|&&v| v != 0.0)
            .count();
        assert_eq!(nonzero, 4 * 100 * 100);
        assert_eq!(stacked.entries().data().len(), 16 * 100 * 100);
    }

    #[test]
    fn block_preserves_min_eigenvalue() {
        let mut rng = stream_rng(11, &[2]);
        let base = sample_correlation_matrix::<f64>(8, &mut rng);
        let stacked = build_block_correlation(&base, 3);
        let e_base = base.min_eigenvalue();
        let e_stack = stacked.min_eigenvalue();
        assert!(
            (e_base - e_stack).abs() < 1e-9,
            "base {e_base} vs stacked {e_stack}"
        );
    }

    #[test]
    fn sampled_matrices_are_valid() {
        let mut rng = stream_rng(3, &[9]);
        for dim in [2usize, 3, 5, 20] {
            for _ in 0..20 {
                let r = sample_correlation_matrix::<f64>(dim, &mut rng);
                // symmetric with unit diagonal by construction
                for i in 0..dim {
                    assert_eq!(r.get(i, i), 1.0);
                    for j in 0..i {
                        assert_eq!(r.get(i, j), r.get(j, i));
                        assert!(r.get(i, j).abs() <= 1.0);
                    }
                }
                assert!(r.entries().is_positive_definite(), "dim {dim} draw not PD");
            }
        }
    }

    #[test]
    fn fixed_seed_reproduces_matrix() {
        let a = sample_correlation_matrix::<f64>(100, &mut stream_rng(5, &[1]));
        let b = sample_correlation_matrix::<f64>(100, &mut stream_rng(5, &[1]));
        assert_eq!(a.entries().data(), b.entries().data());
    }

    #[test]
    fn from_matrix_validates() {
        let bad = Matrix::from_vec(2, 2, vec![1.0, 0.5, 0.4, 1.0]);
        assert!(CorrelationMatrix::from_matrix(bad).is_err());
        let indefinite = Matrix::from_vec(2, 2, vec![1.0, 1.5, 1.5, 1.0]);
        assert!(CorrelationMatrix::from_matrix(indefinite).is_err());
        let good = Matrix::from_vec(2, 2, vec![1.0, 0.3, 0.3, 1.0]);
        assert!(CorrelationMatrix::from_matrix(good).is_ok());
    }

    #[test]
    fn dim3_marginal_matches_uniform_elliptope_shape() {
        // under the uniform distribution on 3x3 correlation matrices each
        // off-diagonal entry has density ∝ (1−r²)^{1/2}, i.e. Beta(1.5, 1.5)
        // on (−1, 1); KS check against that CDF
        let mut rng = stream_rng(17, &[4]);
        let n = 20_000;
        let mut draws: Vec<f64> = (0..n)
            .map(|_| sample_correlation_matrix::<f64>(3, &mut rng).get(0, 1))
            .collect();
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks: f64 = 0.0;
        for (i, &r) in draws.iter().enumerate() {
            let u = (r + 1.0) / 2.0;
            let cdf = crate::special::beta_inc(1.5f64, 1.5, u);
            ks = ks
                .max((cdf - i as f64 / n as f64).abs())
                .max((cdf - (i + 1) as f64 / n as f64).abs());
        }
        assert!(ks < 0.015, "KS vs Beta(1.5,1.5): {ks}");
    }
}
