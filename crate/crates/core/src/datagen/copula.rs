//! Sampling from the t-copula: multivariate-t draws pushed through the
//! univariate t CDF, yielding uniform margins with the t dependence
//! structure.

use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::datagen::correlation::CorrelationMatrix;
use crate::error::Result;
use crate::linalg::{lower_triangular_matvec, Matrix};
use crate::rng::Rng;
use crate::scalar::Real;
use crate::special::student_t_cdf;

// guards against u hitting exactly 0 or 1 after rounding in the CDF tails
const U_CLAMP: f64 = 1e-15;

/// Draw an n×p matrix of copula uniforms: each row is
/// u = F_t( sqrt(df/W) · L · ε ) with W ~ χ²(df), ε standard normal,
/// L the Cholesky factor of R.
pub fn sample_copula<F: Real>(
    n: usize,
    correlation: &CorrelationMatrix<F>,
    df: F,
    rng: &mut Rng,
) -> Result<Matrix<F>> {
    assert!(n >= 1, "need n >= 1");
    let p = correlation.dim();
    let chol = correlation.cholesky()?;
    let chi2 = ChiSquared::new(df.into_f64()).expect("df > 0");
    let mut out = Matrix::zeros(n, p);
    let mut eps = vec![F::zero(); p];
    for i in 0..n {
        for e in eps.iter_mut() {
            let z: f64 = StandardNormal.sample(rng);
            *e = F::of(z);
        }
        let w: f64 = chi2.sample(rng);
        let scale = F::of((df.into_f64() / w).sqrt());
        let z = lower_triangular_matvec(&chol, &eps);
        let row = out.row_mut(i);
        for (j, zj) in z.into_iter().enumerate() {
            let u = student_t_cdf(scale * zj, df)
                .into_f64()
                .clamp(U_CLAMP, 1.0 - U_CLAMP);
            row[j] = F::of(u);
        }
    }
    Ok(out)
}
