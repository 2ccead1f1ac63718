//! Minimal dense linear algebra: row-major matrices, Cholesky factorization,
//! and triangular solves. Just enough for IRLS Newton steps and copula
//! sampling; no external linear-algebra dependency.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Real> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "shape/data mismatch");
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: F) {
        self.data[i * self.cols + j] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [F] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    /// y = A x.
    pub fn matvec(&self, x: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| dot(self.row(i), x))
            .collect()
    }

    /// Lower-triangular Cholesky factor L with A = L Lᵀ.
    ///
    /// Fails if the matrix is not (numerically) positive definite.
    pub fn cholesky(&self) -> Result<Matrix<F>> {
        assert_eq!(self.rows, self.cols, "cholesky needs a square matrix");
        let n = self.rows;
        let mut l = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.get(i, j);
                for k in 0..j {
                    sum = sum - l.get(i, k) * l.get(j, k);
                }
                if i == j {
                    if sum <= F::zero() || !sum.is_finite() {
                        return Err(Error::numerical(format!(
                            "cholesky pivot {i} is non-positive: matrix not positive definite"
                        )));
                    }
                    l.set(i, j, sum.sqrt());
                } else {
                    l.set(i, j, sum / l.get(j, j));
                }
            }
        }
        Ok(l)
    }

    /// True when the matrix admits a Cholesky factorization.
    pub fn is_positive_definite(&self) -> bool {
        self.cholesky().is_ok()
    }
}

/// Solve A x = b for symmetric positive-definite A via its Cholesky factor.
pub fn cholesky_solve<F: Real>(l: &Matrix<F>, b: &[F]) -> Vec<F> {
    let n = l.rows();
    assert_eq!(b.len(), n);
    // forward: L z = b
    let mut z = vec![F::zero(); n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum = sum - l.get(i, k) * z[k];
        }
        z[i] = sum / l.get(i, i);
    }
    // backward: Lᵀ x = z
    let mut x = vec![F::zero(); n];
    for i in (0..n).rev() {
        let mut sum = z[i];
        for k in i + 1..n {
            sum = sum - l.get(k, i) * x[k];
        }
        x[i] = sum / l.get(i, i);
    }
    x
}

/// Multiply the lower-triangular factor by a vector: y = L x.
pub fn lower_triangular_matvec<F: Real>(l: &Matrix<F>, x: &[F]) -> Vec<F> {
    let n = l.rows();
    assert_eq!(x.len(), n);
    (0..n)
        .map(|i| dot(&l.row(i)[..=i], &x[..=i]))
        .collect()
}

#[inline]
pub fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut sum = F::zero();
    for (&x, &y) in a.iter().zip(b.iter()) {
        sum = sum + x * y;
    }
    sum
}
