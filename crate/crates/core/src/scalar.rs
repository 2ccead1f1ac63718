//! Floating-point scalar abstraction: everything numeric in this crate is
//! generic over [`Real`], instantiated as `f32` or `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Scalar type the library computes in.
///
/// Constants and random draws are produced in `f64` and converted, so the
/// same seed yields the same underlying stream for every scalar type.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 converts to any Real")
    }

    /// Lossy conversion from `usize`.
    fn of_usize(value: usize) -> Self {
        Self::of(value as f64)
    }

    /// Widening (or identity) conversion to `f64`.
    fn into_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Numerically stable logistic function 1/(1+e^{-x}).
pub fn sigmoid<F: Real>(x: F) -> F {
    if x >= F::zero() {
        F::one() / (F::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (F::one() + e)
    }
}

/// log(p/(1-p)) for p in (0,1).
pub fn logit<F: Real>(p: F) -> F {
    (p / (F::one() - p)).ln()
}

/// Stable log(1 + e^x).
pub fn log1p_exp<F: Real>(x: F) -> F {
    if x > F::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
