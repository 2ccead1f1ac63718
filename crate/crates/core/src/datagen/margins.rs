//! Marginal distributions for synthetic covariates: quantile (inverse CDF)
//! transforms applied to copula uniforms, plus the CDFs used by tests.
//!
//! Discrete families use the generalized inverse CDF, the left-continuous
//! inf{x : F(x) ≥ u}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{beta_inc, gamma_p, invert_cdf, ln_gamma, normal_cdf, normal_quantile};

/// A one-dimensional margin. Gamma is parameterized by (shape, rate).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real")]
#[serde(try_from = "MarginRepr", into = "MarginRepr")]
pub enum MarginSpec<F> {
    Bernoulli(F),
    Beta(F, F),
    Gamma(F, F),
    Normal(F, F),
    StudentT(F),
    Poisson(F),
}

/// Serialized form: `{ family = "...", params = [...] }`.
#[derive(Serialize, Deserialize)]
struct MarginRepr {
    family: String,
    params: Vec<f64>,
}

impl<F: Real> From<MarginSpec<F>> for MarginRepr {
    fn from(spec: MarginSpec<F>) -> Self {
        let (family, params) = match spec {
            MarginSpec::Bernoulli(p) => ("bernoulli", vec![p.into_f64()]),
            MarginSpec::Beta(a, b) => ("beta", vec![a.into_f64(), b.into_f64()]),
            MarginSpec::Gamma(a, b) => ("gamma", vec![a.into_f64(), b.into_f64()]),
            MarginSpec::Normal(m, s) => ("normal", vec![m.into_f64(), s.into_f64()]),
            MarginSpec::StudentT(df) => ("student_t", vec![df.into_f64()]),
            MarginSpec::Poisson(l) => ("poisson", vec![l.into_f64()]),
        };
        MarginRepr {
            family: family.to_string(),
            params,
        }
    }
}

impl<F: Real> TryFrom<MarginRepr> for MarginSpec<F> {
    type Error = String;

    fn try_from(repr: MarginRepr) -> std::result::Result<Self, String> {
        let p = &repr.params;
        let arity_err = || format!("margin family `{}`: wrong parameter count", repr.family);
        let spec = match repr.family.as_str() {
            "bernoulli" => MarginSpec::Bernoulli(F::of(*p.first().ok_or_else(arity_err)?)),
            "beta" if p.len() == 2 => MarginSpec::Beta(F::of(p[0]), F::of(p[1])),
            "gamma" if p.len() == 2 => MarginSpec::Gamma(F::of(p[0]), F::of(p[1])),
            "normal" if p.len() == 2 => MarginSpec::Normal(F::of(p[0]), F::of(p[1])),
            "student_t" => MarginSpec::StudentT(F::of(*p.first().ok_or_else(arity_err)?)),
            "poisson" => MarginSpec::Poisson(F::of(*p.first().ok_or_else(arity_err)?)),
            "beta" | "gamma" | "normal" => return Err(arity_err()),
            other => return Err(format!("unknown margin family `{other}`")),
        };
        Ok(spec)
    }
}

impl<F: Real> MarginSpec<F> {
    /// Validate the family-specific parameter constraints.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            MarginSpec::Bernoulli(p) => p > F::zero() && p < F::one(),
            MarginSpec::Beta(a, b) => a > F::zero() && b > F::zero(),
            MarginSpec::Gamma(shape, rate) => shape > F::zero() && rate > F::zero(),
            MarginSpec::Normal(_, sd) => sd > F::zero(),
            MarginSpec::StudentT(df) => df > F::zero(),
            MarginSpec::Poisson(lambda) => lambda > F::zero(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("invalid margin parameters: {self:?}")))
        }
    }

    /// Quantile function at u ∈ (0,1).
    pub fn quantile(&self, u: F) -> F {
        debug_assert!(u > F::zero() && u < F::one());
        match *self {
            MarginSpec::Bernoulli(p) => {
                if u <= F::one() - p {
                    F::zero()
                } else {
                    F::one()
                }
            }
            MarginSpec::Beta(a, b) => {
                let ln_b = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
                let pdf = move |x: F| {
                    ((a - F::one()) * x.ln() + (b - F::one()) * (F::one() - x).ln() - ln_b).exp()
                };
                invert_cdf(
                    |x| beta_inc(a, b, x),
                    pdf,
                    F::of(1e-300),
                    F::one() - F::epsilon(),
                    u,
                )
            }
            MarginSpec::Gamma(shape, rate) => {
                // invert at rate 1, then scale
                let ln_g = ln_gamma(shape);
                let pdf = move |x: F| ((shape - F::one()) * x.ln() - x - ln_g).exp();
                let mut hi = shape + F::of(10.0) * shape.sqrt() + F::of(10.0);
                while gamma_p(shape, hi) < u {
                    hi = hi * F::of(2.0);
                }
                invert_cdf(|x| gamma_p(shape, x), pdf, F::of(1e-300), hi, u) / rate
            }
            MarginSpec::Normal(mean, sd) => mean + sd * normal_quantile(u),
            MarginSpec::StudentT(df) => student_t_quantile(u, df),
            MarginSpec::Poisson(lambda) => poisson_quantile(u, lambda),
        }
    }

    /// CDF evaluated at x; the right-continuous F(x) for discrete families.
    pub fn cdf(&self, x: F) -> F {
        match *self {
            MarginSpec::Bernoulli(p) => {
                if x < F::zero() {
                    F::zero()
                } else if x < F::one() {
                    F::one() - p
                } else {
                    F::one()
                }
            }
            MarginSpec::Beta(a, b) => beta_inc(a, b, x.max(F::zero()).min(F::one())),
            MarginSpec::Gamma(shape, rate) => gamma_p(shape, (x * rate).max(F::zero())),
            MarginSpec::Normal(mean, sd) => normal_cdf((x - mean) / sd),
            MarginSpec::StudentT(df) => crate::special::student_t_cdf(x, df),
            MarginSpec::Poisson(lambda) => {
                if x < F::zero() {
                    return F::zero();
                }
                let m = x.floor().into_f64() as u64;
                F::of(poisson_cdf_f64(m, lambda.into_f64()))
            }
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, MarginSpec::Bernoulli(_) | MarginSpec::Poisson(_))
    }
}

fn student_t_quantile<F: Real>(u: F, df: F) -> F {
    let half = F::of(0.5);
    if u == half {
        return F::zero();
    }
    if u < half {
        return -student_t_quantile(F::one() - u, df);
    }
    let norm = (ln_gamma((df + F::one()) / F::of(2.0))
        - ln_gamma(df / F::of(2.0))
        - half * (df * F::of(std::f64::consts::PI)).ln())
    .exp();
    let pdf = move |x: F| {
        norm * (F::one() + x * x / df).powf(-(df + F::one()) / F::of(2.0))
    };
    let mut hi = F::of(2.0);
    while crate::special::student_t_cdf(hi, df) < u {
        hi = hi * F::of(2.0);
    }
    invert_cdf(
        |x| crate::special::student_t_cdf(x, df),
        pdf,
        F::zero(),
        hi,
        u,
    )
}

fn poisson_quantile<F: Real>(u: F, lambda: F) -> F {
    let u = u.into_f64();
    let lambda = lambda.into_f64();
    let mut pmf = (-lambda).exp();
    let mut cdf = pmf;
    let mut k = 0u64;
    // generalized inverse: smallest k with F(k) ≥ u
    while cdf < u && k < 10_000 {
        k += 1;
        pmf *= lambda / k as f64;
        cdf += pmf;
    }
    F::of(k as f64)
}

fn poisson_cdf_f64(m: u64, lambda: f64) -> f64 {
    let mut pmf = (-lambda).exp();
    let mut cdf = pmf;
    for k in 1..=m {
        pmf *= lambda / k as f64;
        cdf += pmf;
    }
    cdf.min(1.0)
}

/// The 17 margin families used for simulated covariates.
pub fn table_margins<F: Real>() -> Vec<MarginSpec<F>> {
    let f = F::of;
    vec![
        MarginSpec::Bernoulli(f(0.2)),
        MarginSpec::Bernoulli(f(0.4)),
        MarginSpec::Bernoulli(f(0.6)),
        MarginSpec::Bernoulli(f(0.8)),
        MarginSpec::Beta(f(1.0), f(2.0)),
        MarginSpec::Beta(f(2.0), f(1.0)),
        MarginSpec::Beta(f(2.0), f(2.0)),
        MarginSpec::Gamma(f(1.0), f(3.0)),
        MarginSpec::Gamma(f(3.0), f(1.0)),
        MarginSpec::Gamma(f(3.0), f(3.0)),
        MarginSpec::Normal(f(0.0), f(1.0)),
        MarginSpec::StudentT(f(3.0)),
        MarginSpec::StudentT(f(4.0)),
        MarginSpec::StudentT(f(6.0)),
        MarginSpec::Poisson(f(1.0)),
        MarginSpec::Poisson(f(3.0)),
        MarginSpec::Poisson(f(5.0)),
    ]
}
