//! Special functions: log-gamma, regularized incomplete gamma and beta,
//! normal CDF/quantile, Student-t CDF, and a bracketed Newton/bisection
//! CDF inverter. Classic series/continued-fraction algorithms, generic
//! over the scalar type.

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0 (Lanczos approximation, reflection for x < 0.5).
pub fn ln_gamma<F: Real>(x: F) -> F {
    let xf = x.into_f64();
    F::of(ln_gamma_f64(xf))
}

fn ln_gamma_f64(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma_f64(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a).
pub fn gamma_p<F: Real>(a: F, x: F) -> F {
    let (a, x) = (a.into_f64(), x.into_f64());
    assert!(a > 0.0, "gamma_p requires a > 0");
    if x <= 0.0 {
        return F::zero();
    }
    let v = if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_contfrac(a, x)
    };
    F::of(v.clamp(0.0, 1.0))
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut del = sum;
    for _ in 0..500 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma_f64(a)).exp()
}

fn gamma_q_contfrac(a: f64, x: f64) -> f64 {
    // modified Lentz
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma_f64(a)).exp() * h
}

/// Regularized incomplete beta I_x(a, b).
pub fn beta_inc<F: Real>(a: F, b: F, x: F) -> F {
    let (a, b, x) = (a.into_f64(), b.into_f64(), x.into_f64());
    assert!(a > 0.0 && b > 0.0, "beta_inc requires a, b > 0");
    if x <= 0.0 {
        return F::zero();
    }
    if x >= 1.0 {
        return F::one();
    }
    let front =
        (a * x.ln() + b * (1.0 - x).ln() - ln_gamma_f64(a) - ln_gamma_f64(b) + ln_gamma_f64(a + b))
            .exp();
    let v = if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_contfrac(a, b, x) / a
    } else {
        1.0 - front * beta_contfrac(b, a, 1.0 - x) / b
    };
    F::of(v.clamp(0.0, 1.0))
}

fn beta_contfrac(a: f64, b: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..500 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Standard normal CDF.
pub fn normal_cdf<F: Real>(x: F) -> F {
    let x = x.into_f64();
    let v = 0.5 * erfc_f64(-x / std::f64::consts::SQRT_2);
    F::of(v)
}

fn erfc_f64(x: f64) -> f64 {
    if x >= 0.0 {
        if x == 0.0 {
            1.0
        } else {
            gamma_q_for_erfc(x * x)
        }
    } else {
        2.0 - erfc_f64(-x)
    }
}

fn gamma_q_for_erfc(x2: f64) -> f64 {
    // erfc(x) = Q(1/2, x²) for x ≥ 0
    let a = 0.5;
    if x2 < a + 1.0 {
        1.0 - gamma_p_series(a, x2)
    } else {
        gamma_q_contfrac(a, x2)
    }
}

/// Standard normal quantile (Acklam's rational approximation plus one
/// Halley refinement against `normal_cdf`).
#[allow(clippy::excessive_precision)]
pub fn normal_quantile<F: Real>(p: F) -> F {
    let p = p.into_f64();
    assert!(p > 0.0 && p < 1.0, "normal_quantile requires p in (0,1)");
    let x = acklam(p);
    // one Halley step: e = Φ(x) - p, u = e / φ(x)
    let e = 0.5 * erfc_f64(-x / std::f64::consts::SQRT_2) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    F::of(x - u / (1.0 + x * u / 2.0))
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Student-t CDF with `df` degrees of freedom.
pub fn student_t_cdf<F: Real>(x: F, df: F) -> F {
    let (x, df) = (x.into_f64(), df.into_f64());
    assert!(df > 0.0, "student_t_cdf requires df > 0");
    if x == 0.0 {
        return F::of(0.5);
    }
    let z = df / (df + x * x);
    let tail = 0.5 * beta_inc::<f64>(df / 2.0, 0.5, z);
    F::of(if x > 0.0 { 1.0 - tail } else { tail })
}

/// Invert a strictly increasing CDF on a bracketing interval by a guarded
/// Newton iteration (bisection fallback), to near machine precision.
///
/// `pdf` may return non-finite or non-positive values; the step then falls
/// back to bisection.
pub fn invert_cdf<F, C, P>(cdf: C, pdf: P, mut lo: F, mut hi: F, u: F) -> F
where
    F: Real,
    C: Fn(F) -> F,
    P: Fn(F) -> F,
{
    debug_assert!(u > F::zero() && u < F::one());
    let two = F::of(2.0);
    let mut x = (lo + hi) / two;
    for _ in 0..200 {
        let f = cdf(x) - u;
        if f == F::zero() {
            return x;
        }
        if f > F::zero() {
            hi = x;
        } else {
            lo = x;
        }
        let width = hi - lo;
        if width <= F::epsilon() * (F::one() + x.abs()) {
            break;
        }
        let d = pdf(x);
        let newton = if d.is_finite() && d > F::zero() {
            x - f / d
        } else {
            F::nan()
        };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / two
        };
    }
    x
}
