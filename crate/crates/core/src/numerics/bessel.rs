//! Cylinder functions of orders zero and one for real positive arguments.
//!
//! Power series with double-double accumulation up to the crossover, Hankel
//! asymptotic expansion beyond it. The series route suffers catastrophic
//! cancellation growth like `e^{2x}` in plain f64, so partial sums are kept in
//! unevaluated hi/lo pairs; at the crossover the asymptotic series truncated
//! at its smallest term is already below 1e-16 relative, so both routes agree
//! to full precision there.

use num_complex::Complex64;
use thiserror::Error;

/// Crossover between the series and asymptotic evaluations.
const SERIES_CROSSOVER: f64 = 16.0;

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.5772156649015328606;

const FRAC_2_PI: f64 = std::f64::consts::FRAC_2_PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialFunctionError {
    /// The requested function is singular or undefined at `x`.
    #[error("{what} is undefined for argument {x}")]
    OutOfDomain { what: &'static str, x: f64 },
}

// ---------------------------------------------------------------------------
// Double-double helpers (error-free transformations).
// ---------------------------------------------------------------------------

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    #[inline]
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Error-free sum of two doubles (Knuth TwoSum).
#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

/// Error-free product via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let err = a.mul_add(b, -p);
    Dd { hi: p, lo: err }
}

#[inline]
fn dd_add(a: Dd, b: Dd) -> Dd {
    let s = two_sum(a.hi, b.hi);
    let lo = s.lo + a.lo + b.lo;
    let r = two_sum(s.hi, lo);
    Dd { hi: r.hi, lo: r.lo }
}

/// Product of a double-double by a plain double.
#[inline]
fn dd_mul_f64(a: Dd, b: f64) -> Dd {
    let p = two_prod(a.hi, b);
    let lo = a.lo.mul_add(b, p.lo);
    let r = two_sum(p.hi, lo);
    Dd { hi: r.hi, lo: r.lo }
}

/// Quotient of a double-double by a plain double. Used for the factorial
/// ratios, whose integer denominators are exact in f64; dividing keeps the
/// recurrence error-free where multiplying by a rounded reciprocal would
/// leak ~1e-16 per term into the cancellation-prone partial sums.
#[inline]
fn dd_div_f64(a: Dd, b: f64) -> Dd {
    let q1 = a.hi / b;
    let p = two_prod(q1, b);
    let r = ((a.hi - p.hi) - p.lo) + a.lo;
    let q2 = r / b;
    let s = two_sum(q1, q2);
    Dd { hi: s.hi, lo: s.lo }
}

/// `a * (q.hi + q.lo)` where `q` is a double-double.
#[inline]
fn dd_mul_dd(a: Dd, q: Dd) -> Dd {
    dd_add(dd_mul_f64(a, q.hi), dd_mul_f64(a, q.lo))
}

// ---------------------------------------------------------------------------
// Power-series route (x <= SERIES_CROSSOVER).
// ---------------------------------------------------------------------------

/// J0 by its alternating series, double-double partial sums.
fn j0_series(x: f64) -> f64 {
    // q = (x/2)^2 held to full precision so the ratio recurrence stays exact.
    let half = 0.5 * x;
    let q = two_prod(half, half);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for m in 1..200 {
        let m2 = (m * m) as f64;
        term = dd_div_f64(term, -m2);
        term = dd_mul_dd(term, q);
        sum = dd_add(sum, term);
        if term.hi.abs() < 1e-40 {
            break;
        }
    }
    sum.value()
}

/// J1 series: `(x/2) sum_m (-q)^m / (m! (m+1)!)`.
fn j1_series(x: f64) -> f64 {
    let half = 0.5 * x;
    let q = two_prod(half, half);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for m in 1..200 {
        let denom = (m * (m + 1)) as f64;
        term = dd_div_f64(term, -denom);
        term = dd_mul_dd(term, q);
        sum = dd_add(sum, term);
        if term.hi.abs() < 1e-40 {
            break;
        }
    }
    half * sum.value()
}

/// Y0 series: `(2/pi)(ln(x/2)+gamma) J0 + (2/pi) sum_{m>=1} (-1)^{m+1} H_m q^m/(m!)^2`.
fn y0_series(x: f64) -> f64 {
    let half = 0.5 * x;
    let q = two_prod(half, half);
    let log_part = (half.ln() + EULER_GAMMA) * j0_series(x);
    let mut term = Dd::from(1.0); // q^m / (m!)^2 without sign
    let mut harmonic = Dd::from(0.0);
    let mut sum = Dd::from(0.0);
    let mut sign = 1.0;
    for m in 1..200 {
        let m2 = (m * m) as f64;
        term = dd_div_f64(term, m2);
        term = dd_mul_dd(term, q);
        harmonic = dd_add(harmonic, dd_div_f64(Dd::from(1.0), m as f64));
        sum = dd_add(sum, dd_mul_f64(dd_mul_dd(term, harmonic), sign));
        sign = -sign;
        if term.hi.abs() * harmonic.hi < 1e-40 {
            break;
        }
    }
    FRAC_2_PI * (log_part + sum.value())
}

/// Y1 series:
/// `(2/pi)(ln(x/2)+gamma) J1 - 2/(pi x)
///  - (1/pi) sum_{m>=0} (-1)^m (H_m + H_{m+1}) (x/2)^{2m+1} / (m!(m+1)!)`.
fn y1_series(x: f64) -> f64 {
    let half = 0.5 * x;
    let q = two_prod(half, half);
    let log_part = (half.ln() + EULER_GAMMA) * j1_series(x);
    let mut term = Dd::from(half); // (x/2)^{2m+1} / (m!(m+1)!) without sign
    let mut h_m = Dd::from(0.0); // H_m
    let mut h_m1 = Dd::from(1.0); // H_{m+1}
    let mut sum = dd_mul_dd(term, dd_add(h_m, h_m1));
    let mut sign = -1.0;
    for m in 1..200 {
        let denom = (m * (m + 1)) as f64;
        term = dd_div_f64(term, denom);
        term = dd_mul_dd(term, q);
        h_m = dd_add(h_m, dd_div_f64(Dd::from(1.0), m as f64));
        h_m1 = dd_add(h_m1, dd_div_f64(Dd::from(1.0), (m + 1) as f64));
        let weight = dd_add(h_m, h_m1);
        sum = dd_add(sum, dd_mul_f64(dd_mul_dd(term, weight), sign));
        sign = -sign;
        if term.hi.abs() * weight.hi < 1e-40 {
            break;
        }
    }
    FRAC_2_PI * log_part - 2.0 / (std::f64::consts::PI * x)
        - sum.value() / std::f64::consts::PI
}

// ---------------------------------------------------------------------------
// Hankel asymptotic route (x > SERIES_CROSSOVER).
// ---------------------------------------------------------------------------

/// `H_nu(x) ~ sqrt(2/(pi x)) e^{i(x - nu pi/2 - pi/4)} sum_m i^m a_m(nu)/x^m`,
/// truncated at the smallest term. `a_m(0)` ratio `-(2m-1)^2/(8m)`,
/// `a_m(1)` ratio `(3-2m)(2m+1)/(8m)`.
fn hankel_asymptotic(nu: u8, x: f64) -> Complex64 {
    let mut a = 1.0f64;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut i_pow = Complex64::new(0.0, 1.0);
    let mut prev = f64::INFINITY;
    for m in 1..60u32 {
        let mf = m as f64;
        let ratio = match nu {
            0 => {
                let t = 2.0 * mf - 1.0;
                -(t * t) / (8.0 * mf)
            }
            _ => (3.0 - 2.0 * mf) * (2.0 * mf + 1.0) / (8.0 * mf),
        };
        a *= ratio;
        let mag = a.abs() / x.powi(m as i32);
        if mag >= prev || mag < 1e-19 {
            break;
        }
        prev = mag;
        sum += i_pow * (a / x.powi(m as i32));
        i_pow *= Complex64::new(0.0, 1.0);
    }
    let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
    let phase = x - 0.5 * std::f64::consts::PI * nu as f64 - std::f64::consts::FRAC_PI_4;
    amp * Complex64::new(0.0, phase).exp() * sum
}

// ---------------------------------------------------------------------------
// Public surface.
// ---------------------------------------------------------------------------

/// Bessel function `J0(x)` for `x >= 0` (even extension used for `x < 0`).
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_CROSSOVER {
        j0_series(x)
    } else {
        hankel_asymptotic(0, x).re
    }
}

/// Bessel function `J1(x)`; odd in `x`.
pub fn bessel_j1(x: f64) -> f64 {
    let s = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    if x <= SERIES_CROSSOVER {
        s * j1_series(x)
    } else {
        s * hankel_asymptotic(1, x).re
    }
}

/// Weber function `Y0(x)`, defined for `x > 0` only.
pub fn bessel_y0(x: f64) -> Result<f64, SpecialFunctionError> {
    if !(x > 0.0) {
        return Err(SpecialFunctionError::OutOfDomain { what: "Y0", x });
    }
    Ok(if x <= SERIES_CROSSOVER {
        y0_series(x)
    } else {
        hankel_asymptotic(0, x).im
    })
}

/// Weber function `Y1(x)`, defined for `x > 0` only.
pub fn bessel_y1(x: f64) -> Result<f64, SpecialFunctionError> {
    if !(x > 0.0) {
        return Err(SpecialFunctionError::OutOfDomain { what: "Y1", x });
    }
    Ok(if x <= SERIES_CROSSOVER {
        y1_series(x)
    } else {
        hankel_asymptotic(1, x).im
    })
}

/// Hankel function of the first kind, order zero: `J0 + i Y0`, `x > 0`.
pub fn hankel0_first(x: f64) -> Result<Complex64, SpecialFunctionError> {
    if !(x > 0.0) {
        return Err(SpecialFunctionError::OutOfDomain { what: "H0^(1)", x });
    }
    Ok(if x <= SERIES_CROSSOVER {
        Complex64::new(j0_series(x), y0_series(x))
    } else {
        hankel_asymptotic(0, x)
    })
}

/// Hankel function of the first kind, order one: `J1 + i Y1`, `x > 0`.
pub fn hankel1_first(x: f64) -> Result<Complex64, SpecialFunctionError> {
    if !(x > 0.0) {
        return Err(SpecialFunctionError::OutOfDomain { what: "H1^(1)", x });
    }
    Ok(if x <= SERIES_CROSSOVER {
        Complex64::new(j1_series(x), y1_series(x))
    } else {
        hankel_asymptotic(1, x)
    })
}
