//! Globally adaptive Gauss-Kronrod quadrature for complex-valued integrands
//! on finite and semi-infinite intervals.
//!
//! A 7-point Gauss / 15-point Kronrod pair is applied per panel; the panel
//! with the largest error estimate is bisected until the global tolerance is
//! met or the panel budget runs out. Error estimation follows the classic
//! rescaling of `|K15 - G7|` against the deviation integral so that spuriously
//! small differences on oscillatory panels are not trusted.

use super::QuadratureSpec;
use num_complex::Complex64;
use std::collections::BinaryHeap;
use thiserror::Error;

/// Converged integral with an error estimate and a cost counter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    /// Budget exhausted before the tolerance was met. The partial result is
    /// carried so callers can decide whether to accept it.
    #[error("quadrature stalled at error {abs_error:e} after {evaluations} evaluations")]
    ToleranceNotReached {
        value: Complex64,
        abs_error: f64,
        evaluations: usize,
    },
    /// The integrand produced NaN or infinity.
    #[error("integrand returned a non-finite value near {at}")]
    NonFiniteSample { at: f64 },
    /// Series acceleration of an oscillatory tail failed to stabilise.
    #[error("tail acceleration stalled at error {abs_error:e}")]
    AccelerationFailed { value: Complex64, abs_error: f64 },
    /// The integration request itself is malformed.
    #[error("invalid quadrature request: {0}")]
    InvalidRequest(String),
}

/// Kronrod abscissae on the positive side of the symmetric 15-point rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// 7-point Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod application on `[a, b]`.
struct PanelEstimate {
    kronrod: Complex64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
) -> Result<PanelEstimate, QuadratureError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut samples = [Complex64::new(0.0, 0.0); 15];
    let mut resk = Complex64::new(0.0, 0.0);
    let mut resg = Complex64::new(0.0, 0.0);
    let mut resabs = 0.0f64;

    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        if j == 7 {
            let v = f(center);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(QuadratureError::NonFiniteSample { at: center });
            }
            samples[14] = v;
            resk += wk * v;
            resabs += wk * v.norm();
            resg += WG[3] * v;
        } else {
            for (side, t) in [-x, x].into_iter().enumerate() {
                let xx = center + half * t;
                let v = f(xx);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(QuadratureError::NonFiniteSample { at: xx });
                }
                samples[2 * j + side] = v;
                resk += wk * v;
                resabs += wk * v.norm();
                if j % 2 == 1 {
                    resg += WG[j / 2] * v;
                }
            }
        }
    }

    let mean = resk * 0.5;
    // Deviation integral sum_j w_j |f_j - mean| guards the raw |K - G|
    // difference against flattery on badly resolved panels.
    let mut resasc = 0.0f64;
    for (j, &wk) in WGK.iter().enumerate() {
        if j == 7 {
            resasc += wk * (samples[14] - mean).norm();
        } else {
            resasc += wk * (samples[2 * j] - mean).norm();
            resasc += wk * (samples[2 * j + 1] - mean).norm();
        }
    }
    resasc *= half.abs();

    let raw = ((resk - resg) * half).norm();
    let mut error = raw;
    if resasc != 0.0 && raw != 0.0 {
        error = resasc * 1.0f64.min((200.0 * raw / resasc).powf(1.5));
    }
    let floor = 50.0 * f64::EPSILON * resabs * half.abs();
    if floor > 0.0 {
        error = error.max(floor);
    }

    Ok(PanelEstimate {
        kronrod: resk * half,
        error,
    })
}

/// Max-heap entry keyed by panel error.
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

fn heap_totals(heap: &BinaryHeap<Panel>) -> (Complex64, f64) {
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for p in heap.iter() {
        total += p.value;
        err += p.error;
    }
    (total, err)
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate_adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadratureError> {
    if !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::InvalidRequest(format!(
            "finite endpoints required, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
            evaluations: 0,
        });
    }

    let panels = spec.initial_panels.max(1);
    let mut heap: BinaryHeap<Panel> = BinaryHeap::new();
    let mut evaluations = 0usize;
    let width = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err_sum = 0.0f64;
    for i in 0..panels {
        let pa = a + width * i as f64;
        let pb = if i + 1 == panels { b } else { a + width * (i + 1) as f64 };
        let est = gk15(&mut f, pa, pb)?;
        evaluations += 15;
        total += est.kronrod;
        err_sum += est.error;
        heap.push(Panel {
            a: pa,
            b: pb,
            value: est.kronrod,
            error: est.error,
        });
    }

    loop {
        if err_sum <= spec.tolerance_for(total.norm()) {
            let (value, abs_error) = heap_totals(&heap);
            return Ok(QuadResult {
                value,
                abs_error,
                evaluations,
            });
        }
        if heap.len() >= spec.max_panels {
            let (value, abs_error) = heap_totals(&heap);
            return Err(QuadratureError::ToleranceNotReached {
                value,
                abs_error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap cannot be empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel no longer splittable in f64; put it back and accept.
            heap.push(worst);
            let (value, abs_error) = heap_totals(&heap);
            return Ok(QuadResult {
                value,
                abs_error,
                evaluations,
            });
        }
        let left = gk15(&mut f, worst.a, mid)?;
        let right = gk15(&mut f, mid, worst.b)?;
        evaluations += 30;
        total += left.kronrod + right.kronrod - worst.value;
        err_sum += left.error + right.error - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: left.kronrod,
            error: left.error,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: right.kronrod,
            error: right.error,
        });
    }
}

/// Adaptive integral of `f` over `[a, infinity)` via `x = a + t/(1-t)`.
///
/// Intended for integrands with genuine decay; oscillation without decay
/// belongs to [`super::integrate_oscillatory_tail`].
pub fn integrate_to_infinity<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadratureError> {
    let mapped = move |t: f64| {
        let u = 1.0 - t;
        let x = a + t / u;
        f(x) / Complex64::new(u * u, 0.0)
    };
    // Stop just short of t = 1 so the compactification never divides by zero;
    // the discarded sliver corresponds to x beyond ~1e14.
    integrate_adaptive(mapped, 0.0, 1.0 - 1e-14, spec)
}
