//! Oscillatory tail integration by half-period partitioning plus Wynn's
//! epsilon acceleration of the partial sums.
//!
//! For an integrand whose asymptotic oscillation rate is known (phase roughly
//! `omega x`), the tail `[a, infinity)` is cut into half-period segments
//! `[a + n pi/omega, a + (n+1) pi/omega]`; the resulting alternating-flavoured
//! partial sums converge slowly but extrapolate extremely well.

use super::{integrate_adaptive, QuadResult, QuadratureError, QuadratureSpec};
use num_complex::Complex64;

/// Wynn epsilon extrapolation of a sequence of partial sums.
///
/// Returns the accelerated limit and a stabilisation estimate (distance
/// between the last two even-column entries), or `None` when the sequence is
/// too short or the table degenerates before producing one.
pub fn wynn_epsilon(seq: &[Complex64]) -> Option<(Complex64, f64)> {
    if seq.len() < 3 {
        return None;
    }
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); seq.len()]; // epsilon_{-1}
    let mut curr: Vec<Complex64> = seq.to_vec(); // epsilon_0
    let mut best = *curr.last().expect("nonempty");
    let mut prev_best: Option<Complex64> = None;
    let mut col = 0usize;
    while curr.len() >= 2 {
        let mut next = Vec::with_capacity(curr.len() - 1);
        for i in 0..curr.len() - 1 {
            let d = curr[i + 1] - curr[i];
            if d.norm() < 1e-300 {
                // Table breakdown: the sequence has effectively converged.
                return Some((curr[i + 1], 0.0));
            }
            next.push(prev[i + 1] + d.inv());
        }
        prev = std::mem::take(&mut curr);
        curr = next;
        col += 1;
        if col % 2 == 0 {
            prev_best = Some(best);
            best = *curr.last().expect("nonempty even column");
        }
    }
    let err = prev_best.map_or(f64::INFINITY, |p| (best - p).norm());
    Some((best, err))
}

/// Integral of `f` over `[start, infinity)` for integrands oscillating with
/// asymptotic phase rate `phase_rate` (radians per unit length).
///
/// Decay of the envelope is not required; bounded non-decaying oscillation is
/// the intended regime. The error field reflects both segment quadrature and
/// extrapolation stability.
pub fn integrate_oscillatory_tail<F: FnMut(f64) -> Complex64>(
    mut f: F,
    phase_rate: f64,
    start: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadratureError> {
    if !(phase_rate > 0.0) || !phase_rate.is_finite() {
        return Err(QuadratureError::InvalidRequest(format!(
            "phase rate must be positive and finite, got {phase_rate}"
        )));
    }
    let h = std::f64::consts::PI / phase_rate;
    const MAX_SEGMENTS: usize = 160;
    const MIN_BEFORE_ACCEL: usize = 8;

    // Per-segment quadrature: segments are half-period and smooth; a modest
    // panel budget keeps pathological integrands from spinning forever.
    let seg_spec = QuadratureSpec {
        initial_panels: 1,
        max_panels: 64,
        abs_tol: spec.abs_tol * 0.1,
        rel_tol: spec.rel_tol * 0.1,
    };

    let mut partial = Complex64::new(0.0, 0.0);
    let mut partials: Vec<Complex64> = Vec::with_capacity(MAX_SEGMENTS);
    let mut quad_err = 0.0f64;
    let mut evaluations = 0usize;
    let mut best: Option<(Complex64, f64)> = None;

    for n in 0..MAX_SEGMENTS {
        let a = start + h * n as f64;
        let b = start + h * (n + 1) as f64;
        let seg = match integrate_adaptive(&mut f, a, b, &seg_spec) {
            Ok(r) => r,
            // A stalled segment still carries its best value; accept it and
            // let the stabilisation estimate absorb the slack.
            Err(QuadratureError::ToleranceNotReached {
                value,
                abs_error,
                evaluations: e,
            }) => QuadResult {
                value,
                abs_error,
                evaluations: e,
            },
            Err(e) => return Err(e),
        };
        partial += seg.value;
        quad_err += seg.abs_error;
        evaluations += seg.evaluations;
        partials.push(partial);

        if partials.len() >= MIN_BEFORE_ACCEL {
            if let Some((limit, stab)) = wynn_epsilon(&partials) {
                let err = stab + quad_err;
                best = match best {
                    Some((_, prev_err)) if prev_err <= err => best,
                    _ => Some((limit, err)),
                };
                if err <= spec.tolerance_for(limit.norm()) {
                    return Ok(QuadResult {
                        value: limit,
                        abs_error: err,
                        evaluations,
                    });
                }
            }
        }
    }

    match best {
        Some((value, abs_error)) => Err(QuadratureError::AccelerationFailed { value, abs_error }),
        None => Err(QuadratureError::AccelerationFailed {
            value: partial,
            abs_error: f64::INFINITY,
        }),
    }
}
