//! Circle-model assembly: periodized boundary kernel and its circulant
//! operator columns.
//!
//! On the `2L`-periodic boundary every map built here is a circulant in the
//! node basis, so one column determines the whole matrix. The
//! Neumann-to-Dirichlet map is assembled in position space by integrating
//! the periodized boundary trace of the rigid half-space kernel against a
//! basis function. Maps whose kernels are too singular for direct
//! quadrature (Dirichlet-to-Neumann, impedance traces) are assembled from
//! their Fourier symbols on the discrete mode set instead; keeping the two
//! routes independent makes the inverse-pair checks meaningful.

use super::basis::OperatorBasis;
use super::MapsError;
use crate::green_kernel::MediumSpec;
use crate::numerics::{
    branch_sqrt, hankel0_first, integrate_adaptive, wynn_epsilon, ComplexMatrix, QuadratureSpec,
};
use num_complex::Complex64;
use std::cell::RefCell;
use std::f64::consts::{PI, SQRT_2};

/// Hankel images summed when periodizing the trace kernel.
const IMAGE_COUNT: usize = 48;

/// Partial sums skipped before sequence acceleration; the early sums are
/// pre-asymptotic and poison the extrapolation table.
const IMAGE_SKIP: usize = 8;

/// Separations below this floor are clamped; the log singularity of the
/// kernel is integrable, so the clamp only guards the Hankel domain check.
const SEPARATION_FLOOR: f64 = 1e-13;

/// Wrap `t` into the fundamental window `[-L, L)`.
pub(crate) fn wrap_offset(t: f64, half_period: f64) -> f64 {
    (t + half_period).rem_euclid(2.0 * half_period) - half_period
}

/// Boundary trace of the rigid-boundary kernel at transverse separation
/// `t`, periodized over the `2L` circle.
///
/// The direct image sum converges only like `1/sqrt(p)` with an
/// oscillating phase, so the tail is resummed with the epsilon algorithm.
/// Against the exact per-mode trace `1/gamma` (via Poisson summation) this
/// truncation is accurate to about `1e-11` for `k L` of order ten.
pub(crate) fn periodized_trace_kernel(
    t: f64,
    half_period: f64,
    k: f64,
) -> Result<Complex64, MapsError> {
    let tt = wrap_offset(t, half_period).abs().max(SEPARATION_FLOOR);
    let half_i = Complex64::new(0.0, 0.5);
    let mut sum = half_i * hankel0_first(k * tt)?;
    let mut partial = Vec::with_capacity(IMAGE_COUNT - IMAGE_SKIP);
    for p in 1..=IMAGE_COUNT {
        let shift = 2.0 * half_period * p as f64;
        sum += half_i * (hankel0_first(k * (shift + tt))? + hankel0_first(k * (shift - tt))?);
        if p > IMAGE_SKIP {
            partial.push(sum);
        }
    }
    wynn_epsilon(&partial)
        .map(|(value, _)| value)
        .ok_or_else(|| {
            MapsError::InvalidBasis(format!(
                "periodized kernel acceleration failed at separation {tt:.6}"
            ))
        })
}

/// Quadrature settings for position-space operator columns.
fn column_quad_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-12,
        rel_tol: 1e-11,
        ..QuadratureSpec::default()
    }
}

/// First circulant column of the Neumann-to-Dirichlet map: the periodized
/// kernel integrated against the basis function at node 0, with the
/// outgoing-flux sign.
pub(crate) fn ntd_circulant_column(
    basis: &OperatorBasis,
    medium: &MediumSpec,
) -> Result<Vec<Complex64>, MapsError> {
    let l = basis.half_span();
    let k = medium.wavenumber();
    let spec = column_quad_spec();
    let bound = (9.0 * basis.width()).min(l);
    let n = basis.node_count();
    let mut col = Vec::with_capacity(n);
    for i in 0..n {
        let ti = basis.nodes()[i] - basis.nodes()[0];
        // The kernel is singular where t_i - u wraps to zero; splitting the
        // panel there keeps the adaptive rule from straddling the log point.
        let us = wrap_offset(ti, l);
        let mut cuts = vec![-bound, bound];
        if us > -bound && us < bound {
            cuts.insert(1, us);
        }
        let failure: RefCell<Option<MapsError>> = RefCell::new(None);
        let mut total = Complex64::new(0.0, 0.0);
        for pair in cuts.windows(2) {
            let result = integrate_adaptive(
                |u| match periodized_trace_kernel(ti - u, l, k) {
                    Ok(kernel) => kernel * basis.basis_value(u),
                    Err(err) => {
                        *failure.borrow_mut() = Some(err);
                        Complex64::new(0.0, 0.0)
                    }
                },
                pair[0],
                pair[1],
                &spec,
            )?;
            if let Some(err) = failure.borrow_mut().take() {
                return Err(err);
            }
            total += result.value;
        }
        col.push(-total);
    }
    Ok(col)
}

/// Fourier coefficient of the width-`w` wrapped Gaussian at frequency `xi`
/// (in the convention where the inverse transform carries `1/(2L)`).
fn gaussian_hat(width: f64, xi: f64) -> f64 {
    width * SQRT_2 * PI.sqrt() * (-0.5 * width * width * xi * xi).exp()
}

/// First circulant column of a map given by a Fourier symbol on the
/// discrete mode set `xi_m = pi m / L`.
pub(crate) fn multiplier_circulant_column(
    basis: &OperatorBasis,
    medium: &MediumSpec,
    symbol: impl Fn(Complex64) -> Complex64,
) -> Vec<Complex64> {
    let n = basis.node_count() as i64;
    let l = basis.half_span();
    let k = medium.wavenumber();
    let mut col = vec![Complex64::new(0.0, 0.0); n as usize];
    for m in -n / 2..n / 2 {
        let xi = PI * m as f64 / l;
        let gamma = branch_sqrt(xi, k);
        let weight = symbol(gamma) * gaussian_hat(basis.width(), xi) / (2.0 * l);
        for (i, entry) in col.iter_mut().enumerate() {
            let phase = xi * (basis.nodes()[i] - basis.nodes()[0]);
            *entry += weight * Complex64::from_polar(1.0, phase);
        }
    }
    col
}

/// Reject impedances that collide with a discrete surface mode, where the
/// trace symbol `1/(theta - gamma)` blows up.
pub(crate) fn check_mode_resonance(
    basis: &OperatorBasis,
    medium: &MediumSpec,
    theta: Complex64,
) -> Result<(), MapsError> {
    let n = basis.node_count() as i64;
    let l = basis.half_span();
    let k = medium.wavenumber();
    let floor = 1e-6 * theta.norm().max(1.0);
    for m in -n / 2..n / 2 {
        let xi = PI * m as f64 / l;
        let gap = (theta - branch_sqrt(xi, k)).norm();
        if gap < floor {
            return Err(MapsError::ResonantMode { mode: m, gap });
        }
    }
    Ok(())
}

/// Dense circulant with the given first column: column `j` is the first
/// column rolled down by `j`.
pub(crate) fn circulant_from_column(col: &[Complex64]) -> ComplexMatrix {
    let n = col.len();
    ComplexMatrix::from_fn(n, n, |i, j| col[(i + n - j) % n])
}
