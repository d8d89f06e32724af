//! Singular self-cell integrals for the Nystrom diagonals.
//!
//! Volume cells integrate the free-kernel singularity exactly (polar wedges
//! in d=2, pyramid slices in d=3); boundary cells integrate the full trace
//! kernel with the logarithmic part summed in series and the smooth
//! impedance correction pushed through the spectral machinery with a
//! cell-averaged oscillation factor.

use std::cell::RefCell;

use super::ForwardError;
use crate::green_kernel::{
    reflected_integral, Dim, KernelDeriv, KernelError, MediumSpec, ReflPart, SpectralKernelParams,
};
use crate::numerics::{hankel1_first, integrate_adaptive, QuadratureSpec};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn cell_quad_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        ..QuadratureSpec::default()
    }
}

/// `int_0^z J0(t) dt` by the ascending series. Accurate to double precision
/// for moderate arguments; callers guard the range.
fn int_j0(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut c = 1.0f64; // signed (-q)^m / (m!)^2
    let mut sum = 0.0f64;
    let mut m = 0usize;
    loop {
        let term = c / (2 * m + 1) as f64;
        sum += term;
        if (term.abs() < 1e-17 * sum.abs().max(1.0) && m > 2) || m > 60 {
            break;
        }
        m += 1;
        c *= -q / ((m * m) as f64);
    }
    z * sum
}

/// `int_0^z Y0(t) dt` by the ascending series, with the logarithmic factor
/// integrated analytically against each power.
fn int_y0(z: f64) -> f64 {
    let ell = (0.5 * z).ln() + EULER_GAMMA;
    let q = 0.25 * z * z;
    let mut c = 1.0f64; // signed (-q)^m / (m!)^2
    let mut harmonic = 0.0f64;
    let mut sum = 0.0f64;
    let mut m = 0usize;
    loop {
        let odd = (2 * m + 1) as f64;
        let term = c / odd * (ell - 1.0 / odd - harmonic);
        sum += term;
        if (term.abs() < 1e-17 * sum.abs().max(1.0) && m > 2) || m > 60 {
            break;
        }
        m += 1;
        harmonic += 1.0 / m as f64;
        c *= -q / ((m * m) as f64);
    }
    (2.0 / std::f64::consts::PI) * z * sum
}

/// `int_0^1 t e^{i alpha t} dt`, stable through small `alpha`.
fn ramp_phase_integral(alpha: f64) -> Complex64 {
    if alpha.abs() < 1e-3 {
        let a = alpha;
        Complex64::new(0.5 - a * a / 8.0, a / 3.0 - a * a * a / 30.0)
    } else {
        let e = (I * alpha).exp();
        (e * Complex64::new(1.0, -alpha) - 1.0) / (alpha * alpha)
    }
}

/// Integral of the free-space kernel over one grid cell centred at the
/// singularity: `int_cell G_free(|x|) dx` for a square (d=2) or cube (d=3)
/// of the given side.
pub fn free_cell_integral(medium: &MediumSpec, spacing: f64) -> Result<Complex64, ForwardError> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(ForwardError::InvalidGrid(format!(
            "cell spacing must be positive and finite, got {spacing}"
        )));
    }
    let k = medium.wavenumber();
    let spec = cell_quad_spec();
    match medium.dim() {
        Dim::Two => {
            // Eight congruent wedges; the radial integral of r H0(kr) is
            // exact: int_0^R r H0(kr) dr = (R H1(kR) + 2i/(pi k))/k.
            let failure: RefCell<Option<KernelError>> = RefCell::new(None);
            let offset = 2.0 * I / (std::f64::consts::PI * k);
            let integrand = |phi: f64| -> Complex64 {
                let r_edge = 0.5 * spacing / phi.cos();
                match hankel1_first(k * r_edge) {
                    Ok(h1) => r_edge * h1 + offset,
                    Err(e) => {
                        *failure.borrow_mut() = Some(KernelError::from(e));
                        Complex64::new(0.0, 0.0)
                    }
                }
            };
            let quad = integrate_adaptive(integrand, 0.0, std::f64::consts::FRAC_PI_4, &spec)?;
            if let Some(e) = failure.into_inner() {
                return Err(e.into());
            }
            Ok(2.0 * I / k * quad.value)
        }
        Dim::Three => {
            // Six pyramids over the faces; along each ray the kernel
            // integrates in closed form, leaving a smooth face integral.
            let half = 0.5 * spacing;
            let inner_spec = QuadratureSpec {
                abs_tol: 1e-14,
                rel_tol: 1e-12,
                max_panels: 256,
                ..QuadratureSpec::default()
            };
            let failure: RefCell<Option<KernelError>> = RefCell::new(None);
            let outer = |a1: f64| -> Complex64 {
                let inner = |a2: f64| -> Complex64 {
                    let r = (a1 * a1 + a2 * a2 + half * half).sqrt();
                    ramp_phase_integral(k * r) / r
                };
                match integrate_adaptive(inner, 0.0, half, &inner_spec) {
                    Ok(q) => q.value,
                    Err(e) => {
                        *failure.borrow_mut() = Some(KernelError::from(e));
                        Complex64::new(0.0, 0.0)
                    }
                }
            };
            let quad = integrate_adaptive(outer, 0.0, half, &spec)?;
            if let Some(e) = failure.into_inner() {
                return Err(e.into());
            }
            // 6 pyramids x 4 quarter faces x (h/2)/(4 pi).
            Ok(quad.value * (6.0 * 4.0 * half / (4.0 * std::f64::consts::PI)))
        }
    }
}

/// Maximum supported `k * half_width` for the boundary series; beyond this
/// the ascending series loses accuracy and such coarse cells make no sense
/// at the wavelengths involved.
const MAX_TRACE_ARGUMENT: f64 = 8.0;

fn trace_geometry(medium: &MediumSpec, width: f64) -> Result<f64, ForwardError> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(ForwardError::InvalidBoundary(format!(
            "boundary cell width must be positive and finite, got {width}"
        )));
    }
    // d=2: half-interval; d=3: radius of the equal-area disk.
    let a = match medium.dim() {
        Dim::Two => 0.5 * width,
        Dim::Three => width / std::f64::consts::PI.sqrt(),
    };
    if medium.wavenumber() * a > MAX_TRACE_ARGUMENT {
        return Err(ForwardError::InvalidBoundary(format!(
            "boundary cells spanning k*a = {} exceed the supported range {MAX_TRACE_ARGUMENT}",
            medium.wavenumber() * a
        )));
    }
    Ok(a)
}

/// Integral of the full impedance trace kernel `G((t,0),(0,0))` over one
/// boundary cell of the given width.
///
/// The free-plus-image part is summed in series (d=2) or closed form over
/// the equal-area disk (d=3, a midpoint-order approximation of the square
/// cell); the impedance correction goes through the spectral quadrature
/// with the cell-averaged oscillation factor.
pub fn boundary_trace_self_cell(
    medium: &MediumSpec,
    params: &SpectralKernelParams,
    width: f64,
) -> Result<Complex64, ForwardError> {
    let a = trace_geometry(medium, width)?;
    let k = medium.wavenumber();
    let free_image = match medium.dim() {
        // int_{-a}^{a} 2 (i/4) H0(k|t|) dt = i int_0^{ka} H0 / k.
        Dim::Two => (I * int_j0(k * a) - int_y0(k * a)) / k,
        // 2 int_disk e^{ikr}/(4 pi r) dA = (e^{ika} - 1)/(ik).
        Dim::Three => ((I * k * a).exp() - 1.0) / (I * k),
    };
    let corr = reflected_integral(
        a,
        0.0,
        medium,
        params,
        ReflPart::CorrectionOnly,
        KernelDeriv::CellMean,
    )?;
    Ok(free_image + corr.value)
}

/// Integral of the sigma derivative of the impedance correction over one
/// boundary cell: the self term of flux-form source sums. The free and
/// image contributions cancel identically on the boundary, so only the
/// correction survives.
pub(crate) fn boundary_flux_self_cell(
    medium: &MediumSpec,
    params: &SpectralKernelParams,
    width: f64,
) -> Result<Complex64, ForwardError> {
    let a = trace_geometry(medium, width)?;
    let corr = reflected_integral(
        a,
        0.0,
        medium,
        params,
        ReflPart::CorrectionOnly,
        KernelDeriv::CellMeanDSigma,
    )?;
    Ok(corr.value)
}
