//! Transverse-Fourier (spectral) representation of the impedance kernel.
//!
//! Writing `gamma(xi) = sqrt(xi^2 - k^2)` on the decaying/outgoing branch and
//! `t = x' - y'` for the transverse offset, the kernel in physical
//! normalisation is the inverse Fourier integral of
//!
//! `ghat = e^{-gamma |x_d - y_d|}/(2 gamma) + R(gamma) e^{-gamma (x_d + y_d)}/(2 gamma)`
//!
//! with reflection coefficient `R = (gamma + theta)/(gamma - theta)`. The
//! integral is evaluated as a propagating segment (substitution
//! `xi = k sin t`, which turns the branch arc into a smooth path) plus an
//! evanescent segment in the variable `gamma` itself. For lossless media the
//! evanescent segment crosses the surface-wave pole `gamma = theta`; the
//! contour prescription inherited from limiting absorption is the symmetric
//! principal value plus `i pi` times the residue.

use super::{Dim, KernelError, MediumSpec, PoleMode, Regime, SpectralKernelParams};
use crate::numerics::{
    bessel_j0, bessel_j1, branch_sqrt, integrate_adaptive, integrate_oscillatory_tail,
    integrate_to_infinity, QuadResult, QuadratureError, QuadratureSpec,
};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Literal spectral kernel value at one transverse frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralHatValue {
    pub value: Complex64,
    /// Set when the evaluation sits close to the surface-wave pole and the
    /// returned magnitude is dominated by the pole factor.
    pub near_pole: bool,
}

/// Spectral kernel `C_pi [ ((theta+gamma)/(theta-gamma)) e^{-gamma(x_d+y_d)}
/// - e^{-gamma|x_d-y_d|} ] / gamma` at transverse frequency `xi`.
///
/// Defined for `|xi| != k` (branch point) and away from the pole
/// `gamma = theta`; near the pole the value is returned with `near_pole` set.
pub fn spectral_green_hat(
    xi: f64,
    x_d: f64,
    y_d: f64,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
) -> Result<SpectralHatValue, KernelError> {
    if x_d < 0.0 || y_d < 0.0 {
        return Err(KernelError::InvalidPoint(
            "spectral kernel heights must be non-negative".into(),
        ));
    }
    let k = medium.wavenumber();
    let gamma = branch_sqrt(xi, k);
    if gamma.norm() < 1e-9 * k {
        return Err(KernelError::BranchPoint { xi });
    }
    let theta = medium.theta();
    let denom = theta - gamma;
    let near_pole = denom.norm() < 1e-6 * (1.0 + theta.norm());
    let sigma = x_d + y_d;
    let delta = (x_d - y_d).abs();
    let reflected = ((theta + gamma) / denom) * (-gamma * sigma).exp();
    let direct = (-gamma * delta).exp();
    let value = params.c_pi * (reflected - direct) / gamma;
    Ok(SpectralHatValue { value, near_pole })
}

/// Which reflection factor the reflected-part integral carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ReflPart {
    /// Full `R(gamma)`; together with the direct integral this reproduces
    /// the kernel without any closed-form shortcut.
    FullReflect,
    /// `R(gamma) - 1 = 2 theta/(gamma - theta)`; the mirror-image part is
    /// peeled off in closed form by the caller.
    CorrectionOnly,
}

/// Derivative flavour of the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum KernelDeriv {
    Value,
    /// d/d rho (transverse separation).
    DRho,
    /// d/d sigma (height sum), equally d/d x_d and d/d y_d of the reflected
    /// part.
    DSigma,
    /// Transverse average over a centred cell instead of a point value: the
    /// oscillation factor is integrated over an interval of half-width `rho`
    /// (d = 2) or a disk of radius `rho` (d = 3). Absolute, not per-area.
    /// Used for self-cell entries of Nystrom matrices, where the `rho`
    /// parameter is reinterpreted as the cell half-width.
    CellMean,
    /// Cell average of the d/d sigma derivative; same reinterpretation of
    /// `rho` as [`KernelDeriv::CellMean`].
    CellMeanDSigma,
}

/// `int_{-a}^{a} cos(xi t) dt = 2 sin(xi a)/xi`, stable through `xi -> 0`.
#[inline]
fn interval_mean(xi: f64, a: f64) -> f64 {
    let z = xi * a;
    if z.abs() < 1e-8 {
        2.0 * a * (1.0 - z * z / 6.0)
    } else {
        2.0 * z.sin() / xi
    }
}

/// `int_{|t|<a} J0(xi |t|) dt = 2 pi a J1(xi a)/xi`, stable through
/// `xi -> 0`.
#[inline]
fn disk_mean(xi: f64, a: f64) -> f64 {
    let z = xi * a;
    if z.abs() < 1e-8 {
        std::f64::consts::PI * a * a * (1.0 - z * z / 8.0)
    } else {
        2.0 * std::f64::consts::PI * a * bessel_j1(z) / xi
    }
}

/// Value plus accumulated quadrature error of one kernel piece.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PieceValue {
    pub value: Complex64,
    pub abs_error: f64,
}

impl PieceValue {
    const ZERO: PieceValue = PieceValue {
        value: Complex64::new(0.0, 0.0),
        abs_error: 0.0,
    };

    fn from_quad(q: QuadResult) -> Self {
        PieceValue {
            value: q.value,
            abs_error: q.abs_error,
        }
    }

    fn add(self, other: PieceValue) -> Self {
        PieceValue {
            value: self.value + other.value,
            abs_error: self.abs_error + other.abs_error,
        }
    }

    fn add_exact(self, v: Complex64) -> Self {
        PieceValue {
            value: self.value + v,
            abs_error: self.abs_error,
        }
    }

    fn scale(self, s: f64) -> Self {
        PieceValue {
            value: self.value * s,
            abs_error: self.abs_error * s.abs(),
        }
    }
}

/// Reflection factor in the gamma variable.
#[inline]
fn reflectance(gamma: Complex64, theta: Complex64, part: ReflPart) -> Complex64 {
    match part {
        ReflPart::FullReflect => (gamma + theta) / (gamma - theta),
        ReflPart::CorrectionOnly => 2.0 * theta / (gamma - theta),
    }
}

/// Oscillation factor of the transverse inverse Fourier integral, including
/// the requested derivative. `xi` is the transverse frequency.
#[inline]
fn transverse_factor(dim: Dim, xi: f64, rho: f64, deriv: KernelDeriv) -> f64 {
    match (dim, deriv) {
        // d = 2 carries cos(xi rho)/xi; the DRho derivative cancels the 1/xi.
        (Dim::Two, KernelDeriv::Value) | (Dim::Two, KernelDeriv::DSigma) => {
            (xi * rho).cos() / xi
        }
        (Dim::Two, KernelDeriv::DRho) => -(xi * rho).sin(),
        (Dim::Two, KernelDeriv::CellMean) | (Dim::Two, KernelDeriv::CellMeanDSigma) => {
            interval_mean(xi, rho) / xi
        }
        (Dim::Three, KernelDeriv::Value) | (Dim::Three, KernelDeriv::DSigma) => {
            bessel_j0(xi * rho)
        }
        (Dim::Three, KernelDeriv::DRho) => -xi * bessel_j1(xi * rho),
        (Dim::Three, KernelDeriv::CellMean) | (Dim::Three, KernelDeriv::CellMeanDSigma) => {
            disk_mean(xi, rho)
        }
    }
}

/// Overall prefactor of the evanescent-segment integral.
#[inline]
fn evan_prefactor(dim: Dim) -> f64 {
    match dim {
        Dim::Two => 1.0 / (2.0 * std::f64::consts::PI),
        Dim::Three => 1.0 / (4.0 * std::f64::consts::PI),
    }
}

/// Evanescent-segment integrand at real `gamma > 0`.
#[inline]
fn evan_integrand(
    gamma: f64,
    k: f64,
    theta: Complex64,
    dim: Dim,
    rho: f64,
    sigma: f64,
    part: ReflPart,
    deriv: KernelDeriv,
) -> Complex64 {
    let xi = (gamma * gamma + k * k).sqrt();
    let base = reflectance(Complex64::new(gamma, 0.0), theta, part);
    let envelope = (-gamma * sigma).exp();
    let trans = transverse_factor(dim, xi, rho, deriv);
    let d_sigma = if sigma_derivative(deriv) { -gamma } else { 1.0 };
    base * envelope * trans * d_sigma * evan_prefactor(dim)
}

/// Whether the flavour carries the `-gamma` factor of a sigma derivative.
#[inline]
fn sigma_derivative(deriv: KernelDeriv) -> bool {
    matches!(deriv, KernelDeriv::DSigma | KernelDeriv::CellMeanDSigma)
}

/// Propagating-segment integral over `t in [0, pi/2]` after `xi = k sin t`.
/// The substitution keeps the integrand smooth through the branch point.
fn prop_piece(
    k: f64,
    theta: Complex64,
    dim: Dim,
    rho: f64,
    sigma: f64,
    part: ReflPart,
    deriv: KernelDeriv,
    quad: &QuadratureSpec,
) -> Result<PieceValue, QuadratureError> {
    let integrand = move |t: f64| {
        let (s, c) = t.sin_cos();
        let gamma = Complex64::new(0.0, -k * c);
        let base = reflectance(gamma, theta, part);
        let envelope = (I * (k * sigma * c)).exp();
        let xi = k * s;
        let trans = match (dim, deriv) {
            (Dim::Two, KernelDeriv::Value) | (Dim::Two, KernelDeriv::DSigma) => (xi * rho).cos(),
            (Dim::Two, KernelDeriv::DRho) => -xi * (xi * rho).sin(),
            (Dim::Two, KernelDeriv::CellMean) | (Dim::Two, KernelDeriv::CellMeanDSigma) => {
                interval_mean(xi, rho)
            }
            (Dim::Three, KernelDeriv::Value) | (Dim::Three, KernelDeriv::DSigma) => {
                k * s * bessel_j0(xi * rho)
            }
            (Dim::Three, KernelDeriv::DRho) => -k * s * xi * bessel_j1(xi * rho),
            (Dim::Three, KernelDeriv::CellMean) | (Dim::Three, KernelDeriv::CellMeanDSigma) => {
                k * s * disk_mean(xi, rho)
            }
        };
        let d_sigma = if sigma_derivative(deriv) {
            -gamma
        } else {
            Complex64::new(1.0, 0.0)
        };
        let pref = match dim {
            Dim::Two => I * (0.5 / std::f64::consts::PI),
            Dim::Three => I * (0.25 / std::f64::consts::PI),
        };
        pref * base * envelope * trans * d_sigma
    };
    integrate_adaptive(integrand, 0.0, std::f64::consts::FRAC_PI_2, quad)
        .map(PieceValue::from_quad)
}

/// `gamma` value at which the evanescent head hands over to a tail scheme:
/// beyond every structural feature (pole window, branch curvature).
fn tail_start(k: f64, theta: Complex64) -> f64 {
    4.0 * k + 4.0 + 2.0 * theta.norm()
}

/// Tail of the evanescent segment from `start` to infinity.
fn evan_tail<F: FnMut(f64) -> Complex64 + Copy>(
    integrand: F,
    start: f64,
    rho: f64,
    sigma: f64,
    quad: &QuadratureSpec,
) -> Result<PieceValue, KernelError> {
    if rho <= 80.0 * sigma {
        // Exponential decay dominates oscillation; compactify.
        Ok(PieceValue::from_quad(integrate_to_infinity(
            integrand, start, quad,
        )?))
    } else if rho > 1e-3 {
        // Oscillation without useful decay; half-period partition plus
        // extrapolation of the partial sums.
        Ok(PieceValue::from_quad(integrate_oscillatory_tail(
            integrand, rho, start, quad,
        )?))
    } else {
        Err(KernelError::DegenerateGeometry { rho, sigma })
    }
}

/// Evanescent segment without a real pole on the path (`theta` complex or
/// zero, or the pole artificially shifted off axis).
fn evan_piece_smooth(
    k: f64,
    theta: Complex64,
    dim: Dim,
    rho: f64,
    sigma: f64,
    part: ReflPart,
    deriv: KernelDeriv,
    quad: &QuadratureSpec,
) -> Result<PieceValue, KernelError> {
    let f = move |g: f64| evan_integrand(g, k, theta, dim, rho, sigma, part, deriv);
    let start = tail_start(k, theta);
    let head = integrate_adaptive(f, 0.0, start, quad)?;
    let tail = evan_tail(f, start, rho, sigma, quad)?;
    Ok(PieceValue::from_quad(head).add(tail))
}

/// Evanescent segment for lossless media: symmetric principal value across
/// the pole `gamma = theta` plus `i pi` times the residue.
fn evan_piece_pv(
    k: f64,
    theta_re: f64,
    dim: Dim,
    rho: f64,
    sigma: f64,
    part: ReflPart,
    deriv: KernelDeriv,
    quad: &QuadratureSpec,
) -> Result<PieceValue, KernelError> {
    let theta = Complex64::new(theta_re, 0.0);
    let f = move |g: f64| evan_integrand(g, k, theta, dim, rho, sigma, part, deriv);
    let half_window = 0.5 * theta_re;
    let lo = theta_re - half_window;
    let hi = theta_re + half_window;

    // [0, lo]: regular.
    let left = integrate_adaptive(f, 0.0, lo, quad)?;

    // Symmetric window: the 1/(gamma - theta) odd part cancels between the
    // two sides, leaving a bounded integrand in s = |gamma - theta|.
    let sym = move |s: f64| f(theta_re + s) + f(theta_re - s);
    let window = integrate_adaptive(sym, 0.0, half_window, quad)?;

    // [hi, start] + tail: regular again.
    let start = tail_start(k, theta).max(hi + 1.0);
    let right = integrate_adaptive(f, hi, start, quad)?;
    let tail = evan_tail(f, start, rho, sigma, quad)?;

    // i pi times the residue; the reflectance has residue 2 theta at the pole
    // for both the full and correction-only variants.
    let xi_p = (theta_re * theta_re + k * k).sqrt();
    let phi_pole = {
        let envelope = (-theta_re * sigma).exp();
        let trans = transverse_factor(dim, xi_p, rho, deriv);
        let d_sigma = if sigma_derivative(deriv) { -theta_re } else { 1.0 };
        envelope * trans * d_sigma * evan_prefactor(dim)
    };
    let pole_term = I * std::f64::consts::PI * 2.0 * theta_re * phi_pole;

    Ok(PieceValue::from_quad(left)
        .add(PieceValue::from_quad(window))
        .add(PieceValue::from_quad(right))
        .add(tail)
        .add_exact(pole_term))
}

/// Reflected-part integral of the kernel (or its rho/sigma derivative), with
/// regime-appropriate pole handling.
pub(crate) fn reflected_integral(
    rho: f64,
    sigma: f64,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
    part: ReflPart,
    deriv: KernelDeriv,
) -> Result<PieceValue, KernelError> {
    let k = medium.wavenumber();
    let theta = medium.theta();
    let dim = medium.dim();
    let quad = &params.quad;

    match medium.regime() {
        Regime::Rigid => {
            if part == ReflPart::CorrectionOnly {
                return Ok(PieceValue::ZERO);
            }
            let prop = prop_piece(k, theta, dim, rho, sigma, part, deriv, quad)?;
            let evan = evan_piece_smooth(k, theta, dim, rho, sigma, part, deriv, quad)?;
            Ok(prop.add(evan))
        }
        Regime::Absorbing => {
            let prop = prop_piece(k, theta, dim, rho, sigma, part, deriv, quad)?;
            let evan = evan_piece_smooth(k, theta, dim, rho, sigma, part, deriv, quad)?;
            Ok(prop.add(evan))
        }
        Regime::NonAbsorbing => match params.pole_mode {
            PoleMode::ResidueExtraction => {
                let prop = prop_piece(k, theta, dim, rho, sigma, part, deriv, quad)?;
                let evan = evan_piece_pv(k, theta.re, dim, rho, sigma, part, deriv, quad)?;
                Ok(prop.add(evan))
            }
            PoleMode::LimitingAbsorption { epsilon } => {
                if !(epsilon > 0.0) {
                    return Err(KernelError::InvalidMedium(
                        "limiting absorption requires epsilon > 0".into(),
                    ));
                }
                // Two damped evaluations, Richardson-extrapolated: the value
                // is affine in epsilon to leading order, so 2 v(e/2) - v(e)
                // cancels the O(epsilon) term.
                let eval = |eps: f64| -> Result<PieceValue, KernelError> {
                    let th = theta + Complex64::new(0.0, eps);
                    let prop = prop_piece(k, th, dim, rho, sigma, part, deriv, quad)?;
                    let evan = evan_piece_smooth(k, th, dim, rho, sigma, part, deriv, quad)?;
                    Ok(prop.add(evan))
                };
                let full = eval(epsilon)?;
                let half = eval(0.5 * epsilon)?;
                Ok(half.scale(2.0).add(full.scale(-1.0)))
            }
        },
    }
}

/// Direct-part integral (reflection factor absent): the free-space kernel as
/// a genuine spectral quadrature, used by the no-shortcut route.
pub(crate) fn direct_integral(
    rho: f64,
    delta_abs: f64,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
) -> Result<PieceValue, KernelError> {
    let k = medium.wavenumber();
    let dim = medium.dim();
    let quad = &params.quad;

    // Propagating segment with unit reflectance and envelope height |delta|.
    let prop = {
        let integrand = move |t: f64| {
            let (s, c) = t.sin_cos();
            let envelope = (I * (k * delta_abs * c)).exp();
            let xi = k * s;
            let trans = match dim {
                Dim::Two => (xi * rho).cos(),
                Dim::Three => k * s * bessel_j0(xi * rho),
            };
            let pref = match dim {
                Dim::Two => I * (0.5 / std::f64::consts::PI),
                Dim::Three => I * (0.25 / std::f64::consts::PI),
            };
            pref * envelope * trans
        };
        integrate_adaptive(integrand, 0.0, std::f64::consts::FRAC_PI_2, quad)?
    };

    let f = move |g: f64| {
        let xi = (g * g + k * k).sqrt();
        let envelope = (-g * delta_abs).exp();
        let trans = match dim {
            Dim::Two => (xi * rho).cos() / xi,
            Dim::Three => bessel_j0(xi * rho),
        };
        Complex64::new(envelope * trans * evan_prefactor(dim), 0.0)
    };
    let start = tail_start(k, Complex64::new(0.0, 0.0));
    let head = integrate_adaptive(f, 0.0, start, quad)?;
    let tail = evan_tail(f, start, rho, delta_abs, quad)?;

    Ok(PieceValue::from_quad(prop)
        .add(PieceValue::from_quad(head))
        .add(tail))
}
