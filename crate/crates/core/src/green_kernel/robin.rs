//! Assembled impedance kernel.
//!
//! The production route peels the free-space kernel and its mirror image off
//! in closed form and quadratures only the smooth correction carrying the
//! factor `2 theta/(gamma - theta)`. The spectral route keeps the full
//! reflection coefficient inside the integral; it is slower and exists as an
//! independent cross-check. Both assemble the same function.

use super::images::{free_kernel, free_kernel_radial_derivative};
use super::spectral::{direct_integral, reflected_integral, KernelDeriv, ReflPart};
use super::{
    pair_geometry, Dim, HalfSpacePoint, KernelError, MediumSpec, Regime, SpectralKernelParams,
};
use crate::numerics::hankel0_first;
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Kernel value together with its reported decomposition.
///
/// `value = free_part + reflected_part` holds exactly as computed;
/// `abs_error` bounds the quadrature error of the pieces that were
/// integrated numerically.
#[derive(Debug, Clone, Copy)]
pub struct GreenEvaluation {
    pub value: Complex64,
    pub free_part: Complex64,
    pub reflected_part: Complex64,
    pub abs_error: f64,
}

/// Impedance half-space kernel, production route: free kernel plus mirror
/// image in closed form plus the quadratured smooth correction.
pub fn green_robin(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
) -> Result<GreenEvaluation, KernelError> {
    let geo = pair_geometry(x, y, medium)?;
    let free = free_kernel(geo.dist, medium)?;
    let image = free_kernel(geo.mirror_dist, medium)?;
    let (corr, err) = if medium.regime() == Regime::Rigid {
        (Complex64::new(0.0, 0.0), 0.0)
    } else {
        let piece = reflected_integral(
            geo.rho,
            geo.sigma,
            medium,
            params,
            ReflPart::CorrectionOnly,
            KernelDeriv::Value,
        )?;
        (piece.value, piece.abs_error)
    };
    Ok(GreenEvaluation {
        value: free + image + corr,
        free_part: free,
        reflected_part: image + corr,
        abs_error: err,
    })
}

/// Impedance kernel through the spectral representation alone: direct and
/// reflected parts are both genuine quadratures, with the full reflection
/// coefficient left inside the integrand. No closed-form shortcut.
pub fn green_robin_via_spectral(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
) -> Result<GreenEvaluation, KernelError> {
    let geo = pair_geometry(x, y, medium)?;
    let direct = direct_integral(geo.rho, geo.delta.abs(), medium, params)?;
    let refl = reflected_integral(
        geo.rho,
        geo.sigma,
        medium,
        params,
        ReflPart::FullReflect,
        KernelDeriv::Value,
    )?;
    Ok(GreenEvaluation {
        value: direct.value + refl.value,
        free_part: direct.value,
        reflected_part: refl.value,
        abs_error: direct.abs_error + refl.abs_error,
    })
}

/// Smooth correction beyond the Neumann image pair. Defined only when the
/// impedance is nonzero; for a rigid boundary the split degenerates.
pub fn correction_term(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
) -> Result<Complex64, KernelError> {
    if medium.regime() == Regime::Rigid {
        return Err(KernelError::RegimeMismatch {
            op: "correction_term",
            requirement: "a nonzero impedance",
        });
    }
    let geo = pair_geometry(x, y, medium)?;
    let piece = reflected_integral(
        geo.rho,
        geo.sigma,
        medium,
        params,
        ReflPart::CorrectionOnly,
        KernelDeriv::Value,
    )?;
    Ok(piece.value)
}

/// Closed-form surface-wave term: the residue contribution of the spectral
/// pole `gamma = theta`, propagating along the boundary with wavenumber
/// `sqrt(k^2 + theta^2)` and decaying exponentially in the height sum.
pub fn surface_wave_term(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
) -> Result<Complex64, KernelError> {
    if medium.regime() != Regime::NonAbsorbing {
        return Err(KernelError::RegimeMismatch {
            op: "surface_wave_term",
            requirement: "real positive impedance",
        });
    }
    let geo = pair_geometry(x, y, medium)?;
    let theta = medium.theta().re;
    let xi_p = medium.surface_wavenumber();
    let envelope = (-theta * geo.sigma).exp();
    match medium.dim() {
        Dim::Two => Ok(I * theta / xi_p * envelope * (I * (xi_p * geo.rho)).exp()),
        Dim::Three => {
            if geo.rho < 1e-12 {
                return Err(KernelError::DegenerateGeometry {
                    rho: geo.rho,
                    sigma: geo.sigma,
                });
            }
            let h0 = hankel0_first(xi_p * geo.rho)?;
            Ok(I * theta * 0.5 * envelope * h0)
        }
    }
}

/// Gradient of the production-route kernel in the field point `x`,
/// transverse components first, height component last.
pub fn green_robin_gradient(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
) -> Result<Vec<Complex64>, KernelError> {
    let geo = pair_geometry(x, y, medium)?;
    let n = medium.dim().ambient();
    let mut grad = vec![Complex64::new(0.0, 0.0); n];

    let d_free = free_kernel_radial_derivative(geo.dist, medium)?;
    let d_image = free_kernel_radial_derivative(geo.mirror_dist, medium)?;
    let yc = y.coords();
    let ym = y.mirror_coords();
    for (i, (&xi, g)) in x.coords().iter().zip(grad.iter_mut()).enumerate() {
        *g = d_free * ((xi - yc[i]) / geo.dist) + d_image * ((xi - ym[i]) / geo.mirror_dist);
    }

    if medium.regime() != Regime::Rigid {
        let d_sigma = reflected_integral(
            geo.rho,
            geo.sigma,
            medium,
            params,
            ReflPart::CorrectionOnly,
            KernelDeriv::DSigma,
        )?;
        grad[n - 1] += d_sigma.value;
        // Transverse correction gradient; at rho = 0 the radial derivative
        // vanishes and the direction is undefined, so skip it.
        if geo.rho >= 1e-12 {
            let d_rho = reflected_integral(
                geo.rho,
                geo.sigma,
                medium,
                params,
                ReflPart::CorrectionOnly,
                KernelDeriv::DRho,
            )?;
            let xt = x.transverse();
            let yt = y.transverse();
            for i in 0..medium.dim().transverse() {
                grad[i] += d_rho.value * ((xt[i] - yt[i]) / geo.rho);
            }
        }
    }
    Ok(grad)
}

/// Derivative of the production-route kernel in the source height `y_d`.
/// Used to express incident fields through boundary data.
pub fn green_robin_source_height_derivative(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
) -> Result<Complex64, KernelError> {
    let geo = pair_geometry(x, y, medium)?;
    let d_free = free_kernel_radial_derivative(geo.dist, medium)?;
    let d_image = free_kernel_radial_derivative(geo.mirror_dist, medium)?;
    // d dist/d y_d = -(x_d - y_d)/dist; d mirror_dist/d y_d = sigma/mirror_dist.
    let mut total = d_free * (-geo.delta / geo.dist) + d_image * (geo.sigma / geo.mirror_dist);
    if medium.regime() != Regime::Rigid {
        let d_sigma = reflected_integral(
            geo.rho,
            geo.sigma,
            medium,
            params,
            ReflPart::CorrectionOnly,
            KernelDeriv::DSigma,
        )?;
        total += d_sigma.value;
    }
    Ok(total)
}
