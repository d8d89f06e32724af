//! Free-space kernel and the two-term image sums that solve the Dirichlet
//! and rigid (Neumann) half-space problems in closed form.

use super::{pair_geometry, Dim, HalfSpacePoint, KernelError, MediumSpec};
use crate::numerics::hankel0_first;
use num_complex::Complex64;

/// Which boundary condition the image combination enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageKind {
    /// `G(x, y) - G(x, y~)`: trace vanishes on the boundary.
    Dirichlet,
    /// `G(x, y) + G(x, y~)`: normal derivative vanishes on the boundary.
    Neumann,
}

/// Radiating free-space kernel as a function of separation.
pub(crate) fn free_kernel(r: f64, medium: &MediumSpec) -> Result<Complex64, KernelError> {
    if r < 1e-12 {
        return Err(KernelError::CoincidentPoints { distance: r });
    }
    let k = medium.wavenumber();
    match medium.dim() {
        Dim::Two => Ok(Complex64::new(0.0, 0.25) * hankel0_first(k * r)?),
        Dim::Three => {
            Ok(Complex64::new(0.0, k * r).exp() / (4.0 * std::f64::consts::PI * r))
        }
    }
}

/// Radial derivative of the free-space kernel.
pub(crate) fn free_kernel_radial_derivative(
    r: f64,
    medium: &MediumSpec,
) -> Result<Complex64, KernelError> {
    if r < 1e-12 {
        return Err(KernelError::CoincidentPoints { distance: r });
    }
    let k = medium.wavenumber();
    match medium.dim() {
        Dim::Two => Ok(Complex64::new(0.0, -0.25 * k) * crate::numerics::hankel1_first(k * r)?),
        Dim::Three => {
            let ikr = Complex64::new(0.0, k * r);
            Ok(ikr.exp() * (ikr - 1.0) / (4.0 * std::f64::consts::PI * r * r))
        }
    }
}

/// Free-space Green function `G_free(x, y)` of the radiating convention
/// (`(Delta + k^2) G = -delta`).
pub fn green_free(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
) -> Result<Complex64, KernelError> {
    let g = pair_geometry(x, y, medium)?;
    free_kernel(g.dist, medium)
}

/// Gradient of `green_free` with respect to `x` (length `d`).
pub fn green_free_gradient(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
) -> Result<Vec<Complex64>, KernelError> {
    let g = pair_geometry(x, y, medium)?;
    let dr = free_kernel_radial_derivative(g.dist, medium)?;
    let grad = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| dr * ((a - b) / g.dist))
        .collect();
    Ok(grad)
}

/// Two-term image sum over the boundary plane.
pub fn green_images(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
    kind: ImageKind,
) -> Result<Complex64, KernelError> {
    let g = pair_geometry(x, y, medium)?;
    let direct = free_kernel(g.dist, medium)?;
    let mirrored = free_kernel(g.mirror_dist, medium)?;
    Ok(match kind {
        ImageKind::Dirichlet => direct - mirrored,
        ImageKind::Neumann => direct + mirrored,
    })
}
