//! Solid Cauchy transforms on the cell grid and their conjugated variants.

use super::grid::ComplexPlaneGrid;
use super::series::CgoConfig;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Sub-cells per axis when a kernel cell sits next to the evaluation point.
const NEAR_SUBDIVISION: usize = 4;

/// Inverse of the antiholomorphic derivative: the solid integral
/// `-(1/pi) int_B g(zeta) / (zeta - z) dA` at every cell centre `z`.
///
/// Cell quadrature takes one kernel value per cell, except that the cell
/// containing `z` contributes zero (the kernel is odd around its centre) and
/// the eight surrounding cells are split 4x4 to tame the near-singularity.
/// Applying the plane derivative `d/d zbar` to the result recovers `g` up to
/// the cell resolution at points away from the rectangle's edge.
///
/// `g` must hold one value per grid cell.
pub fn cauchy_transform_zbar(grid: &ComplexPlaneGrid, g: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(
        g.len(),
        grid.cell_count(),
        "field length must match the grid"
    );
    let table = weight_table(grid);
    let (nx, ny) = (grid.nx(), grid.ny());
    let stride = 2 * nx - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); g.len()];
    for tj in 0..ny {
        for ti in 0..nx {
            let mut acc = Complex64::new(0.0, 0.0);
            for sj in 0..ny {
                let row = (sj + ny - 1 - tj) * stride + (nx - 1 - ti);
                let weights = &table[row..row + nx];
                let sources = &g[sj * nx..sj * nx + nx];
                for (value, weight) in sources.iter().zip(weights) {
                    acc += value * weight;
                }
            }
            out[tj * nx + ti] = -acc / PI;
        }
    }
    out
}

/// Inverse of the holomorphic derivative: the solid integral
/// `-(1/pi) int_B g(zeta) / (conj zeta - conj z) dA` at every cell centre.
///
/// The kernel is the conjugate of the one in [`cauchy_transform_zbar`] and
/// the cell rule commutes with conjugation, so this is evaluated as the
/// conjugate transform of the conjugate field; the pairing
/// `transform_z(conj g) = conj(transform_zbar(g))` is exact by construction.
pub fn cauchy_transform_z(grid: &ComplexPlaneGrid, g: &[Complex64]) -> Vec<Complex64> {
    let conjugated: Vec<Complex64> = g.iter().map(|v| v.conj()).collect();
    let mut out = cauchy_transform_zbar(grid, &conjugated);
    for value in &mut out {
        *value = value.conj();
    }
    out
}

/// Which conjugated smoothing operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmootherVariant {
    /// `(1/2) e^{tau(conj Phi - Phi)} dz^{-1}(g e^{tau(Phi - conj Phi)})`,
    /// the operator behind the first series.
    RTilde,
    /// `(1/2) e^{tau(Phi - conj Phi)} dzbar^{-1}(g e^{tau(conj Phi - Phi)})`,
    /// the operator behind the second series.
    R,
}

/// Apply one of the two conjugated smoothing operators at phase parameter
/// `tau` (signed: the second series uses the reflected parameter).
///
/// Both conjugation factors are unimodular, `exp(+-2 i tau Im Phi)`, so the
/// operator inherits the decay of the underlying oscillatory integral; its
/// sup norm on smooth data shrinks like `tau^{-1/2}`.
pub fn conjugated_smoother(
    grid: &ComplexPlaneGrid,
    g: &[Complex64],
    tau: f64,
    config: &CgoConfig,
    variant: SmootherVariant,
) -> Vec<Complex64> {
    assert_eq!(
        g.len(),
        grid.cell_count(),
        "field length must match the grid"
    );
    assert!(tau.is_finite(), "phase parameter must be finite");
    // exp(tau(Phi - conj Phi)) = exp(2 i tau Im Phi), kept as polar values so
    // the modulus is exactly one.
    let inner_sign = match variant {
        SmootherVariant::RTilde => 1.0,
        SmootherVariant::R => -1.0,
    };
    let centers = grid.centers();
    let conjugated: Vec<Complex64> = g
        .iter()
        .zip(centers)
        .map(|(value, &z)| value * oscillation(z, config.center, inner_sign * tau))
        .collect();
    let mut out = match variant {
        SmootherVariant::RTilde => cauchy_transform_z(grid, &conjugated),
        SmootherVariant::R => cauchy_transform_zbar(grid, &conjugated),
    };
    for (value, &z) in out.iter_mut().zip(centers) {
        *value *= 0.5 * oscillation(z, config.center, -inner_sign * tau);
    }
    out
}

/// The holomorphic phase `Phi(z) = (z - center)^2`.
pub(crate) fn phase_square(z: Complex64, center: Complex64) -> Complex64 {
    let shifted = z - center;
    shifted * shifted
}

/// `exp(tau(Phi - conj Phi)) = exp(2 i tau Im Phi)` as an exactly unimodular
/// value.
pub(crate) fn oscillation(z: Complex64, center: Complex64, tau: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * tau * phase_square(z, center).im)
}

/// Cell weights of the `1/(zeta - z)` kernel, indexed by the lattice offset
/// between source and target cells.
///
/// The kernel is harmonic away from its pole, which wipes out the leading
/// midpoint error of the one-point rule; the remaining error concentrates in
/// the nearest ring, where the 4x4 split pushes it below the far-field
/// level.
fn weight_table(grid: &ComplexPlaneGrid) -> Vec<Complex64> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let h = grid.spacing();
    let area = h * h;
    let stride = 2 * nx - 1;
    let mut table = vec![Complex64::new(0.0, 0.0); stride * (2 * ny - 1)];
    let sub = NEAR_SUBDIVISION;
    let sub_area = area / (sub * sub) as f64;
    for dj in -(ny as isize - 1)..=(ny as isize - 1) {
        for di in -(nx as isize - 1)..=(nx as isize - 1) {
            let offset = Complex64::new(di as f64 * h, dj as f64 * h);
            let weight = if di == 0 && dj == 0 {
                // Odd kernel over the centred cell: exact zero.
                Complex64::new(0.0, 0.0)
            } else if di.abs() <= 1 && dj.abs() <= 1 {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..sub {
                    for b in 0..sub {
                        let shift = Complex64::new(
                            ((a as f64 + 0.5) / sub as f64 - 0.5) * h,
                            ((b as f64 + 0.5) / sub as f64 - 0.5) * h,
                        );
                        acc += sub_area / (offset + shift);
                    }
                }
                acc
            } else {
                area / offset
            };
            let row = (dj + ny as isize - 1) as usize;
            let col = (di + nx as isize - 1) as usize;
            table[row * stride + col] = weight;
        }
    }
    table
}
