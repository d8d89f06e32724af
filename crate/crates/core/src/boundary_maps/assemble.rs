//! Public constructors for the discrete boundary operators.
//!
//! Each builder produces a node-value matrix over a shared
//! [`OperatorBasis`]: apply the continuous map to every basis function,
//! sample the result on the nodes, and compose with basis interpolation.
//! On the circle geometry the columns come from the periodized kernel or
//! its Fourier symbol and require a vacuum potential; on the line geometry
//! they come from forward scattering solves and support any potential, at
//! the price of window-truncation error in the far columns.

use super::basis::{BoundaryGeometry, OperatorBasis};
use super::dirichlet::line_dtn_columns;
use super::periodic::{
    check_mode_resonance, circulant_from_column, multiplier_circulant_column,
    ntd_circulant_column,
};
use super::{BoundaryOperator, MapsError, OperatorKind};
use crate::forward_solver::{
    assemble_ls_system, boundary_trace_and_flux, incident_field_on_grid,
    solve_scattering_from_incident, PotentialGrid,
};
use crate::green_kernel::{Dim, MediumSpec, SpectralKernelParams};
use crate::numerics::ComplexMatrix;
use num_complex::Complex64;

fn check_setup(
    potential: &PotentialGrid,
    medium: &MediumSpec,
    basis: &OperatorBasis,
) -> Result<(), MapsError> {
    if medium.dim() != Dim::Two {
        return Err(MapsError::UnsupportedDimension(medium.dim()));
    }
    if potential.dim() != Dim::Two {
        return Err(MapsError::UnsupportedDimension(potential.dim()));
    }
    if basis.geometry() == BoundaryGeometry::Circle {
        let zero = Complex64::new(0.0, 0.0);
        if potential.contrast(medium).iter().any(|v| *v != zero) {
            return Err(MapsError::CircleNeedsVacuum(
                "the periodized kernel is a vacuum closed form; use a line basis \
                 for potentials"
                    .into(),
            ));
        }
    }
    Ok(())
}

fn medium_with_theta(medium: &MediumSpec, theta: Complex64) -> Result<MediumSpec, MapsError> {
    Ok(MediumSpec::new(Dim::Two, medium.wavenumber(), theta)?)
}

/// Scattering solves against every basis element under the given medium,
/// returning per-node traces and fluxes as raw columns.
fn line_solve_columns(
    basis: &OperatorBasis,
    potential: &PotentialGrid,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
) -> Result<(ComplexMatrix, ComplexMatrix), MapsError> {
    let n = basis.node_count();
    let system = assemble_ls_system(potential, medium, params)?;
    let mut traces = ComplexMatrix::zeros(n, n);
    let mut fluxes = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let data = basis.data_element(j)?;
        let incident = incident_field_on_grid(&data, potential, medium, params)?;
        let solution = solve_scattering_from_incident(&system, incident)?;
        let (trace, flux) = boundary_trace_and_flux(&solution.field, &data, medium, params)?;
        for i in 0..n {
            traces.set(i, j, trace.values()[i]);
            fluxes.set(i, j, flux.values()[i]);
        }
    }
    Ok((traces, fluxes))
}

/// Flux-to-trace map: boundary data is interpreted as rigid-boundary flux
/// and the operator returns the resulting boundary trace.
pub fn build_ntd(
    potential: &PotentialGrid,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
    basis: &OperatorBasis,
) -> Result<BoundaryOperator, MapsError> {
    check_setup(potential, medium, basis)?;
    let rigid = medium_with_theta(medium, Complex64::new(0.0, 0.0))?;
    let raw = match basis.geometry() {
        BoundaryGeometry::Circle => {
            circulant_from_column(&ntd_circulant_column(basis, &rigid)?)
        }
        BoundaryGeometry::Line => line_solve_columns(basis, potential, &rigid, params)?.0,
    };
    Ok(BoundaryOperator::new(
        OperatorKind::NtD,
        None,
        basis.columns_to_node_map(&raw)?,
    ))
}

/// Trace-to-flux map, the inverse pair of [`build_ntd`].
///
/// Assembled on an independent route from the flux-to-trace map: Fourier
/// symbol on the circle, the Dirichlet volume pathway on the line. Inverse
/// identities between the two therefore test the analysis, not the code
/// against itself. Neither route needs spectral quadrature, so the
/// parameter block is accepted only to keep the builders uniform.
pub fn build_dtn(
    potential: &PotentialGrid,
    medium: &MediumSpec,
    _params: &SpectralKernelParams,
    basis: &OperatorBasis,
) -> Result<BoundaryOperator, MapsError> {
    check_setup(potential, medium, basis)?;
    let raw = match basis.geometry() {
        BoundaryGeometry::Circle => circulant_from_column(&multiplier_circulant_column(
            basis,
            medium,
            |gamma| -gamma,
        )),
        BoundaryGeometry::Line => line_dtn_columns(basis, potential, medium)?,
    };
    Ok(BoundaryOperator::new(
        OperatorKind::DtN,
        None,
        basis.columns_to_node_map(&raw)?,
    ))
}

/// Robin-to-Robin map between two impedances: data with impedance
/// `theta1` in, the same field's boundary combination with impedance
/// `theta2` out.
pub fn build_rtr(
    theta1: Complex64,
    theta2: Complex64,
    potential: &PotentialGrid,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
    basis: &OperatorBasis,
) -> Result<BoundaryOperator, MapsError> {
    check_setup(potential, medium, basis)?;
    if theta1 == theta2 {
        return Err(MapsError::DegenerateThetaPair(theta1));
    }
    let medium1 = medium_with_theta(medium, theta1)?;
    let n = basis.node_count();
    let shift = theta2 - theta1;
    let matrix = match basis.geometry() {
        BoundaryGeometry::Circle => {
            // R = I + (theta2 - theta1) M with M the trace map of the
            // first impedance; the rigid trace map is the flux-to-trace
            // column route, impedance traces come from their symbol.
            let trace_raw = if theta1 == Complex64::new(0.0, 0.0) {
                circulant_from_column(&ntd_circulant_column(basis, &medium1)?)
            } else {
                check_mode_resonance(basis, medium, theta1)?;
                circulant_from_column(&multiplier_circulant_column(basis, medium, |gamma| {
                    (theta1 - gamma).finv()
                }))
            };
            let trace = basis.columns_to_node_map(&trace_raw)?;
            ComplexMatrix::from_fn(n, n, |i, j| {
                let delta = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                delta + shift * trace.get(i, j)
            })
        }
        BoundaryGeometry::Line => {
            let (traces, fluxes) = line_solve_columns(basis, potential, &medium1, params)?;
            let raw = ComplexMatrix::from_fn(n, n, |i, j| {
                fluxes.get(i, j) + theta2 * traces.get(i, j)
            });
            basis.columns_to_node_map(&raw)?
        }
    };
    Ok(BoundaryOperator::new(
        OperatorKind::RtR,
        Some((theta1, theta2)),
        matrix,
    ))
}
