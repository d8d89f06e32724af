//! Volume scattering in the half-space by a Lippmann-Schwinger solve.
//!
//! The total field splits as `u = u_inc + u_sc`: the incident part is
//! radiated by impedance boundary data through the half-space kernel, and
//! the scattered part comes from a compactly supported contrast `V = q - k^2`
//! inside a box of cells. A midpoint Nystrom discretization with a corrected
//! self cell turns the integral equation `u = u_inc + K(V u)` into the dense
//! system `(I - Q) u = u_inc`, solved directly by LU. All far-side effects
//! of the impedance plane enter through the kernel itself, so no mesh ever
//! touches the boundary.
//!
//! Layout:
//! - [`grid`](self): potential boxes, cell indexing and volume fields,
//! - [`boundary`](self): flat midpoint grids of boundary data,
//! - self-cell integrals for the volume and trace kernels,
//! - system assembly and the solve, field evaluation off the grid, and
//!   boundary traces and fluxes with analytic kernel derivatives.

use crate::green_kernel::KernelError;
use crate::numerics::{LinalgError, QuadratureError};
use num_complex::Complex64;
use thiserror::Error;

mod boundary;
mod grid;
mod selfcell;
mod solve;
mod system;

pub use boundary::BoundarySamples;
pub use grid::{PotentialGrid, PotentialPiece, PotentialRecipe, VolumeField};
pub use selfcell::{boundary_trace_self_cell, free_cell_integral};
pub use solve::{
    boundary_trace_and_flux, evaluate_field, incident_field, incident_field_flux_form,
    incident_field_flux_form_on_grid, incident_field_on_grid, solve_scattering,
    solve_scattering_from_incident, truncation_tail_estimate, ScatteringSolution,
};
pub use system::{assemble_ls_system, LsSystem, SYSTEM_MEMORY_CAP_BYTES};

/// Errors from grid setup, system assembly and the scattering solve.
#[derive(Debug, Error)]
pub enum ForwardError {
    /// A potential grid was inconsistent (dimension clashes, non-positive
    /// spacing, boxes touching the boundary plane, value-length mismatches).
    #[error("invalid potential grid: {0}")]
    InvalidGrid(String),

    /// Boundary samples were inconsistent or incompatible with the medium.
    #[error("invalid boundary samples: {0}")]
    InvalidBoundary(String),

    /// A potential cell had `Im q < 0`, which would pump energy into the
    /// medium and break the uniqueness the solver relies on.
    #[error("cell {cell} has Im q = {} < 0, an active medium", value.im)]
    NegativeAbsorption { cell: usize, value: Complex64 },

    /// The dense system would exceed the memory cap; checked before any
    /// allocation happens.
    #[error(
        "dense system for {cells} cells needs {bytes_required} bytes, over the {limit}-byte cap"
    )]
    SystemTooLarge {
        cells: usize,
        bytes_required: u128,
        limit: u128,
    },

    /// Field evaluation was requested inside the one-cell protection zone
    /// around the potential box, where the midpoint sum is invalid.
    #[error("evaluation point inside the potential box margin: {0}")]
    PointInsideGrid(String),

    #[error(transparent)]
    Kernel(#[from] KernelError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}
