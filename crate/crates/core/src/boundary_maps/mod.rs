//! Discrete boundary operators of the half-space problem and the
//! identities connecting them.
//!
//! Three maps act on boundary data over a shared node basis: trace-to-flux
//! (Dirichlet-to-Neumann), flux-to-trace (Neumann-to-Dirichlet), and the
//! Robin-to-Robin map between two impedances. They are assembled on
//! independent routes and tied together by exact operator identities: the
//! first two are inverse to each other, and the shifted Robin-to-Robin map
//! `R - I` is a constant multiple of the resolvent `(Lambda + theta1)^{-1}`,
//! which is what makes the trace-to-flux map recoverable from Robin data.
//! [`check_identities`] measures every one of these relations on a band of
//! resolved modes; [`reduce_rtr_to_dtn`] performs the recovery.
//!
//! Assembly is two-dimensional. A circle basis periodizes the boundary and
//! reaches quadrature-level residuals for vacuum potentials; a line basis
//! supports arbitrary potentials through forward scattering solves and a
//! Dirichlet volume pathway, with window truncation as the price.

mod assemble;
mod basis;
mod dirichlet;
mod identities;
mod periodic;

pub use assemble::{build_dtn, build_ntd, build_rtr};
pub use basis::{BoundaryGeometry, OperatorBasis};
pub use dirichlet::dtn_kernel;
pub use identities::{
    check_identities, impedance_shift_scale, reduce_rtr_to_dtn, DtNRecovery, IdentityReport,
};

use crate::forward_solver::ForwardError;
use crate::green_kernel::{Dim, KernelError};
use crate::numerics::{ComplexMatrix, LinalgError, QuadratureError, SpecialFunctionError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MapsError {
    #[error("boundary operators are assembled in two dimensions, got {0:?}")]
    UnsupportedDimension(Dim),
    #[error("invalid operator basis: {0}")]
    InvalidBasis(String),
    #[error("the impedance pair must be distinct, got both equal to {0}")]
    DegenerateThetaPair(Complex64),
    #[error("circle-basis assembly needs a vacuum potential: {0}")]
    CircleNeedsVacuum(String),
    #[error("boundary points separated by {separation:.3e} have no finite kernel value")]
    CoincidentBoundaryPoints { separation: f64 },
    #[error(
        "impedance sits on discrete mode {mode} (distance {gap:.3e}); \
         perturb the impedance or change the period"
    )]
    ResonantMode { mode: i64, gap: f64 },
    #[error(
        "shifted Robin-to-Robin map is numerically singular \
         (smallest singular value {smallest_singular:.3e}); the boundary grid \
         does not resolve the inversion"
    )]
    InjectivityLost { smallest_singular: f64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Forward(#[from] ForwardError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

/// What a [`BoundaryOperator`] maps between.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Trace in, flux out.
    DtN,
    /// Flux in, trace out.
    NtD,
    /// Robin data at the first impedance in, Robin combination at the
    /// second impedance out.
    RtR,
    /// Shifted Robin-to-Robin map `R - I`.
    SMap,
    /// The same shifted construction for the reversed impedance pair.
    TMap,
    Identity,
}

/// A boundary map realized as a dense matrix on node values of the shared
/// basis.
pub struct BoundaryOperator {
    kind: OperatorKind,
    theta_pair: Option<(Complex64, Complex64)>,
    matrix: ComplexMatrix,
}

impl BoundaryOperator {
    pub(crate) fn new(
        kind: OperatorKind,
        theta_pair: Option<(Complex64, Complex64)>,
        matrix: ComplexMatrix,
    ) -> Self {
        Self {
            kind,
            theta_pair,
            matrix,
        }
    }

    /// The identity map on `n` nodes.
    pub fn identity(n: usize) -> Self {
        Self::new(OperatorKind::Identity, None, ComplexMatrix::identity(n))
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// The impedance pair the operator was built for, when it has one.
    pub fn theta_pair(&self) -> Option<(Complex64, Complex64)> {
        self.theta_pair
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn node_count(&self) -> usize {
        self.matrix.nrows()
    }

    /// Apply the map to boundary node values.
    pub fn apply(&self, values: &[Complex64]) -> Result<Vec<Complex64>, MapsError> {
        Ok(self.matrix.mul_vec(values)?)
    }

    /// Relabel the operator; the matrix is unchanged. Used when a shifted
    /// map built for the reversed impedance pair should carry its own name.
    pub fn with_kind(mut self, kind: OperatorKind) -> Self {
        self.kind = kind;
        self
    }

    /// The shifted map `R - I` of a Robin-to-Robin operator.
    pub fn minus_identity(&self) -> Result<BoundaryOperator, MapsError> {
        if self.kind != OperatorKind::RtR {
            return Err(MapsError::InvalidBasis(
                "the shifted map subtracts the identity from a Robin-to-Robin \
                 operator"
                    .into(),
            ));
        }
        let n = self.node_count();
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| {
            let delta = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            self.matrix.get(i, j) - delta
        });
        Ok(Self::new(OperatorKind::SMap, self.theta_pair, matrix))
    }
}
