//! Complex-phase solutions on a planar potential patch and the
//! stationary-phase probes built from them.
//!
//! Everything here lives on a rectangle `B` in the plane `z = x_1 + i x_2`
//! carrying two bounded potentials. Around a holomorphic phase
//! `Phi(z) = (z - center)^2` the module builds pairs of solutions of the
//! Schroedinger equations `(Delta + q_1)v_1 = 0` and `(Delta + q_2)v_2 = 0`
//! that grow like `exp(tau Re Phi)`: a Neumann series of conjugated Cauchy
//! transforms whose terms shrink once the phase parameter `tau` is large
//! enough. The payoff is the orthogonality probe `int (q_1 - q_2) v_1 v_2`,
//! whose distance from the bare oscillatory integral
//! `int (q_1 - q_2) e^{tau(conj Phi - Phi)}` decays faster than `1/tau`;
//! scanning that distance over a ladder of `tau` values is the numerical
//! form of the uniqueness argument.
//!
//! The building blocks are exposed individually: solid Cauchy transforms
//! (the two antiholomorphic and holomorphic derivative inverses), the
//! conjugated smoothing operators, series assembly with contraction
//! tracking, and the probe plus its decay scan.

mod grid;
mod probes;
mod series;
mod transforms;

pub use grid::ComplexPlaneGrid;
pub use probes::{orthogonality_probe, phase_mismatch_integral, stationary_phase_scan, DecayReport};
pub use series::{build_cgo_pair, CgoConfig, CgoSeries, SeriesKind};
pub use transforms::{
    cauchy_transform_z, cauchy_transform_zbar, conjugated_smoother, SmootherVariant,
};

use crate::green_kernel::Dim;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CgoError {
    #[error("complex-phase machinery works on plane potentials, got {0:?}")]
    UnsupportedDimension(Dim),
    #[error("invalid phase configuration: {0}")]
    InvalidConfig(String),
    #[error("the two potentials must share one grid: {0}")]
    GridMismatch(String),
    #[error(
        "series term {term} grew by factor {ratio:.3} at tau = {tau}; \
         the phase parameter is too small for this potential, increase tau"
    )]
    NonContraction { tau: f64, term: usize, ratio: f64 },
}
