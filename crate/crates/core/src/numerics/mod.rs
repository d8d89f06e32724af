//! Shared numerical kernels: branch-aware square roots, cylinder functions,
//! and the quadrature engines everything else is built on.

mod bessel;
pub mod linalg;
mod oscillatory;
mod quadrature;

pub use bessel::{
    bessel_j0, bessel_j1, bessel_y0, bessel_y1, hankel0_first, hankel1_first,
    SpecialFunctionError,
};
pub use linalg::{condition_estimate, ComplexMatrix, LinalgError, LuFactors};
pub use oscillatory::{integrate_oscillatory_tail, wynn_epsilon};
pub use quadrature::{integrate_adaptive, integrate_to_infinity, QuadResult, QuadratureError};

use num_complex::Complex64;

/// Branch choice for `gamma(xi) = sqrt(xi^2 - k^2)`.
///
/// There is exactly one supported rule: evanescent modes decay and
/// propagating modes are outgoing. The type exists so that the convention is
/// named in signatures and can be stamped into cache keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchRule {
    /// `|xi| > k`: `gamma` real positive (decay in the depth coordinate);
    /// `|xi| < k`: `gamma = -i sqrt(k^2 - xi^2)` (outgoing travelling wave
    /// under the `e^{-i omega t}` time convention).
    DecayingOutgoing,
}

/// Named branch convention; see [`BranchRule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchConvention {
    pub rule: BranchRule,
}

impl BranchConvention {
    pub const ACTIVE: BranchConvention = BranchConvention {
        rule: BranchRule::DecayingOutgoing,
    };

    /// Stable tag for serialization and cache keys. Bump when the branch
    /// convention (or anything that silently depends on it) changes.
    pub fn version_tag(&self) -> &'static str {
        "decaying-outgoing-v1"
    }
}

impl Default for BranchConvention {
    fn default() -> Self {
        Self::ACTIVE
    }
}

/// `sqrt(xi^2 - k^2)` on the decaying/outgoing branch.
///
/// Total for finite inputs: at `|xi| = k` both limits agree and the value is
/// exactly zero.
#[inline]
pub fn branch_sqrt(xi: f64, k: f64) -> Complex64 {
    let d = xi * xi - k * k;
    if d >= 0.0 {
        Complex64::new(d.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, -(-d).sqrt())
    }
}

/// Tuning knobs shared by the adaptive integrators.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Panels the interval is split into before refinement starts.
    pub initial_panels: usize,
    /// Hard cap on panels produced by adaptive bisection.
    pub max_panels: usize,
    /// Absolute tolerance on the accumulated integral.
    pub abs_tol: f64,
    /// Relative tolerance on the accumulated integral.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            initial_panels: 1,
            max_panels: 4096,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
        }
    }
}

impl QuadratureSpec {
    /// Tolerance actually enforced for a running estimate `value`.
    #[inline]
    pub(crate) fn tolerance_for(&self, value_norm: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value_norm)
    }

    /// Stable tag of the fields that affect computed values, for cache keys.
    pub fn cache_tag(&self) -> String {
        format!(
            "q:{}:{}:{:016x}:{:016x}",
            self.initial_panels,
            self.max_panels,
            self.abs_tol.to_bits(),
            self.rel_tol.to_bits()
        )
    }
}
