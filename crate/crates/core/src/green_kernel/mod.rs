//! Green function of the Helmholtz operator in a half-space with an
//! impedance boundary condition `du/dx_d + theta u = 0` on `x_d = 0`.
//!
//! Three computational routes coexist deliberately:
//!
//! * a spectral route integrating the transverse-Fourier kernel with explicit
//!   principal-value plus residue treatment of the surface-wave pole,
//! * a production route that peels off the free-space kernel and its mirror
//!   image in closed form and quadratures only a smooth remainder,
//! * closed image sums for the rigid (`theta = 0`) and Dirichlet limits.
//!
//! Their mutual agreement is part of the test contract; none of them is
//! allowed to call another as a shortcut.

mod farfield;
mod images;
mod probes;
mod robin;
mod spectral;

pub use farfield::{
    farfield_expansion, fit_boundary_wavenumber, radiation_residual_scan, BoundaryWaveFit,
    FarFieldFrame, FarFieldValue, GreenSourceField, RadiatingField, RadiationScanReport,
};
pub use images::{green_free, green_free_gradient, green_images, ImageKind};
pub use probes::{robin_boundary_residual, BoundaryResidualReport, GaussianProbe};
pub use robin::{
    correction_term, green_robin, green_robin_gradient, green_robin_source_height_derivative,
    green_robin_via_spectral, surface_wave_term, GreenEvaluation,
};
pub use spectral::{spectral_green_hat, SpectralHatValue};

pub(crate) use images::free_kernel;
pub(crate) use spectral::{reflected_integral, KernelDeriv, ReflPart};

use crate::numerics::{QuadratureError, QuadratureSpec, SpecialFunctionError};
use num_complex::Complex64;
use thiserror::Error;

/// Spatial dimension of the half-space (ambient, including depth).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    /// Ambient dimension (2 or 3).
    pub fn ambient(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    /// Dimension of the boundary hyperplane.
    pub fn transverse(self) -> usize {
        self.ambient() - 1
    }
}

/// Physical regime of the impedance parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `theta = 0`: sound-hard boundary, pure Neumann images.
    Rigid,
    /// `theta` real positive: lossless boundary carrying surface waves.
    NonAbsorbing,
    /// `Im theta > 0`: dissipative boundary, no real spectral pole.
    Absorbing,
}

/// Wavenumber, impedance parameter, and dimension, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    dim: Dim,
    wavenumber: f64,
    theta: Complex64,
    regime: Regime,
}

impl MediumSpec {
    /// Requires `k > 0`, `Re theta >= 0`, and `Im theta >= 0`.
    pub fn new(dim: Dim, wavenumber: f64, theta: Complex64) -> Result<Self, KernelError> {
        if !(wavenumber > 0.0) || !wavenumber.is_finite() {
            return Err(KernelError::InvalidMedium(format!(
                "wavenumber must be positive and finite, got {wavenumber}"
            )));
        }
        if !theta.re.is_finite() || !theta.im.is_finite() {
            return Err(KernelError::InvalidMedium("theta must be finite".into()));
        }
        if theta.re < 0.0 || theta.im < 0.0 {
            return Err(KernelError::InvalidMedium(format!(
                "theta must lie in the closed upper-right quadrant, got {theta}"
            )));
        }
        let regime = if theta.norm() == 0.0 {
            Regime::Rigid
        } else if theta.im == 0.0 {
            Regime::NonAbsorbing
        } else {
            Regime::Absorbing
        };
        Ok(Self {
            dim,
            wavenumber,
            theta,
            regime,
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn theta(&self) -> Complex64 {
        self.theta
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Wavenumber of the surface wave, `sqrt(k^2 + theta^2)`; only meaningful
    /// in the non-absorbing regime.
    pub fn surface_wavenumber(&self) -> f64 {
        (self.wavenumber * self.wavenumber + self.theta.re * self.theta.re).sqrt()
    }

    /// Stable encoding for cache keys.
    pub fn cache_tag(&self) -> String {
        format!(
            "m:{}:{:016x}:{:016x}:{:016x}",
            self.dim.ambient(),
            self.wavenumber.to_bits(),
            self.theta.re.to_bits(),
            self.theta.im.to_bits()
        )
    }
}

/// Point in the closed half-space `x_d >= 0`.
///
/// Coordinates are stored transverse-first; `height` is the distance to the
/// boundary plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpacePoint {
    coords: [f64; 3],
    dim: Dim,
}

impl HalfSpacePoint {
    pub fn new2(x1: f64, height: f64) -> Result<Self, KernelError> {
        Self::build([x1, height, 0.0], Dim::Two, height)
    }

    pub fn new3(x1: f64, x2: f64, height: f64) -> Result<Self, KernelError> {
        Self::build([x1, x2, height], Dim::Three, height)
    }

    fn build(coords: [f64; 3], dim: Dim, height: f64) -> Result<Self, KernelError> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(KernelError::InvalidPoint("coordinates must be finite".into()));
        }
        if height < 0.0 {
            return Err(KernelError::InvalidPoint(format!(
                "height must be non-negative, got {height}"
            )));
        }
        Ok(Self { coords, dim })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Distance to the boundary plane.
    pub fn height(&self) -> f64 {
        match self.dim {
            Dim::Two => self.coords[1],
            Dim::Three => self.coords[2],
        }
    }

    /// Transverse coordinates (length `d - 1`).
    pub fn transverse(&self) -> &[f64] {
        match self.dim {
            Dim::Two => &self.coords[..1],
            Dim::Three => &self.coords[..2],
        }
    }

    /// Full coordinate slice, transverse components then height.
    pub fn coords(&self) -> &[f64] {
        match self.dim {
            Dim::Two => &self.coords[..2],
            Dim::Three => &self.coords[..3],
        }
    }

    /// Mirror image across the boundary plane (height negated). The result
    /// intentionally escapes the half-space; it is only meant as an auxiliary
    /// source location for image sums.
    pub(crate) fn mirror_coords(&self) -> [f64; 3] {
        let mut c = self.coords;
        match self.dim {
            Dim::Two => c[1] = -c[1],
            Dim::Three => c[2] = -c[2],
        }
        c
    }

    pub fn transverse_distance(&self, other: &Self) -> f64 {
        self.transverse()
            .iter()
            .zip(other.transverse())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Distance from `self` to the mirror image of `other`.
    pub fn mirror_distance(&self, other: &Self) -> f64 {
        let m = other.mirror_coords();
        self.coords
            .iter()
            .zip(m.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Treatment of the real-axis spectral pole in the non-absorbing regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PoleMode {
    /// Symmetric principal value plus `i pi` times the residue; the contour
    /// passes below the pole, matching the limiting-absorption limit.
    ResidueExtraction,
    /// Shift `theta -> theta + i epsilon` and Richardson-extrapolate
    /// (`epsilon`, `epsilon/2`) to the real axis. Retained as a cross-check.
    LimitingAbsorption { epsilon: f64 },
}

/// Normalisation constants and quadrature configuration for the spectral
/// kernel routes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralKernelParams {
    /// Prefactor of the spectral kernel formula (dimension dependent).
    pub c_pi: f64,
    /// Prefactor of the inverse Fourier integral (dimension dependent).
    pub c_pi_prime: f64,
    pub pole_mode: PoleMode,
    pub quad: QuadratureSpec,
}

impl SpectralKernelParams {
    pub fn for_medium(medium: &MediumSpec) -> Self {
        let (c_pi, c_pi_prime) = match medium.dim() {
            Dim::Two => (1.0 / (8.0 * std::f64::consts::PI).sqrt(), 1.0 / (4.0 * std::f64::consts::PI)),
            Dim::Three => (1.0 / (4.0 * std::f64::consts::PI), 1.0 / (2.0 * std::f64::consts::PI)),
        };
        Self {
            c_pi,
            c_pi_prime,
            pole_mode: PoleMode::ResidueExtraction,
            quad: QuadratureSpec::default(),
        }
    }

    /// Boundary delta normalisation constant `2 C_pi C'_pi`.
    pub fn delta_normalization(&self) -> f64 {
        2.0 * self.c_pi * self.c_pi_prime
    }

    /// Stable encoding for cache keys.
    pub fn cache_tag(&self) -> String {
        let pm = match self.pole_mode {
            PoleMode::ResidueExtraction => "res".to_string(),
            PoleMode::LimitingAbsorption { epsilon } => format!("la{:016x}", epsilon.to_bits()),
        };
        format!(
            "p:{:016x}:{:016x}:{}:{}",
            self.c_pi.to_bits(),
            self.c_pi_prime.to_bits(),
            pm,
            self.quad.cache_tag()
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("invalid medium: {0}")]
    InvalidMedium(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("points coincide up to {distance:e}; the kernel is singular there")]
    CoincidentPoints { distance: f64 },
    #[error("{op} requires {requirement}")]
    RegimeMismatch {
        op: &'static str,
        requirement: &'static str,
    },
    #[error("degenerate boundary geometry: rho = {rho:e}, sigma = {sigma:e}")]
    DegenerateGeometry { rho: f64, sigma: f64 },
    #[error("spectral kernel evaluated at a branch point (xi = {xi})")]
    BranchPoint { xi: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    SpecialFunction(#[from] SpecialFunctionError),
}

/// Geometry both points share, precomputed once per kernel call.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairGeometry {
    /// Transverse separation.
    pub rho: f64,
    /// Height sum `x_d + y_d`.
    pub sigma: f64,
    /// Height difference `x_d - y_d` (signed).
    pub delta: f64,
    /// Euclidean separation.
    pub dist: f64,
    /// Separation from the mirror image.
    pub mirror_dist: f64,
}

pub(crate) fn pair_geometry(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
) -> Result<PairGeometry, KernelError> {
    if x.dim() != medium.dim() || y.dim() != medium.dim() {
        return Err(KernelError::InvalidPoint(
            "point dimension does not match the medium".into(),
        ));
    }
    let g = PairGeometry {
        rho: x.transverse_distance(y),
        sigma: x.height() + y.height(),
        delta: x.height() - y.height(),
        dist: x.distance(y),
        mirror_dist: x.mirror_distance(y),
    };
    if g.dist < 1e-12 {
        return Err(KernelError::CoincidentPoints { distance: g.dist });
    }
    Ok(g)
}
