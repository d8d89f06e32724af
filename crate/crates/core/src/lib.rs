//! Half-space impedance scattering toolkit.
//!
//! The crate is organised around one physical setting: time-harmonic waves in
//! the half-space `x_d > 0` (`d = 2` or `3`) with an impedance condition
//! `du/dx_d + theta u = f` on the flat boundary. It provides
//!
//! * [`numerics`]: branch-aware square roots, Bessel/Hankel functions, and
//!   adaptive plus series-accelerated quadrature,
//! * [`green_kernel`]: the impedance Green function in spectral, image, and
//!   far-field form, with residue treatment of the surface-wave pole,
//! * [`forward_solver`]: a Lippmann-Schwinger volume solver for compactly
//!   supported perturbations of the medium,
//! * [`boundary_maps`]: discrete Dirichlet-to-Neumann, Neumann-to-Dirichlet,
//!   and Robin-to-Robin operators together with their algebraic identities,
//! * [`cgo_inverse`]: complex-phase (exponentially growing) solutions and the
//!   stationary-phase probes built from them,
//! * [`cli`]: the command-line front end used by the `hscat` binary.

pub mod boundary_maps;
pub mod cgo_inverse;
pub mod cli;
pub mod forward_solver;
pub mod green_kernel;
pub mod numerics;

pub use num_complex::Complex64;
