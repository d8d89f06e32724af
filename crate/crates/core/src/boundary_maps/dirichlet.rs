//! Dirichlet-to-Neumann assembly through the zero-trace half-space problem.
//!
//! The trace-to-flux map with a potential splits into the vacuum part,
//! whose kernel is known in closed form, plus a smooth correction: push the
//! boundary data into the volume with the Poisson kernel of the Dirichlet
//! half-space, scatter it off the potential with a volume integral
//! equation, and read the extra normal flux back on the boundary. The
//! Dirichlet background kernel is a plain image difference, so no spectral
//! quadrature appears anywhere on this path.

use super::basis::OperatorBasis;
use super::MapsError;
use crate::forward_solver::{free_cell_integral, ForwardError, PotentialGrid, SYSTEM_MEMORY_CAP_BYTES};
use crate::green_kernel::{free_kernel, Dim, MediumSpec, SpectralKernelParams};
use crate::numerics::{
    branch_sqrt, hankel1_first, integrate_adaptive, ComplexMatrix, LuFactors, QuadratureSpec,
};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Boundary pairs closer than this have no finite kernel value.
const COINCIDENCE_FLOOR: f64 = 1e-9;

/// Subdivisions of a node interval when a boundary integral against smooth
/// volume kernels is discretized by midpoints.
const POISSON_SUBSAMPLE: usize = 4;

/// Vacuum trace-to-flux kernel at transverse separation `t`: the second
/// normal derivative of the image-difference kernel, taken on the boundary.
/// Integrals against it exist as finite parts; pointwise it is valid for
/// `t != 0` and behaves like `1/(pi t^2)` at short range.
pub(crate) fn vacuum_dtn_kernel(t: f64, medium: &MediumSpec) -> Result<Complex64, MapsError> {
    let k = medium.wavenumber();
    let r = t.abs();
    Ok(Complex64::new(0.0, 0.5 * k) * hankel1_first(k * r)? / r)
}

/// Shared form of the Poisson kernel and its flux adjoint: the boundary
/// normal derivative of the image-difference kernel, with one point at
/// height `z2 > 0` and transverse separation `dx`.
fn boundary_normal_kernel(k: f64, dx: f64, z2: f64) -> Result<Complex64, MapsError> {
    let r = dx.hypot(z2);
    Ok(Complex64::new(0.0, 0.5 * k * z2) * hankel1_first(k * r)? / r)
}

/// Volume scattering problem for the Dirichlet half-space background.
///
/// Holds the factorized operator `I - vol G_D V` on the potential grid,
/// where `G_D` is the image-difference kernel with an exactly integrated
/// self cell. When the contrast vanishes the factorization is skipped and
/// every correction is zero.
pub(crate) struct DirichletBackground<'a> {
    grid: &'a PotentialGrid,
    contrast: Vec<Complex64>,
    centers: Vec<(f64, f64)>,
    factors: Option<LuFactors>,
    k: f64,
}

impl<'a> DirichletBackground<'a> {
    pub(crate) fn new(
        grid: &'a PotentialGrid,
        medium: &MediumSpec,
    ) -> Result<Self, MapsError> {
        if medium.dim() != Dim::Two || grid.dim() != Dim::Two {
            return Err(MapsError::UnsupportedDimension(grid.dim()));
        }
        let contrast = grid.contrast(medium);
        let n = grid.cell_count();
        let centers: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let c = grid.cell_center(i);
                (c[0], c[1])
            })
            .collect();
        let k = medium.wavenumber();
        let zero = Complex64::new(0.0, 0.0);
        if contrast.iter().all(|v| *v == zero) {
            return Ok(Self {
                grid,
                contrast,
                centers,
                factors: None,
                k,
            });
        }

        let bytes = (n as u128) * (n as u128) * std::mem::size_of::<Complex64>() as u128;
        if bytes > SYSTEM_MEMORY_CAP_BYTES {
            return Err(ForwardError::SystemTooLarge {
                cells: n,
                bytes_required: bytes,
                limit: SYSTEM_MEMORY_CAP_BYTES,
            }
            .into());
        }
        let vol = grid.cell_volume();
        let free_cell = free_cell_integral(medium, grid.spacing())?;
        let mut a = ComplexMatrix::identity(n);
        for i in 0..n {
            let (x1, x2) = centers[i];
            for j in 0..n {
                if contrast[j] == zero {
                    continue;
                }
                let (y1, y2) = centers[j];
                let g = if i == j {
                    free_cell / vol - free_kernel(2.0 * x2, medium)?
                } else {
                    let direct = (x1 - y1).hypot(x2 - y2);
                    let mirror = (x1 - y1).hypot(x2 + y2);
                    free_kernel(direct, medium)? - free_kernel(mirror, medium)?
                };
                let delta = if i == j { Complex64::new(1.0, 0.0) } else { zero };
                a.set(i, j, delta - vol * g * contrast[j]);
            }
        }
        Ok(Self {
            grid,
            contrast,
            centers,
            factors: Some(a.factorize()),
            k,
        })
    }

    pub(crate) fn has_contrast(&self) -> bool {
        self.factors.is_some()
    }

    /// Total field in the volume driven by a boundary point source at
    /// transverse position `y1`: Poisson column, then the volume solve.
    pub(crate) fn solve_point_source(&self, y1: f64) -> Result<Vec<Complex64>, MapsError> {
        let rhs: Vec<Complex64> = self
            .centers
            .iter()
            .map(|&(z1, z2)| boundary_normal_kernel(self.k, z1 - y1, z2))
            .collect::<Result<_, _>>()?;
        self.solve(rhs)
    }

    /// Total field driven by smooth boundary data, with the Poisson
    /// integral discretized by midpoints on `[a, b]`.
    pub(crate) fn solve_smooth_data(
        &self,
        a: f64,
        b: f64,
        data: &dyn Fn(f64) -> Complex64,
    ) -> Result<Vec<Complex64>, MapsError> {
        let samples =
            (((b - a) / self.grid.spacing()).ceil() as usize).max(1) * POISSON_SUBSAMPLE;
        let step = (b - a) / samples as f64;
        let mut rhs = vec![Complex64::new(0.0, 0.0); self.centers.len()];
        for s in 0..samples {
            let t = a + (s as f64 + 0.5) * step;
            let f = data(t) * step;
            for (i, &(z1, z2)) in self.centers.iter().enumerate() {
                rhs[i] += boundary_normal_kernel(self.k, z1 - t, z2)? * f;
            }
        }
        self.solve(rhs)
    }

    fn solve(&self, rhs: Vec<Complex64>) -> Result<Vec<Complex64>, MapsError> {
        match &self.factors {
            Some(lu) => Ok(lu.solve(&rhs)?),
            None => Ok(rhs),
        }
    }

    /// Extra boundary flux at `x1` radiated by the scattered volume field.
    pub(crate) fn flux_correction(
        &self,
        x1: f64,
        field: &[Complex64],
    ) -> Result<Complex64, MapsError> {
        let zero = Complex64::new(0.0, 0.0);
        let vol = self.grid.cell_volume();
        let mut sum = zero;
        for (i, &(z1, z2)) in self.centers.iter().enumerate() {
            if self.contrast[i] == zero {
                continue;
            }
            sum += boundary_normal_kernel(self.k, x1 - z1, z2)? * self.contrast[i] * field[i];
        }
        Ok(vol * sum)
    }
}

/// Off-diagonal kernel of the trace-to-flux map at two boundary points.
///
/// The value is the vacuum kernel plus the potential correction obtained by
/// sending a boundary point source through the Dirichlet volume problem and
/// reading the scattered flux at the observation point. The spectral
/// parameter block is accepted so every kernel routine shares one calling
/// shape; this pathway needs no spectral quadrature.
pub fn dtn_kernel(
    x_prime: f64,
    y_prime: f64,
    potential: &PotentialGrid,
    medium: &MediumSpec,
    _params: &SpectralKernelParams,
) -> Result<Complex64, MapsError> {
    let separation = (x_prime - y_prime).abs();
    if separation < COINCIDENCE_FLOOR {
        return Err(MapsError::CoincidentBoundaryPoints { separation });
    }
    let mut value = vacuum_dtn_kernel(x_prime - y_prime, medium)?;
    let background = DirichletBackground::new(potential, medium)?;
    if background.has_contrast() {
        let field = background.solve_point_source(y_prime)?;
        value += background.flux_correction(x_prime, &field)?;
    }
    Ok(value)
}

fn multiplier_quad_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-12,
        rel_tol: 1e-11,
        ..QuadratureSpec::default()
    }
}

/// Vacuum trace-to-flux map applied to a width-`w` Gaussian, evaluated at
/// offset `tau` from its centre, via the symbol `-gamma` on the line.
///
/// The finite-part singularity of the position-space kernel never appears:
/// the Gaussian transform damps the frequency integral, which is split at
/// the branch point and truncated where the transform has decayed below
/// roundoff.
pub(crate) fn vacuum_dtn_gaussian_action(
    tau: f64,
    width: f64,
    medium: &MediumSpec,
) -> Result<Complex64, MapsError> {
    let k = medium.wavenumber();
    let spec = multiplier_quad_spec();
    let hat = |xi: f64| width * (2.0 * PI).sqrt() * (-0.5 * width * width * xi * xi).exp();
    let integrand = |xi: f64| -branch_sqrt(xi, k) * hat(xi) * (xi * tau).cos();
    let cut = k + 12.0 / width;
    let travelling = integrate_adaptive(integrand, 0.0, k, &spec)?;
    let evanescent = integrate_adaptive(integrand, k, cut, &spec)?;
    Ok((travelling.value + evanescent.value) / PI)
}

/// Raw trace-to-flux columns `(Lambda phi_j)(x_i)` on a line basis:
/// vacuum multiplier action plus the Dirichlet-pathway correction.
pub(crate) fn line_dtn_columns(
    basis: &OperatorBasis,
    potential: &PotentialGrid,
    medium: &MediumSpec,
) -> Result<ComplexMatrix, MapsError> {
    let n = basis.node_count();
    let background = DirichletBackground::new(potential, medium)?;
    let mut raw = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let center = basis.nodes()[j];
        let field = if background.has_contrast() {
            let reach = 9.0 * basis.width();
            Some(background.solve_smooth_data(center - reach, center + reach, &|t| {
                Complex64::new(basis.basis_value(t - center), 0.0)
            })?)
        } else {
            None
        };
        for i in 0..n {
            let mut v =
                vacuum_dtn_gaussian_action(basis.nodes()[i] - center, basis.width(), medium)?;
            if let Some(u) = &field {
                v += background.flux_correction(basis.nodes()[i], u)?;
            }
            raw.set(i, j, v);
        }
    }
    Ok(raw)
}
