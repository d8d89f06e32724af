//! Dense Nystrom assembly of the volume integral equation.

use std::collections::HashMap;

use super::grid::PotentialGrid;
use super::selfcell::free_cell_integral;
use super::ForwardError;
use crate::green_kernel::{
    free_kernel, reflected_integral, Dim, KernelDeriv, KernelError, MediumSpec, ReflPart,
    SpectralKernelParams,
};
use crate::numerics::ComplexMatrix;
use num_complex::Complex64;

/// Hard cap on dense system storage (2 GiB of complex entries); checked
/// before any allocation happens.
pub const SYSTEM_MEMORY_CAP_BYTES: u128 = 2 * 1024 * 1024 * 1024;

/// Kernel values memoised on exact coordinate bit patterns.
///
/// On lattice geometries (grids, commensurate boundary spacings) the number
/// of distinct (rho, sigma) pairs is tiny compared to the number of point
/// pairs, so each quadrature runs once. Arbitrary geometries stay correct
/// and simply miss the cache.
pub(crate) struct KernelMemo {
    free: HashMap<u64, Complex64>,
    reflected: HashMap<(u64, u64), Complex64>,
    d_sigma: HashMap<(u64, u64), Complex64>,
}

impl KernelMemo {
    pub(crate) fn new() -> Self {
        Self {
            free: HashMap::new(),
            reflected: HashMap::new(),
            d_sigma: HashMap::new(),
        }
    }

    /// Free-space kernel at a pair distance.
    pub(crate) fn free_at(&mut self, dist: f64, medium: &MediumSpec) -> Result<Complex64, KernelError> {
        if let Some(&v) = self.free.get(&dist.to_bits()) {
            return Ok(v);
        }
        let v = free_kernel(dist, medium)?;
        self.free.insert(dist.to_bits(), v);
        Ok(v)
    }

    /// Mirror image plus impedance correction for a pair with transverse
    /// separation `rho` and height sum `sigma`.
    pub(crate) fn reflected_at(
        &mut self,
        rho: f64,
        sigma: f64,
        medium: &MediumSpec,
        params: &SpectralKernelParams,
    ) -> Result<Complex64, KernelError> {
        let key = (rho.to_bits(), sigma.to_bits());
        if let Some(&v) = self.reflected.get(&key) {
            return Ok(v);
        }
        let image = free_kernel(rho.hypot(sigma), medium)?;
        let corr = reflected_integral(
            rho,
            sigma,
            medium,
            params,
            ReflPart::CorrectionOnly,
            KernelDeriv::Value,
        )?;
        let v = image + corr.value;
        self.reflected.insert(key, v);
        Ok(v)
    }

    /// Sigma derivative of the impedance correction alone; on the boundary
    /// this is the whole normal derivative of the kernel, because the free
    /// and image parts cancel there.
    pub(crate) fn correction_d_sigma_at(
        &mut self,
        rho: f64,
        sigma: f64,
        medium: &MediumSpec,
        params: &SpectralKernelParams,
    ) -> Result<Complex64, KernelError> {
        let key = (rho.to_bits(), sigma.to_bits());
        if let Some(&v) = self.d_sigma.get(&key) {
            return Ok(v);
        }
        let v = reflected_integral(
            rho,
            sigma,
            medium,
            params,
            ReflPart::CorrectionOnly,
            KernelDeriv::DSigma,
        )?
        .value;
        self.d_sigma.insert(key, v);
        Ok(v)
    }
}

/// Assembled dense system `A = I - Q` of the volume integral equation.
pub struct LsSystem {
    cell_count: usize,
    matrix: ComplexMatrix,
}

impl LsSystem {
    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Assemble `A = I - Q` with `Q[i][j] = w_j G(x_i, y_j) V_j` and a
/// singularity-corrected diagonal: the free-kernel part of the self entry is
/// integrated exactly over the cell, the smooth reflected part is taken at
/// the centre.
pub fn assemble_ls_system(
    potential: &PotentialGrid,
    medium: &MediumSpec,
    params: &SpectralKernelParams,
) -> Result<LsSystem, ForwardError> {
    if potential.dim() != medium.dim() {
        return Err(ForwardError::InvalidGrid(
            "potential grid and medium dimensions differ".into(),
        ));
    }
    let n = potential.cell_count();
    let bytes = (n as u128) * (n as u128) * std::mem::size_of::<Complex64>() as u128;
    if bytes > SYSTEM_MEMORY_CAP_BYTES {
        return Err(ForwardError::SystemTooLarge {
            cells: n,
            bytes_required: bytes,
            limit: SYSTEM_MEMORY_CAP_BYTES,
        });
    }

    let contrast = potential.contrast(medium);
    let vol = potential.cell_volume();
    let h = potential.spacing();
    let depth_axis = medium.dim().ambient() - 1;
    let centers: Vec<[usize; 3]> = (0..n).map(|i| potential.cell_index(i)).collect();
    let depth_of = |idx: &[usize; 3]| -> f64 {
        potential.box_min()[depth_axis] + (idx[depth_axis] as f64 + 0.5) * h
    };

    let free_cell = free_cell_integral(medium, h)?;
    let mut memo = KernelMemo::new();
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        a.set(i, i, Complex64::new(1.0, 0.0));
    }

    for i in 0..n {
        let xi = &centers[i];
        let x_d = depth_of(xi);
        for j in i..n {
            // Entire column is an identity column when V_j = 0, and the
            // kernel is symmetric, so both triangles fill from one pair.
            let vj = contrast[j];
            let vi = contrast[i];
            if vj == Complex64::new(0.0, 0.0) && vi == Complex64::new(0.0, 0.0) {
                continue;
            }
            let yj = &centers[j];
            let y_d = depth_of(yj);
            let sigma = x_d + y_d;
            let rho = match medium.dim() {
                Dim::Two => h * (xi[0] as f64 - yj[0] as f64).abs(),
                Dim::Three => {
                    let d1 = xi[0] as f64 - yj[0] as f64;
                    let d2 = xi[1] as f64 - yj[1] as f64;
                    h * (d1 * d1 + d2 * d2).sqrt()
                }
            };
            let g = if i == j {
                free_cell / vol + memo.reflected_at(0.0, sigma, medium, params)?
            } else {
                let dz = x_d - y_d;
                memo.free_at(rho.hypot(dz), medium)?
                    + memo.reflected_at(rho, sigma, medium, params)?
            };
            let base = vol * g;
            if vj != Complex64::new(0.0, 0.0) {
                let delta = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                a.set(i, j, delta - base * vj);
            }
            if i != j && vi != Complex64::new(0.0, 0.0) {
                a.set(j, i, -base * vi);
            }
        }
    }

    Ok(LsSystem {
        cell_count: n,
        matrix: a,
    })
}
