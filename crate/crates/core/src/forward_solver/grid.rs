//! Potential grids and cell-centred volume fields.

use super::ForwardError;
use crate::green_kernel::{Dim, HalfSpacePoint, MediumSpec};
use num_complex::Complex64;

/// One axis-aligned box of a piecewise-constant contrast.
#[derive(Debug, Clone)]
pub struct PotentialPiece {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub amplitude: Complex64,
}

/// Closed-form scattering contrasts `V(x)`.
///
/// Grids built from a recipe keep the exact off-grid values available, which
/// is what refinement studies compare against.
#[derive(Debug, Clone)]
pub enum PotentialRecipe {
    /// Smooth compactly supported bump `A exp(1 - 1/(1 - s^2))` with
    /// `s = |x - center|/radius`, zero outside the ball.
    Bump {
        center: Vec<f64>,
        radius: f64,
        amplitude: Complex64,
    },
    /// Constant `A` between two radii about a centre, zero elsewhere.
    Annulus {
        center: Vec<f64>,
        inner_radius: f64,
        outer_radius: f64,
        amplitude: Complex64,
    },
    /// Union of axis-aligned boxes; later pieces override earlier ones.
    PiecewiseConstant { pieces: Vec<PotentialPiece> },
}

impl PotentialRecipe {
    /// Exact contrast value at an arbitrary point (coordinates in ambient
    /// order, depth last).
    pub fn contrast_at(&self, x: &[f64]) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            PotentialRecipe::Bump {
                center,
                radius,
                amplitude,
            } => {
                let s2 = dist_sq(x, center) / (radius * radius);
                if s2 < 1.0 {
                    amplitude * (1.0 - 1.0 / (1.0 - s2)).exp()
                } else {
                    zero
                }
            }
            PotentialRecipe::Annulus {
                center,
                inner_radius,
                outer_radius,
                amplitude,
            } => {
                let r = dist_sq(x, center).sqrt();
                if r >= *inner_radius && r <= *outer_radius {
                    *amplitude
                } else {
                    zero
                }
            }
            PotentialRecipe::PiecewiseConstant { pieces } => {
                let mut value = zero;
                for piece in pieces {
                    let inside = x
                        .iter()
                        .zip(piece.min.iter().zip(piece.max.iter()))
                        .all(|(&c, (&lo, &hi))| c >= lo && c <= hi);
                    if inside {
                        value = piece.amplitude;
                    }
                }
                value
            }
        }
    }
}

fn dist_sq(x: &[f64], c: &[f64]) -> f64 {
    x.iter()
        .zip(c.iter())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum()
}

/// Uniform Cartesian cell grid carrying the potential `q`.
///
/// The box is strictly inside the half-space: its lower depth face sits at
/// least one cell above the boundary, so every kernel evaluation between a
/// cell centre and the boundary is regular. Cells are indexed with the first
/// transverse axis fastest and depth slowest.
#[derive(Debug, Clone)]
pub struct PotentialGrid {
    dim: Dim,
    min: Vec<f64>,
    shape: Vec<usize>,
    spacing: f64,
    q: Vec<Complex64>,
    omega_mask: Vec<bool>,
}

impl PotentialGrid {
    /// Build from explicit per-cell values of `q`.
    ///
    /// Rejects `Im q < 0` anywhere: the uniqueness argument for the direct
    /// problem needs a non-negative absorption sign.
    pub fn from_values(
        dim: Dim,
        min: &[f64],
        shape: &[usize],
        spacing: f64,
        q: Vec<Complex64>,
    ) -> Result<Self, ForwardError> {
        let d = dim.ambient();
        if min.len() != d || shape.len() != d {
            return Err(ForwardError::InvalidGrid(format!(
                "expected {d} box coordinates and {d} cell counts, got {} and {}",
                min.len(),
                shape.len()
            )));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(ForwardError::InvalidGrid(format!(
                "cell spacing must be positive and finite, got {spacing}"
            )));
        }
        if shape.iter().any(|&n| n == 0) {
            return Err(ForwardError::InvalidGrid(
                "every axis needs at least one cell".into(),
            ));
        }
        if min.iter().any(|m| !m.is_finite()) {
            return Err(ForwardError::InvalidGrid("box coordinates must be finite".into()));
        }
        if min[d - 1] < spacing {
            return Err(ForwardError::InvalidGrid(format!(
                "box must start at least one cell above the boundary: min depth {} < spacing {spacing}",
                min[d - 1]
            )));
        }
        let cells: usize = shape.iter().product();
        if q.len() != cells {
            return Err(ForwardError::InvalidGrid(format!(
                "potential has {} values for {cells} cells",
                q.len()
            )));
        }
        for (cell, &value) in q.iter().enumerate() {
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(ForwardError::InvalidGrid(format!(
                    "potential value at cell {cell} is not finite"
                )));
            }
            if value.im < 0.0 {
                return Err(ForwardError::NegativeAbsorption { cell, value });
            }
        }
        let omega_mask = q.iter().map(|v| v.im > 0.0).collect();
        Ok(Self {
            dim,
            min: min.to_vec(),
            shape: shape.to_vec(),
            spacing,
            q,
            omega_mask,
        })
    }

    /// Build `q = k^2 + V` by sampling a contrast recipe at cell centres.
    pub fn from_recipe(
        min: &[f64],
        shape: &[usize],
        spacing: f64,
        recipe: &PotentialRecipe,
        medium: &MediumSpec,
    ) -> Result<Self, ForwardError> {
        let dim = medium.dim();
        let k2 = medium.wavenumber() * medium.wavenumber();
        let d = dim.ambient();
        if min.len() != d || shape.len() != d {
            return Err(ForwardError::InvalidGrid(format!(
                "expected {d} box coordinates and {d} cell counts, got {} and {}",
                min.len(),
                shape.len()
            )));
        }
        let cells: usize = shape.iter().product();
        let mut q = Vec::with_capacity(cells);
        let mut center = vec![0.0f64; d];
        for flat in 0..cells {
            fill_center(flat, min, shape, spacing, &mut center);
            q.push(Complex64::new(k2, 0.0) + recipe.contrast_at(&center));
        }
        Self::from_values(dim, min, shape, spacing, q)
    }

    /// Homogeneous grid `q = k^2` (zero contrast).
    pub fn vacuum(
        min: &[f64],
        shape: &[usize],
        spacing: f64,
        medium: &MediumSpec,
    ) -> Result<Self, ForwardError> {
        let cells: usize = shape.iter().product();
        let k2 = medium.wavenumber() * medium.wavenumber();
        Self::from_values(
            medium.dim(),
            min,
            shape,
            spacing,
            vec![Complex64::new(k2, 0.0); cells],
        )
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn box_min(&self) -> &[f64] {
        &self.min
    }

    pub fn box_max(&self) -> Vec<f64> {
        self.min
            .iter()
            .zip(self.shape.iter())
            .map(|(&m, &n)| m + n as f64 * self.spacing)
            .collect()
    }

    pub fn cell_count(&self) -> usize {
        self.q.len()
    }

    /// Cell volume `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim.ambient() as i32)
    }

    pub fn q_values(&self) -> &[Complex64] {
        &self.q
    }

    /// Cells where `Im q > 0` (the absorbing subset).
    pub fn omega_mask(&self) -> &[bool] {
        &self.omega_mask
    }

    /// Contrast `V = q - k^2` per cell.
    pub fn contrast(&self, medium: &MediumSpec) -> Vec<Complex64> {
        let k2 = medium.wavenumber() * medium.wavenumber();
        self.q.iter().map(|&v| v - k2).collect()
    }

    /// Centre coordinates of a cell (ambient order, depth last).
    pub fn cell_center(&self, flat: usize) -> Vec<f64> {
        let mut out = vec![0.0f64; self.dim.ambient()];
        fill_center(flat, &self.min, &self.shape, self.spacing, &mut out);
        out
    }

    /// Cell centre as a half-space point.
    pub fn cell_point(&self, flat: usize) -> HalfSpacePoint {
        let c = self.cell_center(flat);
        match self.dim {
            Dim::Two => HalfSpacePoint::new2(c[0], c[1]),
            Dim::Three => HalfSpacePoint::new3(c[0], c[1], c[2]),
        }
        .expect("cell centres lie strictly inside the half-space")
    }

    /// Multi-index of a flat cell index (unused axes zero).
    pub(crate) fn cell_index(&self, flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        let mut rest = flat;
        for (axis, &n) in self.shape.iter().enumerate() {
            idx[axis] = rest % n;
            rest /= n;
        }
        idx
    }

    /// Nearest cell centre to a point, with the distance to it.
    pub(crate) fn nearest_cell(&self, coords: &[f64]) -> (usize, f64) {
        let mut flat = 0usize;
        let mut stride = 1usize;
        let mut dist_sq = 0.0f64;
        for (axis, &n) in self.shape.iter().enumerate() {
            let rel = (coords[axis] - self.min[axis]) / self.spacing - 0.5;
            let i = rel.round().clamp(0.0, (n - 1) as f64) as usize;
            let center = self.min[axis] + (i as f64 + 0.5) * self.spacing;
            dist_sq += (coords[axis] - center) * (coords[axis] - center);
            flat += stride * i;
            stride *= n;
        }
        (flat, dist_sq.sqrt())
    }

    /// Whether a point lies inside the box inflated by one cell on every
    /// side (the region where midpoint quadrature of the kernel is unsafe).
    pub(crate) fn in_expanded_box(&self, coords: &[f64]) -> bool {
        coords.iter().enumerate().all(|(axis, &c)| {
            let lo = self.min[axis] - self.spacing;
            let hi = self.min[axis] + self.shape[axis] as f64 * self.spacing + self.spacing;
            c >= lo && c <= hi
        })
    }
}

fn fill_center(flat: usize, min: &[f64], shape: &[usize], spacing: f64, out: &mut [f64]) {
    let mut rest = flat;
    for (axis, &n) in shape.iter().enumerate() {
        let i = rest % n;
        rest /= n;
        out[axis] = min[axis] + (i as f64 + 0.5) * spacing;
    }
}

/// Complex field sampled at the cell centres of a grid.
#[derive(Debug, Clone)]
pub struct VolumeField<'a> {
    grid: &'a PotentialGrid,
    values: Vec<Complex64>,
}

impl<'a> VolumeField<'a> {
    pub fn new(grid: &'a PotentialGrid, values: Vec<Complex64>) -> Result<Self, ForwardError> {
        if values.len() != grid.cell_count() {
            return Err(ForwardError::InvalidGrid(format!(
                "field has {} values for {} cells",
                values.len(),
                grid.cell_count()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &'a PotentialGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Discrete L2 norm `(h^d sum |v|^2)^{1/2}`.
    pub fn norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (self.grid.cell_volume() * sum).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}
