//! The potential patch viewed as a grid of complex numbers.

use super::CgoError;
use crate::forward_solver::PotentialGrid;
use crate::green_kernel::Dim;
use num_complex::Complex64;

/// Uniform cell grid over the rectangle `B`, with every cell centre read as
/// a point `z = x_1 + i x_2` of the complex plane.
///
/// The grid is always derived from a two-dimensional [`PotentialGrid`], so a
/// potential field indexed by flat cell number lines up with [`centers`]
/// entry by entry. Cells are squares of area `spacing^2`; the first index
/// runs along the real axis.
///
/// [`centers`]: ComplexPlaneGrid::centers
#[derive(Debug, Clone)]
pub struct ComplexPlaneGrid {
    nx: usize,
    ny: usize,
    min: (f64, f64),
    spacing: f64,
    centers: Vec<Complex64>,
}

impl ComplexPlaneGrid {
    /// Read the cell layout of a planar potential grid.
    pub fn from_potential_grid(grid: &PotentialGrid) -> Result<Self, CgoError> {
        if grid.dim() != Dim::Two {
            return Err(CgoError::UnsupportedDimension(grid.dim()));
        }
        let shape = grid.shape();
        let (nx, ny) = (shape[0], shape[1]);
        let spacing = grid.spacing();
        let min = (grid.box_min()[0], grid.box_min()[1]);
        let mut centers = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = min.1 + (j as f64 + 0.5) * spacing;
            for i in 0..nx {
                let x = min.0 + (i as f64 + 0.5) * spacing;
                centers.push(Complex64::new(x, y));
            }
        }
        Ok(Self {
            nx,
            ny,
            min,
            spacing,
            centers,
        })
    }

    /// Confirm that another potential grid has exactly this layout.
    pub fn matches(&self, grid: &PotentialGrid) -> Result<(), CgoError> {
        if grid.dim() != Dim::Two {
            return Err(CgoError::UnsupportedDimension(grid.dim()));
        }
        let same = grid.shape() == [self.nx, self.ny]
            && grid.spacing() == self.spacing
            && grid.box_min() == [self.min.0, self.min.1];
        if same {
            Ok(())
        } else {
            Err(CgoError::GridMismatch(format!(
                "expected {}x{} cells of spacing {} starting at ({}, {}), \
                 got {:?} cells of spacing {} starting at {:?}",
                self.nx,
                self.ny,
                self.spacing,
                self.min.0,
                self.min.1,
                grid.shape(),
                grid.spacing(),
                grid.box_min(),
            )))
        }
    }

    /// Cells along the real axis.
    pub fn nx(&self) -> usize {
        self.nx
    }

    /// Cells along the imaginary axis.
    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Total cell count.
    pub fn cell_count(&self) -> usize {
        self.nx * self.ny
    }

    /// Side length of a cell.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Area of one cell.
    pub fn cell_area(&self) -> f64 {
        self.spacing * self.spacing
    }

    /// Lower-left corner of the rectangle.
    pub fn box_min(&self) -> Complex64 {
        Complex64::new(self.min.0, self.min.1)
    }

    /// Upper-right corner of the rectangle.
    pub fn box_max(&self) -> Complex64 {
        Complex64::new(
            self.min.0 + self.nx as f64 * self.spacing,
            self.min.1 + self.ny as f64 * self.spacing,
        )
    }

    /// Cell centres as complex numbers, flat index with the real axis fastest.
    pub fn centers(&self) -> &[Complex64] {
        &self.centers
    }

    /// Whether a point lies strictly inside the rectangle.
    pub fn contains(&self, z: Complex64) -> bool {
        let max = self.box_max();
        z.re > self.min.0 && z.re < max.re && z.im > self.min.1 && z.im < max.im
    }

    /// Flat index of the cell `(i, j)`.
    pub fn flat(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }
}
