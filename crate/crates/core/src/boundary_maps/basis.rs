//! Node sets and Gaussian collocation bases for boundary operators.

use super::MapsError;
use crate::forward_solver::BoundarySamples;
use crate::numerics::ComplexMatrix;
use num_complex::Complex64;

/// How the one-dimensional boundary is realized.
///
/// The circle compactifies the boundary to period `2L`, so assembled
/// operators have no window edges and the operator identities can be checked
/// at quadrature precision. The line keeps the physical unbounded boundary,
/// truncated at `[-L, L]`; it is the only geometry that supports a nonzero
/// potential, and its identity residuals carry the truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryGeometry {
    Circle,
    Line,
}

/// Common node grid and Gaussian basis for all boundary operators.
///
/// Basis functions are Gaussians of width twice the node spacing, one per
/// node (wrapped around the period for the circle geometry): narrow enough
/// to resolve the half-Nyquist band, wide enough that the collocation
/// matrix stays invertible.
pub struct OperatorBasis {
    geometry: BoundaryGeometry,
    half_span: f64,
    spacing: f64,
    width: f64,
    nodes: Vec<f64>,
    interp_inv: ComplexMatrix,
}

/// Wrapped images kept when evaluating a circle basis function.
const WRAP_IMAGES: i32 = 3;

/// Fraction of the Nyquist range kept by [`OperatorBasis::band_projector`].
const BAND_FRACTION: f64 = 0.25;

impl OperatorBasis {
    /// Basis on the `2L`-periodic circle with `n` equispaced nodes.
    pub fn circle(half_period: f64, node_count: usize) -> Result<Self, MapsError> {
        Self::build(BoundaryGeometry::Circle, half_period, node_count)
    }

    /// Basis on the truncated line `[-L, L]` with `n` midpoint nodes.
    pub fn line(half_span: f64, node_count: usize) -> Result<Self, MapsError> {
        Self::build(BoundaryGeometry::Line, half_span, node_count)
    }

    fn build(
        geometry: BoundaryGeometry,
        half_span: f64,
        node_count: usize,
    ) -> Result<Self, MapsError> {
        if !(half_span > 0.0) || !half_span.is_finite() {
            return Err(MapsError::InvalidBasis(format!(
                "half span must be positive and finite, got {half_span}"
            )));
        }
        if node_count < 8 || node_count % 2 != 0 {
            return Err(MapsError::InvalidBasis(format!(
                "need an even node count of at least 8, got {node_count}"
            )));
        }
        let spacing = 2.0 * half_span / node_count as f64;
        let width = 2.0 * spacing;
        let nodes: Vec<f64> = (0..node_count)
            .map(|j| -half_span + (j as f64 + 0.5) * spacing)
            .collect();
        let mut basis = Self {
            geometry,
            half_span,
            spacing,
            width,
            nodes,
            interp_inv: ComplexMatrix::zeros(0, 0),
        };
        let b = ComplexMatrix::from_fn(node_count, node_count, |i, j| {
            Complex64::new(basis.basis_value(basis.nodes[i] - basis.nodes[j]), 0.0)
        });
        let lu = b.factorize();
        let mut inv = ComplexMatrix::zeros(node_count, node_count);
        let mut e = vec![Complex64::new(0.0, 0.0); node_count];
        for j in 0..node_count {
            e[j] = Complex64::new(1.0, 0.0);
            let col = lu.solve(&e)?;
            for (i, v) in col.into_iter().enumerate() {
                inv.set(i, j, v);
            }
            e[j] = Complex64::new(0.0, 0.0);
        }
        basis.interp_inv = inv;
        Ok(basis)
    }

    pub fn geometry(&self) -> BoundaryGeometry {
        self.geometry
    }

    pub fn half_span(&self) -> f64 {
        self.half_span
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Gaussian width of the basis functions (twice the node spacing).
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Basis function centred at the origin, evaluated at offset `t`
    /// (wrapped over the period for the circle geometry).
    pub fn basis_value(&self, t: f64) -> f64 {
        let g = |s: f64| (-s * s / (2.0 * self.width * self.width)).exp();
        match self.geometry {
            BoundaryGeometry::Line => g(t),
            BoundaryGeometry::Circle => {
                let period = 2.0 * self.half_span;
                (-WRAP_IMAGES..=WRAP_IMAGES)
                    .map(|p| g(t + period * p as f64))
                    .sum()
            }
        }
    }

    /// The `j`-th basis function sampled on the node grid, packaged as
    /// boundary data for the forward solver.
    pub fn data_element(&self, j: usize) -> Result<BoundarySamples, MapsError> {
        if j >= self.node_count() {
            return Err(MapsError::InvalidBasis(format!(
                "basis index {j} out of range for {} nodes",
                self.node_count()
            )));
        }
        let mut f = BoundarySamples::midpoint_line(self.half_span, self.node_count(), 1.0)?;
        let center = self.nodes[j];
        f.fill_with(|t| Complex64::new(self.basis_value(t[0] - center), 0.0));
        Ok(f)
    }

    /// All basis functions as a list of boundary data vectors.
    pub fn elements(&self) -> Result<Vec<BoundarySamples>, MapsError> {
        (0..self.node_count()).map(|j| self.data_element(j)).collect()
    }

    /// Coefficients of the basis expansion interpolating the given node
    /// values.
    pub fn node_values_to_coefficients(
        &self,
        values: &[Complex64],
    ) -> Result<Vec<Complex64>, MapsError> {
        Ok(self.interp_inv.mul_vec(values)?)
    }

    /// Convert raw columns `(A phi_j)(x_i)` into a node-value map by
    /// composing with basis interpolation.
    pub(crate) fn columns_to_node_map(
        &self,
        raw: &ComplexMatrix,
    ) -> Result<ComplexMatrix, MapsError> {
        Ok(raw.matmul(&self.interp_inv)?)
    }

    /// Orthogonal projector onto the discrete modes in the lower quarter of
    /// the grid's frequency range (half of Nyquist), as a dense real
    /// symmetric matrix.
    ///
    /// Operator identities hold on smooth data; the projector removes grid
    /// modes that exist only as discretization artifacts before residual
    /// norms are taken.
    pub fn band_projector(&self) -> ComplexMatrix {
        let n = self.node_count();
        let m_cut = (n as f64 * BAND_FRACTION) as i64;
        ComplexMatrix::from_fn(n, n, |i, j| {
            let d = i as i64 - j as i64;
            Complex64::new(dirichlet_kernel(d, n as i64, m_cut), 0.0)
        })
    }

    /// Number of modes kept by [`Self::band_projector`].
    pub fn band_dimension(&self) -> usize {
        2 * (self.node_count() as f64 * BAND_FRACTION) as usize + 1
    }
}

/// `(1/n) sum_{|m| <= M} e^{2 pi i m d / n}`, the projector entry at offset
/// `d`.
fn dirichlet_kernel(d: i64, n: i64, m_cut: i64) -> f64 {
    if d.rem_euclid(n) == 0 {
        return (2 * m_cut + 1) as f64 / n as f64;
    }
    let x = std::f64::consts::PI * d as f64 / n as f64;
    ((2 * m_cut + 1) as f64 * x).sin() / (n as f64 * x.sin())
}
