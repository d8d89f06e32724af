//! Quadrature sampling of boundary data on the plane `x_d = 0`.

use super::ForwardError;
use crate::green_kernel::{Dim, HalfSpacePoint};
use num_complex::Complex64;

/// Midpoint samples of a boundary function inside a truncation radius.
///
/// Nodes live on the boundary plane; only transverse coordinates are stored.
/// The weight of a node is the measure of its cell, so sums
/// `sum_j w_j g(y_j) v_j` approximate boundary integrals. `delta_exponent`
/// is the decay power of the weighted norms used to compare boundary data;
/// it must exceed 1/2 for those norms to control the admissible data class.
#[derive(Debug, Clone)]
pub struct BoundarySamples {
    dim: Dim,
    nodes: Vec<[f64; 2]>,
    weights: Vec<f64>,
    values: Vec<Complex64>,
    delta_exponent: f64,
    truncation_radius: f64,
}

impl BoundarySamples {
    fn validate_common(half_span: f64, n: usize, delta_exponent: f64) -> Result<(), ForwardError> {
        if !(half_span > 0.0) || !half_span.is_finite() {
            return Err(ForwardError::InvalidBoundary(format!(
                "truncation radius must be positive and finite, got {half_span}"
            )));
        }
        if n == 0 {
            return Err(ForwardError::InvalidBoundary(
                "at least one boundary node is required".into(),
            ));
        }
        if !(delta_exponent > 0.5) {
            return Err(ForwardError::InvalidBoundary(format!(
                "weight exponent must exceed 1/2, got {delta_exponent}"
            )));
        }
        Ok(())
    }

    /// Midpoint nodes on `[-L, L]` for the two-dimensional problem.
    pub fn midpoint_line(
        half_span: f64,
        n: usize,
        delta_exponent: f64,
    ) -> Result<Self, ForwardError> {
        Self::validate_common(half_span, n, delta_exponent)?;
        let h = 2.0 * half_span / n as f64;
        let nodes = (0..n)
            .map(|j| [-half_span + (j as f64 + 0.5) * h, 0.0])
            .collect();
        Ok(Self {
            dim: Dim::Two,
            nodes,
            weights: vec![h; n],
            values: vec![Complex64::new(0.0, 0.0); n],
            delta_exponent,
            truncation_radius: half_span,
        })
    }

    /// Midpoint nodes on the square `[-L, L]^2` for the three-dimensional
    /// problem, `n` nodes per axis.
    pub fn midpoint_plane(
        half_span: f64,
        n: usize,
        delta_exponent: f64,
    ) -> Result<Self, ForwardError> {
        Self::validate_common(half_span, n, delta_exponent)?;
        let h = 2.0 * half_span / n as f64;
        let mut nodes = Vec::with_capacity(n * n);
        for j2 in 0..n {
            for j1 in 0..n {
                nodes.push([
                    -half_span + (j1 as f64 + 0.5) * h,
                    -half_span + (j2 as f64 + 0.5) * h,
                ]);
            }
        }
        Ok(Self {
            dim: Dim::Three,
            nodes,
            weights: vec![h * h; n * n],
            values: vec![Complex64::new(0.0, 0.0); n * n],
            delta_exponent,
            truncation_radius: half_span,
        })
    }

    /// Set the values by evaluating a function of the transverse coordinates.
    pub fn fill_with(&mut self, mut f: impl FnMut(&[f64]) -> Complex64) {
        let t = self.dim.transverse();
        for (node, value) in self.nodes.iter().zip(self.values.iter_mut()) {
            *value = f(&node[..t]);
        }
    }

    /// Replace the stored values.
    pub fn set_values(&mut self, values: Vec<Complex64>) -> Result<(), ForwardError> {
        if values.len() != self.nodes.len() {
            return Err(ForwardError::InvalidBoundary(format!(
                "{} values for {} nodes",
                values.len(),
                self.nodes.len()
            )));
        }
        self.values = values;
        Ok(())
    }

    /// Same nodes and weights, different values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self, ForwardError> {
        let mut out = self.clone();
        out.set_values(values)?;
        Ok(out)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Transverse coordinates of a node (one entry in d=2, two in d=3).
    pub fn node_transverse(&self, j: usize) -> &[f64] {
        &self.nodes[j][..self.dim.transverse()]
    }

    /// Node as a half-space point at height zero.
    pub fn node_point(&self, j: usize) -> HalfSpacePoint {
        let node = &self.nodes[j];
        match self.dim {
            Dim::Two => HalfSpacePoint::new2(node[0], 0.0),
            Dim::Three => HalfSpacePoint::new3(node[0], node[1], 0.0),
        }
        .expect("boundary nodes are valid half-space points")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn delta_exponent(&self) -> f64 {
        self.delta_exponent
    }

    pub fn truncation_radius(&self) -> f64 {
        self.truncation_radius
    }

    /// Weighted norm `(sum_j w_j (1+|y_j|^2)^{-delta} |v_j|^2)^{1/2}`.
    pub fn weighted_norm(&self) -> f64 {
        let t = self.dim.transverse();
        let sum: f64 = self
            .nodes
            .iter()
            .zip(self.weights.iter().zip(self.values.iter()))
            .map(|(node, (&w, v))| {
                let r2: f64 = node[..t].iter().map(|&c| c * c).sum();
                w * (1.0 + r2).powf(-self.delta_exponent) * v.norm_sqr()
            })
            .sum();
        sum.sqrt()
    }
}
