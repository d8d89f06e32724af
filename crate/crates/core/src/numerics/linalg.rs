//! Dense complex linear algebra on top of `faer`.
//!
//! Everything downstream of the quadrature layer works with plain
//! `Complex64` slices; this module owns the conversion into `faer`
//! matrices and exposes just the operations the solvers need: LU
//! factorization with forward/transpose solves, a 2-norm via SVD, and a
//! Hager-style 1-norm condition estimate.

use faer::linalg::solvers::{PartialPivLu, Solve, Svd};
use faer::{c64, Mat};
use num_complex::Complex64;
use thiserror::Error;

/// Errors from dense factorization and solves.
#[derive(Debug, Error)]
pub enum LinalgError {
    /// A solve produced non-finite entries, which for partial-pivot LU
    /// means the matrix is singular to working precision.
    #[error("linear solve produced non-finite values; matrix is singular to working precision")]
    SingularSystem,
    /// The SVD driver failed to converge.
    #[error("singular value decomposition did not converge")]
    SvdFailed,
    /// Shape mismatch between a matrix and a vector operand.
    #[error("dimension mismatch: matrix is {rows}x{cols}, operand has length {operand}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        operand: usize,
    },
}

/// Column-major dense complex matrix.
///
/// Thin newtype over `faer::Mat<c64>` so callers stay in
/// `num_complex::Complex64` (the two element types are identical).
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    inner: Mat<c64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            inner: Mat::zeros(nrows, ncols),
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        Self {
            inner: Mat::identity(n, n),
        }
    }

    /// Build from an entry function `f(row, col)`.
    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            inner: Mat::from_fn(nrows, ncols, |i, j| f(i, j)),
        }
    }

    pub fn nrows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.inner[(row, col)] = value;
    }

    /// Matrix-vector product `A v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if v.len() != self.ncols() {
            return Err(LinalgError::DimensionMismatch {
                rows: self.nrows(),
                cols: self.ncols(),
                operand: v.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.nrows()];
        for j in 0..self.ncols() {
            let vj = v[j];
            if vj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (i, acc) in out.iter_mut().enumerate() {
                *acc += self.inner[(i, j)] * vj;
            }
        }
        Ok(out)
    }

    /// Maximum absolute column sum.
    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if self.ncols() != rhs.nrows() {
            return Err(LinalgError::DimensionMismatch {
                rows: self.nrows(),
                cols: self.ncols(),
                operand: rhs.nrows(),
            });
        }
        Ok(ComplexMatrix {
            inner: &self.inner * &rhs.inner,
        })
    }

    pub fn norm_1(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.ncols() {
            let mut sum = 0.0;
            for i in 0..self.nrows() {
                sum += self.inner[(i, j)].norm();
            }
            best = best.max(sum);
        }
        best
    }

    /// Spectral norm (largest singular value).
    pub fn operator_norm(&self) -> Result<f64, LinalgError> {
        let svd = Svd::new(self.inner.as_ref()).map_err(|_| LinalgError::SvdFailed)?;
        let s = svd.S().column_vector();
        if s.nrows() == 0 {
            return Ok(0.0);
        }
        Ok(s[0].re)
    }

    /// Smallest singular value.
    pub fn smallest_singular_value(&self) -> Result<f64, LinalgError> {
        let svd = Svd::new(self.inner.as_ref()).map_err(|_| LinalgError::SvdFailed)?;
        let s = svd.S().column_vector();
        if s.nrows() == 0 {
            return Ok(0.0);
        }
        Ok(s[s.nrows() - 1].re)
    }

    /// LU factorization with partial pivoting.
    pub fn factorize(&self) -> LuFactors {
        LuFactors {
            lu: PartialPivLu::new(self.inner.as_ref()),
            n: self.nrows(),
        }
    }
}

/// Partial-pivot LU factors of a square matrix.
pub struct LuFactors {
    lu: PartialPivLu<c64>,
    n: usize,
}

impl LuFactors {
    fn check_shape(&self, b: &[Complex64]) -> Result<(), LinalgError> {
        if b.len() != self.n {
            return Err(LinalgError::DimensionMismatch {
                rows: self.n,
                cols: self.n,
                operand: b.len(),
            });
        }
        Ok(())
    }

    fn extract(col: Mat<c64>) -> Result<Vec<Complex64>, LinalgError> {
        let out: Vec<Complex64> = (0..col.nrows()).map(|i| col[(i, 0)]).collect();
        if out.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(out)
        } else {
            Err(LinalgError::SingularSystem)
        }
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        self.check_shape(b)?;
        let rhs = Mat::from_fn(self.n, 1, |i, _| b[i]);
        Self::extract(self.lu.solve(rhs.as_ref()))
    }

    /// Solve `A^T x = b` (plain transpose, no conjugation).
    pub fn solve_transpose(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        self.check_shape(b)?;
        let rhs = Mat::from_fn(self.n, 1, |i, _| b[i]);
        Self::extract(self.lu.solve_transpose(rhs.as_ref()))
    }

    /// Solve `A^H x = b` (conjugate transpose).
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        self.check_shape(b)?;
        let conj_b: Vec<Complex64> = b.iter().map(|z| z.conj()).collect();
        let x = self.solve_transpose(&conj_b)?;
        Ok(x.into_iter().map(|z| z.conj()).collect())
    }
}

fn norm_l1(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

/// Hager-style estimate of the 1-norm condition number `‖A‖₁ ‖A⁻¹‖₁`.
///
/// `‖A⁻¹‖₁` is estimated from a handful of solves with `A` and `A^H`
/// (Higham's complex variant of Hager's algorithm); the result is a
/// lower bound, reliable to within a small factor, intended for
/// diagnostics rather than guarantees.
pub fn condition_estimate(a: &ComplexMatrix, factors: &LuFactors) -> Result<f64, LinalgError> {
    let n = a.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
    let mut estimate = 0.0f64;
    let mut last_pivot = usize::MAX;
    for _ in 0..5 {
        let y = factors.solve(&x)?;
        estimate = norm_l1(&y);
        // Subgradient direction: sign pattern of y, then a solve with A^H.
        let xi: Vec<Complex64> = y
            .iter()
            .map(|z| {
                let r = z.norm();
                if r > 0.0 {
                    z / r
                } else {
                    Complex64::new(1.0, 0.0)
                }
            })
            .collect();
        let z = factors.solve_adjoint(&xi)?;
        let (pivot, z_max) = z
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, 0.0f64), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let z_dot_x: f64 = z
            .iter()
            .zip(&x)
            .map(|(zi, xi)| (zi.conj() * xi).re)
            .sum();
        if z_max <= z_dot_x + 1e-12 * z_max.abs() || pivot == last_pivot {
            break;
        }
        last_pivot = pivot;
        x = vec![Complex64::new(0.0, 0.0); n];
        x[pivot] = Complex64::new(1.0, 0.0);
    }
    Ok(a.norm_1() * estimate)
}
