//! Assembly of the complex-phase solution pair as conjugated Neumann series.

use super::grid::ComplexPlaneGrid;
use super::transforms::{
    cauchy_transform_z, cauchy_transform_zbar, conjugated_smoother, phase_square, SmootherVariant,
};
use super::CgoError;
use crate::forward_solver::PotentialGrid;
use num_complex::Complex64;

/// Default series length cap.
const DEFAULT_TERM_CAP: usize = 16;
/// Default stopping tolerance, relative to the first correction term.
const DEFAULT_TERM_TOL: f64 = 1e-8;

/// Parameters of the complex phase and of the series truncation.
///
/// The phase is `Phi(z) = (z - center)^2` scaled by `tau`; larger `tau`
/// makes the series contract faster at the price of steeper growth of the
/// assembled solutions. The constants `beta1` and `beta2` shift the first
/// correction of each series; they drop out of the equations (only their
/// derivative enters) but change the solution within the admissible family,
/// so they are exposed rather than hidden. Zero is the neutral choice.
#[derive(Debug, Clone)]
pub struct CgoConfig {
    /// Phase parameter, strictly positive.
    pub tau: f64,
    /// Phase centre; must lie strictly inside the potential rectangle.
    pub center: Complex64,
    /// Constant shifted off the first term of the first series.
    pub beta1: Complex64,
    /// Constant shifted off the first term of the second series.
    pub beta2: Complex64,
    /// Hard cap on the number of correction terms, at least one.
    pub j_max: usize,
    /// Stop once a term's sup norm falls below this fraction of the first
    /// correction's sup norm.
    pub term_tol: f64,
}

impl CgoConfig {
    /// Neutral configuration: zero shifts, sixteen-term cap, `1e-8` relative
    /// stopping tolerance.
    pub fn new(tau: f64, center: Complex64) -> Self {
        Self {
            tau,
            center,
            beta1: Complex64::new(0.0, 0.0),
            beta2: Complex64::new(0.0, 0.0),
            j_max: DEFAULT_TERM_CAP,
            term_tol: DEFAULT_TERM_TOL,
        }
    }

    /// The same configuration at a different phase parameter.
    pub fn with_tau(&self, tau: f64) -> Self {
        Self {
            tau,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<(), CgoError> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(CgoError::InvalidConfig(format!(
                "phase parameter must be positive and finite, got {}",
                self.tau
            )));
        }
        if !self.center.re.is_finite() || !self.center.im.is_finite() {
            return Err(CgoError::InvalidConfig("phase centre must be finite".into()));
        }
        if self.j_max == 0 {
            return Err(CgoError::InvalidConfig(
                "the series needs at least one correction term".into(),
            ));
        }
        if !(self.term_tol > 0.0) || !self.term_tol.is_finite() {
            return Err(CgoError::InvalidConfig(format!(
                "stopping tolerance must be positive and finite, got {}",
                self.term_tol
            )));
        }
        for (name, value) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(CgoError::InvalidConfig(format!("{name} must be finite")));
            }
        }
        Ok(())
    }
}

/// Which half of the solution pair a series assembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// Assembled with phase `exp(tau Phi)`; solves the first potential's
    /// equation.
    First,
    /// Assembled with phase `exp(-tau conj Phi)`; the partner weighted
    /// against the first in the probes.
    Second,
}

impl SeriesKind {
    /// The growth factor multiplying the series at a point.
    pub fn phase_at(self, z: Complex64, tau: f64, center: Complex64) -> Complex64 {
        match self {
            SeriesKind::First => (tau * phase_square(z, center)).exp(),
            SeriesKind::Second => (-tau * phase_square(z, center).conj()).exp(),
        }
    }
}

/// One assembled complex-phase solution: the correction terms, their
/// contraction history, and the solution field itself.
#[derive(Debug, Clone)]
pub struct CgoSeries {
    kind: SeriesKind,
    tau: f64,
    center: Complex64,
    terms: Vec<Vec<Complex64>>,
    amplitude: Vec<Complex64>,
    solution: Vec<Complex64>,
    contraction_ratios: Vec<f64>,
    truncation_bound: f64,
}

impl CgoSeries {
    /// Which half of the pair this is.
    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    /// Phase parameter the series was built at.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Phase centre.
    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// The series terms, starting with the constant one.
    pub fn terms(&self) -> &[Vec<Complex64>] {
        &self.terms
    }

    /// Number of stored terms including the constant one.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Alternating sum of the terms: the solution divided by its phase.
    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    /// The assembled solution field on the grid cells.
    pub fn solution(&self) -> &[Complex64] {
        &self.solution
    }

    /// Sup-norm ratios of consecutive terms, `|term_{j+1}| / |term_j|`.
    pub fn contraction_ratios(&self) -> &[f64] {
        &self.contraction_ratios
    }

    /// Geometric bound `|last term| / (1 - last ratio)` on the dropped tail.
    pub fn truncation_bound(&self) -> f64 {
        self.truncation_bound
    }
}

/// Build the solution pair `(v_1, v_2)` for two potentials on one grid.
///
/// The stored cell values of each grid are the potentials entering the two
/// equations. The first series applies the smoothing operator to
/// `(1/2) dzbar^{-1}(q_1 U_{j-1})` at parameter `tau`; the second applies
/// its partner to `dz^{-1}(q_2 V_{j-1})` at the reflected parameter. Both
/// start from the constant term, subtract the corresponding shift constant
/// from the first correction, and stop at the configured tolerance or cap.
///
/// Zero potentials with zero shifts reproduce the bare exponentials exactly.
/// A term ratio at or above one from the second correction onwards aborts
/// with [`CgoError::NonContraction`]; the remedy is a larger `tau`.
pub fn build_cgo_pair(
    q1: &PotentialGrid,
    q2: &PotentialGrid,
    config: &CgoConfig,
) -> Result<(CgoSeries, CgoSeries), CgoError> {
    config.validate()?;
    let grid = ComplexPlaneGrid::from_potential_grid(q1)?;
    grid.matches(q2)?;
    if !grid.contains(config.center) {
        return Err(CgoError::InvalidConfig(format!(
            "phase centre {} lies outside the potential rectangle [{}, {}] x [{}, {}]",
            config.center,
            grid.box_min().re,
            grid.box_max().re,
            grid.box_min().im,
            grid.box_max().im,
        )));
    }
    let first = run_series(&grid, q1.q_values(), config, SeriesKind::First)?;
    let second = run_series(&grid, q2.q_values(), config, SeriesKind::Second)?;
    Ok((first, second))
}

fn run_series(
    grid: &ComplexPlaneGrid,
    q: &[Complex64],
    config: &CgoConfig,
    kind: SeriesKind,
) -> Result<CgoSeries, CgoError> {
    let (variant, tau_signed, scale, beta) = match kind {
        SeriesKind::First => (SmootherVariant::RTilde, config.tau, 0.5, config.beta1),
        SeriesKind::Second => (SmootherVariant::R, -config.tau, 1.0, config.beta2),
    };
    let inner: fn(&ComplexPlaneGrid, &[Complex64]) -> Vec<Complex64> = match kind {
        SeriesKind::First => cauchy_transform_zbar,
        SeriesKind::Second => cauchy_transform_z,
    };
    let cells = grid.cell_count();
    let mut terms = vec![vec![Complex64::new(1.0, 0.0); cells]];
    let mut ratios = Vec::new();
    let mut prev_norm = 1.0f64;
    let mut first_norm = f64::NAN;
    loop {
        let j = terms.len();
        let prev = terms.last().expect("the constant term is always present");
        let source: Vec<Complex64> = q.iter().zip(prev).map(|(a, b)| a * b).collect();
        let mut integrated = inner(grid, &source);
        if j == 1 {
            for value in &mut integrated {
                *value -= beta;
            }
        }
        for value in &mut integrated {
            *value *= scale;
        }
        let term = conjugated_smoother(grid, &integrated, tau_signed, config, variant);
        let norm = max_abs(&term);
        let ratio = if prev_norm > 0.0 { norm / prev_norm } else { 0.0 };
        ratios.push(ratio);
        terms.push(term);
        if j >= 2 && ratio >= 1.0 {
            return Err(CgoError::NonContraction {
                tau: config.tau,
                term: j,
                ratio,
            });
        }
        if j == 1 {
            first_norm = norm;
        }
        if norm <= config.term_tol * first_norm || j == config.j_max {
            let bound = if ratio < 1.0 {
                norm / (1.0 - ratio)
            } else {
                f64::INFINITY
            };
            let mut amplitude = vec![Complex64::new(0.0, 0.0); cells];
            for (index, term) in terms.iter().enumerate() {
                let sign = if index % 2 == 0 { 1.0 } else { -1.0 };
                for (out, value) in amplitude.iter_mut().zip(term) {
                    *out += sign * value;
                }
            }
            let solution: Vec<Complex64> = amplitude
                .iter()
                .zip(grid.centers())
                .map(|(a, &z)| a * kind.phase_at(z, config.tau, config.center))
                .collect();
            return Ok(CgoSeries {
                kind,
                tau: config.tau,
                center: config.center,
                terms,
                amplitude,
                solution,
                contraction_ratios: ratios,
                truncation_bound: bound,
            });
        }
        prev_norm = norm;
    }
}

fn max_abs(values: &[Complex64]) -> f64 {
    values.iter().fold(0.0f64, |acc, v| acc.max(v.norm()))
}
