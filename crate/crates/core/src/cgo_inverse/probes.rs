//! The orthogonality probe and its decay scan over the phase parameter.

use super::grid::ComplexPlaneGrid;
use super::series::{build_cgo_pair, CgoConfig, CgoSeries};
use super::transforms::oscillation;
use super::CgoError;
use crate::forward_solver::PotentialGrid;
use num_complex::Complex64;
use std::fmt;

/// Relative floor below which a scan difference counts as exactly zero.
const ZERO_DIFFERENCE_FLOOR: f64 = 1e-14;

/// The weighted pairing `int_B (q_1 - q_2) v_1 v_2 dA` by cell quadrature.
///
/// For solution pairs of the two potentials this is the quantity that exact
/// boundary-data agreement would force to vanish; numerically it is the
/// probe whose distance from the bare oscillatory integral the scan
/// measures. Equal potentials give an exact zero, and swapping the two
/// potential grids at fixed solution fields flips the sign exactly.
pub fn orthogonality_probe(
    q1: &PotentialGrid,
    q2: &PotentialGrid,
    v1: &CgoSeries,
    v2: &CgoSeries,
) -> Result<Complex64, CgoError> {
    let grid = ComplexPlaneGrid::from_potential_grid(q1)?;
    grid.matches(q2)?;
    for (label, series) in [("first", v1), ("second", v2)] {
        if series.solution().len() != grid.cell_count() {
            return Err(CgoError::GridMismatch(format!(
                "the {label} solution field has {} values for {} cells",
                series.solution().len(),
                grid.cell_count()
            )));
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (((a, b), x), y) in q1
        .q_values()
        .iter()
        .zip(q2.q_values())
        .zip(v1.solution())
        .zip(v2.solution())
    {
        acc += (a - b) * x * y;
    }
    Ok(acc * grid.cell_area())
}

/// The bare oscillatory integral
/// `int_B (q_1 - q_2) e^{tau(conj Phi - Phi)} dA` by cell quadrature.
///
/// This is the stationary-phase leading term of the probe; its magnitude
/// shrinks like `pi |q_1 - q_2|(center) / (2 tau)` once `tau` resolves the
/// potential difference around the phase centre.
pub fn phase_mismatch_integral(
    q1: &PotentialGrid,
    q2: &PotentialGrid,
    config: &CgoConfig,
    tau: f64,
) -> Result<Complex64, CgoError> {
    let grid = ComplexPlaneGrid::from_potential_grid(q1)?;
    grid.matches(q2)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for ((a, b), &z) in q1
        .q_values()
        .iter()
        .zip(q2.q_values())
        .zip(grid.centers())
    {
        // conj Phi - Phi = -2 i Im Phi, the reflected oscillation.
        acc += (a - b) * oscillation(z, config.center, -tau);
    }
    Ok(acc * grid.cell_area())
}

/// Outcome of [`stationary_phase_scan`]: the probe, its leading term, and
/// their distance at every phase parameter, with the fitted decay rate.
#[derive(Debug, Clone)]
pub struct DecayReport {
    /// Phase parameters of the scan, increasing.
    pub taus: Vec<f64>,
    /// Probe value at each parameter.
    pub probes: Vec<Complex64>,
    /// Bare oscillatory integral at each parameter.
    pub leading_terms: Vec<Complex64>,
    /// `|probe - leading|` at each parameter.
    pub differences: Vec<f64>,
    /// Least-squares slope of `log difference` against `log tau`; strictly
    /// below minus one when the probe follows the leading term to first
    /// order.
    pub slope: f64,
    /// Magnitude ratios of consecutive leading terms; near one half per
    /// doubling of the parameter.
    pub leading_ratios: Vec<f64>,
    /// Whether the fitted slope is strictly below minus one.
    pub decays_beyond_leading: bool,
}

impl fmt::Display for DecayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "stationary-phase scan over {} parameters", self.taus.len())?;
        for (index, &tau) in self.taus.iter().enumerate() {
            writeln!(
                f,
                "  tau {:8.2}  probe {:+.6e}{:+.6e}i  leading {:+.6e}{:+.6e}i  distance {:.3e}",
                tau,
                self.probes[index].re,
                self.probes[index].im,
                self.leading_terms[index].re,
                self.leading_terms[index].im,
                self.differences[index],
            )?;
        }
        write!(
            f,
            "  distance slope {:+.3} ({})",
            self.slope,
            if self.decays_beyond_leading {
                "faster than the leading term"
            } else {
                "not resolved beyond the leading term"
            }
        )
    }
}

/// Build the solution pair at each phase parameter and measure how fast the
/// probe approaches its stationary-phase leading term.
///
/// The parameters must be positive and strictly increasing, at least two of
/// them. Contraction failure surfaces at the smallest parameter, where the
/// series is weakest. When every difference sits at the rounding floor (for
/// instance for equal potentials) the slope is reported as negative
/// infinity.
pub fn stationary_phase_scan(
    q1: &PotentialGrid,
    q2: &PotentialGrid,
    config_base: &CgoConfig,
    taus: &[f64],
) -> Result<DecayReport, CgoError> {
    if taus.len() < 2 {
        return Err(CgoError::InvalidConfig(format!(
            "a decay scan needs at least two phase parameters, got {}",
            taus.len()
        )));
    }
    if taus.windows(2).any(|pair| !(pair[1] > pair[0])) || !(taus[0] > 0.0) {
        return Err(CgoError::InvalidConfig(
            "scan parameters must be positive and strictly increasing".into(),
        ));
    }
    let mut probes = Vec::with_capacity(taus.len());
    let mut leading_terms = Vec::with_capacity(taus.len());
    let mut differences = Vec::with_capacity(taus.len());
    for &tau in taus {
        let config = config_base.with_tau(tau);
        let (v1, v2) = build_cgo_pair(q1, q2, &config)?;
        let probe = orthogonality_probe(q1, q2, &v1, &v2)?;
        let leading = phase_mismatch_integral(q1, q2, &config, tau)?;
        probes.push(probe);
        leading_terms.push(leading);
        differences.push((probe - leading).norm());
    }
    let reference = probes
        .iter()
        .chain(&leading_terms)
        .fold(0.0f64, |acc, v| acc.max(v.norm()))
        .max(f64::MIN_POSITIVE);
    let slope = if differences
        .iter()
        .all(|&d| d <= ZERO_DIFFERENCE_FLOOR * reference)
    {
        f64::NEG_INFINITY
    } else {
        log_log_slope(taus, &differences)
    };
    let leading_ratios = leading_terms
        .windows(2)
        .map(|pair| pair[1].norm() / pair[0].norm())
        .collect();
    Ok(DecayReport {
        taus: taus.to_vec(),
        probes,
        leading_terms,
        differences,
        slope,
        decays_beyond_leading: slope < -1.0,
        leading_ratios,
    })
}

/// Least-squares slope of `ln y` against `ln x`, with zero values floored
/// at the smallest positive float.
fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|&x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| y.max(f64::MIN_POSITIVE).ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        cov += (x - mx) * (y - my);
        var += (x - mx) * (x - mx);
    }
    cov / var
}
