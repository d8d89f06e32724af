//! Far-field asymptotics of the impedance kernel and radiation diagnostics.
//!
//! Far from the source the kernel factors into a radial amplitude, a plane
//! wave in the source coordinates, and a direction-dependent reflection
//! bracket. The expansion is uniform only above a transition band of height
//! `~ r^alpha` over the boundary; inside that band surface effects enter at
//! leading order and evaluations are flagged rather than refused.

use super::robin::{green_robin, green_robin_gradient, surface_wave_term};
use super::{Dim, HalfSpacePoint, KernelError, MediumSpec, Regime, SpectralKernelParams};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Geometry of a far-field evaluation point: radius, elevation and the
/// region-splitting exponent, fixed at construction so that scans cannot
/// silently mix conventions.
#[derive(Debug, Clone, Copy)]
pub struct FarFieldFrame {
    radius: f64,
    height: f64,
    alpha: f64,
    region_constant: f64,
    dim: Dim,
}

impl FarFieldFrame {
    /// Build the frame of one evaluation point. `alpha` is the exponent of
    /// the volume/surface transition height `r^alpha` and must lie strictly
    /// inside `(0, 1/2)`.
    pub fn from_point(x: &HalfSpacePoint, alpha: f64) -> Result<Self, KernelError> {
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(KernelError::InvalidPoint(format!(
                "region exponent must lie in (0, 1/2), got {alpha}"
            )));
        }
        let radius = x.coords().iter().map(|c| c * c).sum::<f64>().sqrt();
        if radius < 1.0 {
            return Err(KernelError::InvalidPoint(
                "far-field frame needs a field point away from the origin".into(),
            ));
        }
        Ok(Self {
            radius,
            height: x.height(),
            alpha,
            region_constant: 1.0,
            dim: x.dim(),
        })
    }

    /// Override the proportionality constant of the transition height.
    pub fn with_region_constant(mut self, c: f64) -> Self {
        self.region_constant = c;
        self
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// True when the point sits at or below twice the transition height, so
    /// that neither the volume nor the surface expansion is clearly valid.
    pub fn region_ambiguous(&self) -> bool {
        self.height <= 2.0 * self.region_constant * self.radius.powf(self.alpha)
    }
}

/// Far-field value together with its direction-dependent factor.
#[derive(Debug, Clone, Copy)]
pub struct FarFieldValue {
    pub value: Complex64,
    /// Plane-wave-in-source times reflection bracket; `value` is this times
    /// the radial amplitude.
    pub pattern: Complex64,
    pub region_ambiguous: bool,
}

/// Leading-order far-field expansion of the impedance kernel at `x` for a
/// source `y`, in the frame built from `x`.
pub fn farfield_expansion(
    x: &HalfSpacePoint,
    y: &HalfSpacePoint,
    medium: &MediumSpec,
    frame: &FarFieldFrame,
) -> Result<FarFieldValue, KernelError> {
    if x.dim() != medium.dim() || y.dim() != medium.dim() || frame.dim != medium.dim() {
        return Err(KernelError::InvalidPoint(
            "point dimension does not match the medium".into(),
        ));
    }
    let r = x.coords().iter().map(|c| c * c).sum::<f64>().sqrt();
    let consistent = (r - frame.radius).abs() <= 1e-6 * r.max(1.0)
        && (x.height() - frame.height).abs() <= 1e-6 * r.max(1.0);
    if !consistent {
        return Err(KernelError::InvalidPoint(
            "frame was built for a different field point".into(),
        ));
    }

    let k = medium.wavenumber();
    let theta = medium.theta();
    let s = x.height() / r;
    let xhat_dot_y: f64 = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| a * b)
        .sum::<f64>()
        / r;

    // Direction-dependent reflection coefficient; the rigid limit is exactly
    // -1 for every direction, including grazing.
    let reflection = if medium.regime() == Regime::Rigid {
        Complex64::new(-1.0, 0.0)
    } else {
        (theta - I * (k * s)) / (theta + I * (k * s))
    };
    let bracket = Complex64::new(1.0, 0.0) - reflection * (I * (2.0 * k * s * y.height())).exp();
    let pattern = (-I * (k * xhat_dot_y)).exp() * bracket;

    let amplitude = match medium.dim() {
        Dim::Two => {
            let phase = I * (k * r + std::f64::consts::FRAC_PI_4);
            phase.exp() / (8.0 * std::f64::consts::PI * k * r).sqrt()
        }
        Dim::Three => (I * (k * r)).exp() / (4.0 * std::f64::consts::PI * r),
    };

    Ok(FarFieldValue {
        value: amplitude * pattern,
        pattern,
        region_ambiguous: frame.region_ambiguous(),
    })
}

/// Anything that can report a value and a gradient at a half-space point.
/// Implemented by kernel-based sources and by forward-solver fields.
pub trait RadiatingField {
    fn value(&self, x: &HalfSpacePoint) -> Result<Complex64, KernelError>;
    fn gradient(&self, x: &HalfSpacePoint) -> Result<Vec<Complex64>, KernelError>;
}

/// The field of a point source, radiating through the impedance kernel.
pub struct GreenSourceField<'a> {
    source: HalfSpacePoint,
    medium: &'a MediumSpec,
    params: &'a SpectralKernelParams,
}

impl<'a> GreenSourceField<'a> {
    pub fn new(
        source: HalfSpacePoint,
        medium: &'a MediumSpec,
        params: &'a SpectralKernelParams,
    ) -> Result<Self, KernelError> {
        if source.dim() != medium.dim() {
            return Err(KernelError::InvalidPoint(
                "source dimension does not match the medium".into(),
            ));
        }
        Ok(Self {
            source,
            medium,
            params,
        })
    }
}

impl RadiatingField for GreenSourceField<'_> {
    fn value(&self, x: &HalfSpacePoint) -> Result<Complex64, KernelError> {
        Ok(green_robin(x, &self.source, self.medium, self.params)?.value)
    }

    fn gradient(&self, x: &HalfSpacePoint) -> Result<Vec<Complex64>, KernelError> {
        green_robin_gradient(x, &self.source, self.medium, self.params)
    }
}

/// Radiation-condition residuals of a field along a sequence of radii.
#[derive(Debug, Clone)]
pub struct RadiationScanReport {
    pub radii: Vec<f64>,
    /// Worst residual of `x^ . grad u - i k u` over the volume elevations.
    pub volume_residuals: Vec<f64>,
    /// Residual of `x^ . grad u - i xi_p u` at the surface-band point.
    pub surface_residuals: Vec<f64>,
    /// Log-log decay slopes fitted over the scan.
    pub volume_slope: f64,
    pub surface_slope: f64,
    pub alpha: f64,
}

/// Elevation angles (radians above the boundary) probed in the volume region.
const VOLUME_ELEVATIONS: [f64; 4] = [0.5, 0.8, 1.1, 1.4];

/// Scan the outgoing-radiation residuals of `field` over `radii`.
///
/// Volume points test the free radiation condition with wavenumber `k`;
/// the surface point, placed at half the transition height `r^alpha`, tests
/// the boundary variant with the surface wavenumber.
pub fn radiation_residual_scan(
    field: &dyn RadiatingField,
    medium: &MediumSpec,
    radii: &[f64],
    alpha: f64,
) -> Result<RadiationScanReport, KernelError> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(KernelError::InvalidPoint(format!(
            "region exponent must lie in (0, 1/2), got {alpha}"
        )));
    }
    if radii.len() < 2 || radii.windows(2).any(|w| w[0] >= w[1]) || radii[0] <= 0.0 {
        return Err(KernelError::InvalidPoint(
            "scan needs at least two strictly increasing positive radii".into(),
        ));
    }
    let k = medium.wavenumber();
    let xi_p = medium.surface_wavenumber();

    let point_at = |r: f64, height: f64| -> Result<HalfSpacePoint, KernelError> {
        let t = (r * r - height * height).sqrt();
        match medium.dim() {
            Dim::Two => HalfSpacePoint::new2(t, height),
            Dim::Three => HalfSpacePoint::new3(t, 0.0, height),
        }
    };
    let radial_residual = |x: &HalfSpacePoint, rate: f64| -> Result<f64, KernelError> {
        let r = x.coords().iter().map(|c| c * c).sum::<f64>().sqrt();
        let u = field.value(x)?;
        let grad = field.gradient(x)?;
        let radial: Complex64 = x
            .coords()
            .iter()
            .zip(grad.iter())
            .map(|(c, g)| g * (c / r))
            .sum();
        Ok((radial - I * rate * u).norm())
    };

    let mut volume_residuals = Vec::with_capacity(radii.len());
    let mut surface_residuals = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut worst = 0.0f64;
        for &phi in &VOLUME_ELEVATIONS {
            let x = point_at(r, r * phi.sin())?;
            worst = worst.max(radial_residual(&x, k)?);
        }
        volume_residuals.push(worst);

        let band_height = 0.5 * r.powf(alpha);
        let x = point_at(r, band_height)?;
        surface_residuals.push(radial_residual(&x, xi_p)?);
    }

    let logs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let vol_logs: Vec<f64> = volume_residuals.iter().map(|v| v.max(1e-300).ln()).collect();
    let surf_logs: Vec<f64> = surface_residuals.iter().map(|v| v.max(1e-300).ln()).collect();
    let (_, volume_slope) = linear_fit(&logs, &vol_logs);
    let (_, surface_slope) = linear_fit(&logs, &surf_logs);

    Ok(RadiationScanReport {
        radii: radii.to_vec(),
        volume_residuals,
        surface_residuals,
        volume_slope,
        surface_slope,
        alpha,
    })
}

/// Result of fitting the boundary-trace oscillation of the kernel.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryWaveFit {
    /// Wavenumber extracted from the unwrapped phase of the trace.
    pub fitted_wavenumber: f64,
    /// The surface wavenumber `sqrt(k^2 + theta^2)` of the medium.
    pub expected_wavenumber: f64,
    pub wavenumber_rel_error: f64,
    /// Log-log decay slope of the trace minus the closed surface-wave term.
    pub remainder_slope: f64,
    pub sample_count: usize,
}

/// Sample the boundary trace of the kernel over `[rho_min, rho_max]`, fit the
/// phase to extract the propagation wavenumber, and fit the decay of the
/// remainder after subtracting the closed surface-wave term.
pub fn fit_boundary_wavenumber(
    medium: &MediumSpec,
    params: &SpectralKernelParams,
    rho_min: f64,
    rho_max: f64,
    samples: usize,
) -> Result<BoundaryWaveFit, KernelError> {
    if medium.regime() != Regime::NonAbsorbing {
        return Err(KernelError::RegimeMismatch {
            op: "fit_boundary_wavenumber",
            requirement: "real positive impedance",
        });
    }
    if samples < 8 || !(rho_min > 0.0) || rho_min >= rho_max {
        return Err(KernelError::InvalidPoint(
            "fit needs at least 8 samples on a positive increasing range".into(),
        ));
    }
    let expected = medium.surface_wavenumber();
    let step = (rho_max - rho_min) / (samples - 1) as f64;
    if step * expected > 2.8 {
        return Err(KernelError::InvalidPoint(
            "sampling too coarse to unwrap the trace phase".into(),
        ));
    }

    let origin = match medium.dim() {
        Dim::Two => HalfSpacePoint::new2(0.0, 0.0)?,
        Dim::Three => HalfSpacePoint::new3(0.0, 0.0, 0.0)?,
    };
    let mut rhos = Vec::with_capacity(samples);
    let mut phases = Vec::with_capacity(samples);
    let mut log_rhos = Vec::with_capacity(samples);
    let mut log_rems = Vec::with_capacity(samples);
    let mut unwrapped = 0.0f64;
    let mut prev_raw = 0.0f64;
    for i in 0..samples {
        let rho = rho_min + step * i as f64;
        let x = match medium.dim() {
            Dim::Two => HalfSpacePoint::new2(rho, 0.0)?,
            Dim::Three => HalfSpacePoint::new3(rho, 0.0, 0.0)?,
        };
        let trace = green_robin(&x, &origin, medium, params)?.value;
        let raw = trace.arg();
        if i == 0 {
            unwrapped = raw;
        } else {
            let mut d = raw - prev_raw;
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            unwrapped += d;
        }
        prev_raw = raw;
        rhos.push(rho);
        phases.push(unwrapped);

        let remainder = (trace - surface_wave_term(&x, &origin, medium)?).norm();
        log_rhos.push(rho.ln());
        log_rems.push(remainder.max(1e-300).ln());
    }

    let (_, fitted_wavenumber) = linear_fit(&rhos, &phases);
    let (_, remainder_slope) = linear_fit(&log_rhos, &log_rems);
    Ok(BoundaryWaveFit {
        fitted_wavenumber,
        expected_wavenumber: expected,
        wavenumber_rel_error: (fitted_wavenumber - expected).abs() / expected,
        remainder_slope,
        sample_count: samples,
    })
}

/// Least-squares straight line `y = a + b x`; returns `(a, b)`.
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}
