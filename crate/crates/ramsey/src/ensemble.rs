//! Averaging the opposite-detuning fringe over a Gaussian wavepacket.
//!
//! A moving atom turns geometry into time: with wavenumber `k` (velocity
//! `hbar k / m`) a field region of length `l` is crossed in `m l / (hbar k)`
//! and the gap of length `L` in `m L / (hbar k)`, while a displacement `x`
//! from the packet center shifts the entrance time by `m x / (hbar k)`. The
//! ensemble average is the point-atom fringe integrated over the packet's
//! phase-space density, taken here as a minimum-uncertainty Gaussian — the
//! position and wavenumber spreads are tied by `dx * dk = 1/2`, so squeezing
//! the velocity distribution necessarily widens the arrival-time spread.
//!
//! Two evaluators are provided: a direct two-dimensional quadrature of the
//! point-atom formula, and a closed form in which the position average has
//! been done analytically (a Gaussian average of a cosine is a damped
//! cosine). They agree to quadrature accuracy and the closed form stays
//! cheap and robust even when the position spread is too wide to resolve
//! point by point.

use crate::analytic::{effective_rabi, p12_opposite, OppositeDetuningParams};
use crate::core::PhysicalConstants;
use crate::quad::PanelRule;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("invalid phase-space distribution: {0}")]
    InvalidDistribution(&'static str),
    #[error("invalid spatial layout: {0}")]
    InvalidSpatial(&'static str),
    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(&'static str),
    #[error("integration window reaches k = {k_min}; atoms this slow never cross the apparatus")]
    Domain { k_min: f64 },
    #[error("{0} must be finite")]
    NonFinite(&'static str),
}

/// Minimum-uncertainty Gaussian wavepacket in phase space, centered at
/// wavenumber `k_mean` and (by convention) at position zero when the packet
/// center reaches the first field edge. The spreads obey `dx * dk = 1/2`
/// exactly, so either one determines the other.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSpaceGaussian {
    k_mean: f64,
    dk: f64,
}

impl PhaseSpaceGaussian {
    /// Build from the wavenumber spread. `k_mean` must sit at least eight
    /// spreads above zero so the slow tail carries no weight.
    pub fn from_dk(k_mean: f64, dk: f64) -> Result<Self, EnsembleError> {
        if !(k_mean.is_finite() && k_mean > 0.0) {
            return Err(EnsembleError::InvalidDistribution(
                "mean wavenumber must be positive and finite",
            ));
        }
        if !(dk.is_finite() && dk > 0.0) {
            return Err(EnsembleError::InvalidDistribution(
                "wavenumber spread must be positive and finite",
            ));
        }
        if k_mean < 8.0 * dk {
            return Err(EnsembleError::InvalidDistribution(
                "mean wavenumber must be at least eight spreads above zero",
            ));
        }
        Ok(Self { k_mean, dk })
    }

    /// Build from the position spread instead.
    pub fn from_dx(k_mean: f64, dx: f64) -> Result<Self, EnsembleError> {
        if !(dx.is_finite() && dx > 0.0) {
            return Err(EnsembleError::InvalidDistribution(
                "position spread must be positive and finite",
            ));
        }
        Self::from_dk(k_mean, 0.5 / dx)
    }

    pub fn k_mean(&self) -> f64 {
        self.k_mean
    }

    pub fn dk(&self) -> f64 {
        self.dk
    }

    pub fn dx(&self) -> f64 {
        0.5 / self.dk
    }

    /// Wavenumber marginal: a normalized Gaussian in `k`.
    pub fn marginal_g(&self, k: f64) -> f64 {
        let z = (k - self.k_mean) / self.dk;
        (-0.5 * z * z).exp() / ((2.0 * std::f64::consts::PI).sqrt() * self.dk)
    }

    /// Position marginal at the moment the packet center reaches the first
    /// field edge.
    pub fn marginal_x(&self, x: f64) -> f64 {
        let dx = self.dx();
        let z = x / dx;
        (-0.5 * z * z).exp() / ((2.0 * std::f64::consts::PI).sqrt() * dx)
    }
}

/// Geometry of the apparatus and the field strength, in the same units as
/// [`PhysicalConstants`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialConfig {
    /// Length of each oscillating-field region.
    pub field_length: f64,
    /// Field-free distance between the two regions.
    pub gap_length: f64,
    /// Peak Rabi frequency inside the field regions (same for both).
    pub rabi: f64,
    pub constants: PhysicalConstants,
}

impl SpatialConfig {
    pub fn validate(&self) -> Result<(), EnsembleError> {
        if !(self.field_length.is_finite() && self.field_length > 0.0) {
            return Err(EnsembleError::InvalidSpatial(
                "field length must be positive and finite",
            ));
        }
        if !(self.gap_length.is_finite() && self.gap_length >= 0.0) {
            return Err(EnsembleError::InvalidSpatial(
                "gap length must be non-negative and finite",
            ));
        }
        if !(self.rabi.is_finite() && self.rabi >= 0.0) {
            return Err(EnsembleError::InvalidSpatial(
                "Rabi frequency must be non-negative and finite",
            ));
        }
        self.constants
            .validate()
            .map_err(|_| EnsembleError::InvalidSpatial("physical constants must be positive and finite"))
    }

    /// Rabi frequency that makes an atom at wavenumber `k` experience a
    /// quarter flip per field region: `rabi * dwell_time(k) = pi/2`.
    pub fn quarter_flip_rabi(k: f64, field_length: f64, constants: &PhysicalConstants) -> f64 {
        0.5 * std::f64::consts::PI * constants.hbar * k / (constants.mass * field_length)
    }

    pub fn velocity(&self, k: f64) -> f64 {
        self.constants.hbar * k / self.constants.mass
    }

    /// Time an atom at wavenumber `k` spends inside one field region.
    pub fn dwell_time(&self, k: f64) -> f64 {
        self.field_length / self.velocity(k)
    }

    /// Time the same atom spends crossing the gap.
    pub fn drift_time(&self, k: f64) -> f64 {
        self.gap_length / self.velocity(k)
    }
}

/// Composite Gauss-Legendre layout used for the phase-space integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Half-width of each integration window in units of that axis' spread.
    pub window_sigmas: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels: 8,
            nodes_per_panel: 32,
            window_sigmas: 8.0,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<(), EnsembleError> {
        if self.panels == 0 || self.nodes_per_panel == 0 {
            return Err(EnsembleError::InvalidQuadrature(
                "panels and nodes per panel must both be at least one",
            ));
        }
        if !(self.window_sigmas.is_finite() && self.window_sigmas > 0.0) {
            return Err(EnsembleError::InvalidQuadrature(
                "window half-width must be positive and finite",
            ));
        }
        Ok(())
    }

    fn k_window(&self, dist: &PhaseSpaceGaussian) -> Result<(f64, f64), EnsembleError> {
        let lo = dist.k_mean() - self.window_sigmas * dist.dk();
        let hi = dist.k_mean() + self.window_sigmas * dist.dk();
        if lo < 0.0 {
            return Err(EnsembleError::Domain { k_min: lo });
        }
        Ok((lo, hi))
    }
}

fn check_inputs(
    delta: f64,
    t0_center: f64,
    spatial: &SpatialConfig,
    spec: &QuadratureSpec,
) -> Result<(), EnsembleError> {
    if !delta.is_finite() {
        return Err(EnsembleError::NonFinite("detuning"));
    }
    if !t0_center.is_finite() {
        return Err(EnsembleError::NonFinite("central entrance time"));
    }
    spatial.validate()?;
    spec.validate()
}

/// Ensemble-averaged upper-level probability by direct two-dimensional
/// quadrature: for every quadrature node `(k, x)` the point-atom fringe is
/// evaluated at the times that atom actually experiences, weighted by the
/// phase-space density. Uses the default [`QuadratureSpec`].
pub fn averaged_p12_quadrature(
    delta: f64,
    t0_center: f64,
    dist: &PhaseSpaceGaussian,
    spatial: &SpatialConfig,
) -> Result<f64, EnsembleError> {
    averaged_p12_quadrature_with(delta, t0_center, dist, spatial, &QuadratureSpec::default())
}

/// [`averaged_p12_quadrature`] with an explicit quadrature layout.
pub fn averaged_p12_quadrature_with(
    delta: f64,
    t0_center: f64,
    dist: &PhaseSpaceGaussian,
    spatial: &SpatialConfig,
    spec: &QuadratureSpec,
) -> Result<f64, EnsembleError> {
    check_inputs(delta, t0_center, spatial, spec)?;
    let (k_lo, k_hi) = spec.k_window(dist)?;
    let x_half = spec.window_sigmas * dist.dx();
    let rule = PanelRule::new(spec.panels, spec.nodes_per_panel);
    let k_points = rule.points(k_lo, k_hi);
    let x_points = rule.points(-x_half, x_half);
    let ratio = spatial.constants.mass / spatial.constants.hbar;

    let mut sum = 0.0;
    for &(k, wk) in &k_points {
        let tau = ratio * spatial.field_length / k;
        let gap = ratio * spatial.gap_length / k;
        let weight_k = wk * dist.marginal_g(k);
        let mut inner = 0.0;
        for &(x, wx) in &x_points {
            let p = OppositeDetuningParams {
                detuning: delta,
                rabi: spatial.rabi,
                tau,
                gap,
                entrance: t0_center + ratio * x / k,
            };
            inner += wx * dist.marginal_x(x) * p12_opposite(&p);
        }
        sum += weight_k * inner;
    }
    Ok(sum.clamp(0.0, 1.0))
}

/// Ensemble-averaged upper-level probability with the position integral done
/// in closed form: averaging the fringe cosine over a Gaussian of entrance
/// times leaves a damped cosine riding on a pedestal, and only the
/// wavenumber integral remains. Uses the default [`QuadratureSpec`].
pub fn averaged_p12_closed(
    delta: f64,
    t0_center: f64,
    dist: &PhaseSpaceGaussian,
    spatial: &SpatialConfig,
) -> Result<f64, EnsembleError> {
    averaged_p12_closed_with(delta, t0_center, dist, spatial, &QuadratureSpec::default())
}

/// [`averaged_p12_closed`] with an explicit quadrature layout (the
/// `window_sigmas` and node counts apply to the remaining wavenumber
/// integral).
pub fn averaged_p12_closed_with(
    delta: f64,
    t0_center: f64,
    dist: &PhaseSpaceGaussian,
    spatial: &SpatialConfig,
    spec: &QuadratureSpec,
) -> Result<f64, EnsembleError> {
    check_inputs(delta, t0_center, spatial, spec)?;
    let (k_lo, k_hi) = spec.k_window(dist)?;
    if spatial.rabi == 0.0 {
        return Ok(0.0);
    }
    let rule = PanelRule::new(spec.panels, spec.nodes_per_panel);
    let ratio = spatial.constants.mass / spatial.constants.hbar;
    let dx = dist.dx();
    let op = effective_rabi(spatial.rabi, delta);
    let r2 = (spatial.rabi / op) * (spatial.rabi / op);
    let d2 = (delta / op) * (delta / op);

    let sum = rule.integrate(k_lo, k_hi, |k| {
        let tau = ratio * spatial.field_length / k;
        let gap = ratio * spatial.gap_length / k;
        let a = 0.5 * op * tau;
        let (s, c) = a.sin_cos();
        let s2 = s * s;
        // Gaussian average over entrance times: the fringe cosine keeps its
        // center but is damped by the characteristic function of the
        // position spread seen through this atom's velocity.
        let spread = 2.0 * delta * ratio * dx / k;
        let damp = (-0.5 * spread * spread).exp();
        let phase = 2.0 * delta * (tau + 0.5 * gap + t0_center);
        let fringe = 1.0 + damp * phase.cos();
        dist.marginal_g(k) * 2.0 * r2 * s2 * (c * c + d2 * s2) * fringe
    });
    Ok(sum.clamp(0.0, 1.0))
}
