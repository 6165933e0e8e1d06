//! Shared dynamical types: two-component states, 2x2 complex propagators, and
//! the pulse-sequence description consumed by every engine.
//!
//! Conventions: Rabi frequencies and detunings are angular, times are their
//! reciprocals, and hbar and the atomic mass enter only through
//! [`PhysicalConstants`] (both default to 1).

use std::borrow::Cow;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pulses::{self, EnvelopeKind, PulseError};

/// Energy-over-coupling ratio below which the constant-velocity treatment of
/// the atomic motion starts to look shaky.
pub const DEFAULT_SEMICLASSICAL_RATIO: f64 = 10.0;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("pulse duration must be positive and finite, got {0}")]
    BadDuration(f64),
    #[error("peak Rabi frequency must be non-negative and finite, got {0}")]
    BadRabi(f64),
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("gap must be non-negative and finite, got {0}")]
    BadGap(f64),
    #[error("physical constants must be positive and finite: hbar = {hbar}, mass = {mass}")]
    BadConstants { hbar: f64, mass: f64 },
    #[error(transparent)]
    Envelope(#[from] PulseError),
}

/// State vector `c1 |1> + c2 |2>` of the two-level atom, `|1>` being the
/// lower level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelState {
    pub c1: C64,
    pub c2: C64,
}

impl TwoLevelState {
    pub fn new(c1: C64, c2: C64) -> Self {
        Self { c1, c2 }
    }

    /// The atom before it meets any field.
    pub fn ground() -> Self {
        Self::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn norm(&self) -> f64 {
        (self.c1.norm_sqr() + self.c2.norm_sqr()).sqrt()
    }

    /// Probability of finding the atom in the upper level.
    pub fn excited_population(&self) -> f64 {
        self.c2.norm_sqr()
    }
}

/// 2x2 complex matrix in row-major entry order, used for propagators and
/// Hamiltonian blocks alike.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Propagator2 {
    pub u11: C64,
    pub u12: C64,
    pub u21: C64,
    pub u22: C64,
}

impl Propagator2 {
    pub fn new(u11: C64, u12: C64, u21: C64, u22: C64) -> Self {
        Self { u11, u12, u21, u22 }
    }

    pub fn identity() -> Self {
        Self::diagonal(C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new(z, z, z, z)
    }

    pub fn diagonal(a: C64, d: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new(a, z, z, d)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.u11.conj(),
            self.u21.conj(),
            self.u12.conj(),
            self.u22.conj(),
        )
    }

    pub fn apply(&self, s: TwoLevelState) -> TwoLevelState {
        TwoLevelState::new(
            self.u11 * s.c1 + self.u12 * s.c2,
            self.u21 * s.c1 + self.u22 * s.c2,
        )
    }

    /// Largest entry of |U^dagger U - 1|: zero for exactly unitary matrices,
    /// and an honest error meter for numerically propagated ones.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.adjoint() * *self;
        let one = C64::new(1.0, 0.0);
        (g.u11 - one)
            .norm()
            .max(g.u12.norm())
            .max(g.u21.norm())
            .max((g.u22 - one).norm())
    }

    /// Largest entrywise difference, handy for convergence measurements.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.u11 - other.u11)
            .norm()
            .max((self.u12 - other.u12).norm())
            .max((self.u21 - other.u21).norm())
            .max((self.u22 - other.u22).norm())
    }
}

impl Mul for Propagator2 {
    type Output = Propagator2;
    fn mul(self, rhs: Propagator2) -> Propagator2 {
        Propagator2::new(
            self.u11 * rhs.u11 + self.u12 * rhs.u21,
            self.u11 * rhs.u12 + self.u12 * rhs.u22,
            self.u21 * rhs.u11 + self.u22 * rhs.u21,
            self.u21 * rhs.u12 + self.u22 * rhs.u22,
        )
    }
}

impl Add for Propagator2 {
    type Output = Propagator2;
    fn add(self, rhs: Propagator2) -> Propagator2 {
        Propagator2::new(
            self.u11 + rhs.u11,
            self.u12 + rhs.u12,
            self.u21 + rhs.u21,
            self.u22 + rhs.u22,
        )
    }
}

impl Sub for Propagator2 {
    type Output = Propagator2;
    fn sub(self, rhs: Propagator2) -> Propagator2 {
        Propagator2::new(
            self.u11 - rhs.u11,
            self.u12 - rhs.u12,
            self.u21 - rhs.u21,
            self.u22 - rhs.u22,
        )
    }
}

impl Mul<C64> for Propagator2 {
    type Output = Propagator2;
    fn mul(self, k: C64) -> Propagator2 {
        Propagator2::new(self.u11 * k, self.u12 * k, self.u21 * k, self.u22 * k)
    }
}

impl Mul<f64> for Propagator2 {
    type Output = Propagator2;
    fn mul(self, k: f64) -> Propagator2 {
        self * C64::new(k, 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.hbar > 0.0 && self.hbar.is_finite() && self.mass > 0.0 && self.mass.is_finite() {
            Ok(())
        } else {
            Err(ConfigError::BadConstants {
                hbar: self.hbar,
                mass: self.mass,
            })
        }
    }
}

/// One field region: peak coupling, detuning from the atomic line, window
/// length, field phase, and envelope shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseConfig {
    pub rabi_peak: f64,
    pub detuning: f64,
    pub duration: f64,
    pub phase: f64,
    pub envelope: EnvelopeKind,
    /// Rescale a tabulated envelope so its area equals
    /// `rabi_peak * duration` (the flat-top equivalent). Off by default;
    /// rejected for closed-form shapes.
    pub area_normalized: bool,
}

impl Default for PulseConfig {
    fn default() -> Self {
        Self {
            rabi_peak: std::f64::consts::FRAC_PI_2,
            detuning: 0.0,
            duration: 1.0,
            phase: 0.0,
            envelope: EnvelopeKind::Mesa,
            area_normalized: false,
        }
    }
}

impl PulseConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(ConfigError::BadDuration(self.duration));
        }
        if !(self.rabi_peak >= 0.0 && self.rabi_peak.is_finite()) {
            return Err(ConfigError::BadRabi(self.rabi_peak));
        }
        if !self.detuning.is_finite() {
            return Err(ConfigError::NonFinite("detuning"));
        }
        if !self.phase.is_finite() {
            return Err(ConfigError::NonFinite("phase"));
        }
        self.envelope.validate(self.duration)?;
        if self.area_normalized {
            // Errors out for closed-form shapes and degenerate tables.
            self.envelope
                .scaled_to_area(self.rabi_peak * self.duration)?;
        }
        Ok(())
    }

    /// The envelope with area normalization applied, if requested.
    pub fn effective_envelope(&self) -> Result<Cow<'_, EnvelopeKind>, ConfigError> {
        if self.area_normalized {
            Ok(Cow::Owned(
                self.envelope
                    .scaled_to_area(self.rabi_peak * self.duration)?,
            ))
        } else {
            Ok(Cow::Borrowed(&self.envelope))
        }
    }

    /// Envelope value at absolute time `t` for a pulse starting at `t_start`.
    pub fn envelope_at(&self, t: f64, t_start: f64) -> Result<f64, ConfigError> {
        let env = self.effective_envelope()?;
        Ok(pulses::envelope_value(
            &env,
            t,
            t_start,
            self.duration,
            self.rabi_peak,
        )?)
    }
}

/// The full two-region crossing: entrance time, both pulses, and the
/// field-free gap between them. Pulse 2 starts a gap after pulse 1 ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SequenceConfig {
    pub entrance_time: f64,
    pub pulse1: PulseConfig,
    pub pulse2: PulseConfig,
    pub gap: f64,
    pub constants: PhysicalConstants,
}

impl Default for SequenceConfig {
    fn default() -> Self {
        Self {
            entrance_time: 0.0,
            pulse1: PulseConfig::default(),
            pulse2: PulseConfig::default(),
            gap: 5.0,
            constants: PhysicalConstants::default(),
        }
    }
}

impl SequenceConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.entrance_time.is_finite() {
            return Err(ConfigError::NonFinite("entrance_time"));
        }
        if !(self.gap >= 0.0 && self.gap.is_finite()) {
            return Err(ConfigError::BadGap(self.gap));
        }
        self.pulse1.validate()?;
        self.pulse2.validate()?;
        self.constants.validate()
    }

    /// Absolute `(start, end)` of the first field window.
    pub fn pulse1_window(&self) -> (f64, f64) {
        (
            self.entrance_time,
            self.entrance_time + self.pulse1.duration,
        )
    }

    /// Absolute `(start, end)` of the second field window.
    pub fn pulse2_window(&self) -> (f64, f64) {
        let start = self.entrance_time + self.pulse1.duration + self.gap;
        (start, start + self.pulse2.duration)
    }

    /// Time at which the atom leaves the second field.
    pub fn exit_time(&self) -> f64 {
        self.pulse2_window().1
    }

    pub fn with_entrance_time(mut self, t0: f64) -> Self {
        self.entrance_time = t0;
        self
    }

    /// Detune the two fields symmetrically: pulse 1 at `-delta`, pulse 2 at
    /// `+delta`.
    pub fn with_opposite_detuning(mut self, delta: f64) -> Self {
        self.pulse1.detuning = -delta;
        self.pulse2.detuning = delta;
        self
    }

    pub fn with_equal_detuning(mut self, delta: f64) -> Self {
        self.pulse1.detuning = delta;
        self.pulse2.detuning = delta;
        self
    }

    pub fn with_envelope(mut self, envelope: EnvelopeKind) -> Self {
        self.pulse1.envelope = envelope.clone();
        self.pulse2.envelope = envelope;
        self
    }

    pub fn with_phases(mut self, phi1: f64, phi2: f64) -> Self {
        self.pulse1.phase = phi1;
        self.pulse2.phase = phi2;
        self
    }
}

/// Advisory check of the constant-velocity picture: the kinetic energy should
/// dominate both the coupling and the detuning by at least `ratio`. Returns
/// human-readable warnings, empty when everything is comfortably classical.
pub fn validate_semiclassical(seq: &SequenceConfig, velocity: f64, ratio: f64) -> Vec<String> {
    let mut warnings = Vec::new();
    if !(velocity > 0.0 && velocity.is_finite()) {
        warnings.push(format!(
            "velocity must be positive and finite to assess the moving-atom picture, got {velocity}"
        ));
        return warnings;
    }
    let energy = 0.5 * seq.constants.mass * velocity * velocity;
    for (label, pulse) in [("pulse 1", &seq.pulse1), ("pulse 2", &seq.pulse2)] {
        let coupling = seq.constants.hbar * pulse.rabi_peak;
        if pulse.rabi_peak > 0.0 && energy < ratio * coupling {
            warnings.push(format!(
                "{label}: kinetic energy {energy:.3e} is below {ratio} x hbar*Omega = {:.3e}; \
                 the field exerts non-negligible forces on the trajectory",
                ratio * coupling
            ));
        }
        let detuning_energy = seq.constants.hbar * pulse.detuning.abs();
        if pulse.detuning != 0.0 && energy < ratio * detuning_energy {
            warnings.push(format!(
                "{label}: kinetic energy {energy:.3e} is below {ratio} x hbar*|Delta| = {:.3e}; \
                 internal-state energy exchange can deflect the atom",
                ratio * detuning_energy
            ));
        }
    }
    warnings
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hand_expanded_product_is_reproduced() {
        // [[1+i, 2], [0, 1-i]] * [[i, 1], [1, -i]] worked out entry by entry:
        // [[1+i, 1-i], [1-i, -1-i]].
        let a = Propagator2::new(c(1.0, 1.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, -1.0));
        let b = Propagator2::new(c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -1.0));
        let ab = a * b;
        assert_eq!(ab.u11, c(1.0, 1.0));
        assert_eq!(ab.u12, c(1.0, -1.0));
        assert_eq!(ab.u21, c(1.0, -1.0));
        assert_eq!(ab.u22, c(-1.0, -1.0));

        // Continuing with [[2, i], [-i, 1]] gives [[1+i, 0], [1-i, 0]] either
        // way the product is associated.
        let m = Propagator2::new(c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0));
        let left = ab * m;
        let right = a * (b * m);
        assert_eq!(left.u11, c(1.0, 1.0));
        assert_eq!(left.u12, c(0.0, 0.0));
        assert_eq!(left.u21, c(1.0, -1.0));
        assert_eq!(left.u22, c(0.0, 0.0));
        assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn identity_is_neutral_and_has_zero_defect() {
        let id = Propagator2::identity();
        let a = Propagator2::new(c(0.3, 0.1), c(-0.2, 0.7), c(0.5, -0.4), c(0.1, 0.9));
        assert_eq!(id * a, a);
        assert_eq!(a * id, a);
        assert_eq!(id.unitarity_defect(), 0.0);
    }

    #[test]
    fn unitarity_defect_examples() {
        let phase = Propagator2::diagonal(C64::from_polar(1.0, 0.7), C64::from_polar(1.0, -0.7));
        assert!(phase.unitarity_defect() < 1e-15);
        let stretched = Propagator2::diagonal(c(2.0, 0.0), c(1.0, 0.0));
        assert_abs_diff_eq!(stretched.unitarity_defect(), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn apply_preserves_norm_for_unitaries() {
        let s = 0.5_f64.sqrt();
        let u = Propagator2::new(c(s, 0.0), c(0.0, -s), c(0.0, -s), c(s, 0.0));
        let out = u.apply(TwoLevelState::ground());
        assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.excited_population(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn default_sequence_matches_reference_parameters() {
        let seq = SequenceConfig::default();
        seq.validate().unwrap();
        assert_eq!(seq.pulse1.rabi_peak, std::f64::consts::FRAC_PI_2);
        assert_eq!(seq.pulse1.duration, 1.0);
        assert_eq!(seq.gap, 5.0);
        assert_eq!(seq.pulse1_window(), (0.0, 1.0));
        assert_eq!(seq.pulse2_window(), (6.0, 7.0));
        assert_eq!(seq.exit_time(), 7.0);
        let shifted = seq.with_entrance_time(10.0);
        assert_eq!(shifted.pulse2_window(), (16.0, 17.0));
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let seq = SequenceConfig {
            gap: -1.0,
            ..SequenceConfig::default()
        };
        assert!(seq.validate().is_err());
        let mut seq = SequenceConfig::default();
        seq.pulse1.duration = 0.0;
        assert!(seq.validate().is_err());
        let mut seq = SequenceConfig::default();
        seq.pulse2.rabi_peak = -0.5;
        assert!(seq.validate().is_err());
        let mut seq = SequenceConfig::default();
        seq.constants.hbar = 0.0;
        assert!(seq.validate().is_err());
        let mut seq = SequenceConfig::default();
        seq.pulse1.area_normalized = true; // mesa shape: nothing to normalize
        assert!(seq.validate().is_err());
    }

    #[test]
    fn serde_round_trip_is_bit_exact() {
        let seq = SequenceConfig::default()
            .with_opposite_detuning(0.448799)
            .with_entrance_time(std::f64::consts::PI)
            .with_phases(0.1, -0.25);
        let json = serde_json::to_string(&seq).unwrap();
        let back: SequenceConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(seq, back);
        assert_eq!(json, serde_json::to_string(&back).unwrap());
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let err = serde_json::from_str::<SequenceConfig>(r#"{"entrance_time": 0.0, "gaap": 1.0}"#);
        assert!(err.is_err());
    }

    #[test]
    fn semiclassical_warnings_scale_with_velocity() {
        let seq = SequenceConfig::default().with_opposite_detuning(0.3);
        // E = 50 comfortably above 10 * max(hbar*Omega, hbar*|Delta|).
        assert!(validate_semiclassical(&seq, 10.0, DEFAULT_SEMICLASSICAL_RATIO).is_empty());
        // E = 0.5 below 10 * hbar*Omega = 15.7: both pulses complain.
        let warnings = validate_semiclassical(&seq, 1.0, DEFAULT_SEMICLASSICAL_RATIO);
        assert_eq!(warnings.len(), 4);
        // No coupling and no detuning: nothing to warn about.
        let mut idle = SequenceConfig::default();
        idle.pulse1.rabi_peak = 0.0;
        idle.pulse2.rabi_peak = 0.0;
        assert!(validate_semiclassical(&idle, 1.0, DEFAULT_SEMICLASSICAL_RATIO).is_empty());
        assert_eq!(
            validate_semiclassical(&idle, 0.0, DEFAULT_SEMICLASSICAL_RATIO).len(),
            1
        );
    }
}
