//! Closed-form propagators and transition probabilities for flat-top (mesa)
//! field regions.
//!
//! Everything here works in the frame where each field-atom coupling keeps
//! oscillating at its own detuning, so the propagator of a field-free stretch
//! is the identity and a full two-region crossing is just the ordered product
//! of the two in-field blocks. The price is that the in-field propagator
//! depends on the absolute entrance and exit times, not only on the dwell
//! time: the off-diagonal phases below carry `t_end + t_start`. That
//! dependence is the entire mechanism by which the entrance time steers the
//! fringe pattern.

use num_complex::Complex64 as C64;

use crate::core::{Propagator2, SequenceConfig, TwoLevelState};
use crate::core::PulseConfig;
use crate::pulses::EnvelopeKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error("closed-form propagators exist only for mesa envelopes")]
    UnsupportedEnvelope,
    #[error("invalid propagation interval [{t_start}, {t_end}]")]
    InvalidInterval { t_start: f64, t_end: f64 },
    #[error("sequence does not reduce to matched opposite-detuned pulses: {0}")]
    MismatchedSequence(&'static str),
}

/// Generalized Rabi frequency `sqrt(rabi^2 + detuning^2)`.
pub fn effective_rabi(rabi: f64, detuning: f64) -> f64 {
    rabi.hypot(detuning)
}

/// Exact propagator of a single flat-top field region from `t_start` to
/// `t_end`.
///
/// With `op = effective_rabi(rabi, delta)` and `dt = t_end - t_start` the
/// matrix is
///
/// ```text
/// | e^{+i d dt/2} (cos(op dt/2) - i (d/op) sin(op dt/2))     -i (W/op) e^{+i(d (t_end+t_start)/2 + phi)} sin(op dt/2) |
/// | -i (W/op) e^{-i(d (t_end+t_start)/2 + phi)} sin(op dt/2)  e^{-i d dt/2} (cos(op dt/2) + i (d/op) sin(op dt/2))    |
/// ```
///
/// where `W` is the peak Rabi frequency, `d` the detuning, and `phi` the
/// field phase. For `W = 0` this collapses to the identity: without coupling
/// there is no dynamics in this frame.
pub fn mesa_propagator(
    pulse: &PulseConfig,
    t_start: f64,
    t_end: f64,
) -> Result<Propagator2, AnalyticError> {
    if pulse.envelope != EnvelopeKind::Mesa {
        return Err(AnalyticError::UnsupportedEnvelope);
    }
    if !(t_end >= t_start) || !t_start.is_finite() || !t_end.is_finite() {
        return Err(AnalyticError::InvalidInterval { t_start, t_end });
    }
    let rabi = pulse.rabi_peak;
    let delta = pulse.detuning;
    let op = effective_rabi(rabi, delta);
    let dt = t_end - t_start;
    // sin(op dt/2)/op with the op -> 0 limit dt/2 taken explicitly.
    let (cos_half, sin_over) = if op == 0.0 {
        (1.0, 0.5 * dt)
    } else {
        ((0.5 * op * dt).cos(), (0.5 * op * dt).sin() / op)
    };
    let e_diag = C64::from_polar(1.0, 0.5 * delta * dt);
    let e_off = C64::from_polar(1.0, 0.5 * delta * (t_end + t_start) + pulse.phase);
    let off = C64::new(0.0, -rabi * sin_over);
    Ok(Propagator2::new(
        e_diag * C64::new(cos_half, -delta * sin_over),
        off * e_off,
        off * e_off.conj(),
        e_diag.conj() * C64::new(cos_half, delta * sin_over),
    ))
}

/// Final state of an atom that enters the sequence in the lower level:
/// second-pulse propagator times first-pulse propagator applied to `|1>`.
/// The gap contributes nothing in this frame.
pub fn two_pulse_state(seq: &SequenceConfig) -> Result<TwoLevelState, AnalyticError> {
    let (a1, b1) = seq.pulse1_window();
    let (a2, b2) = seq.pulse2_window();
    let u1 = mesa_propagator(&seq.pulse1, a1, b1)?;
    let u2 = mesa_propagator(&seq.pulse2, a2, b2)?;
    Ok((u2 * u1).apply(TwoLevelState::ground()))
}

/// Upper-level probability after two matched mesa pulses of duration `tau`
/// and peak Rabi frequency `rabi`, separated by `gap`, with independent
/// detunings and entrance time `entrance`. Direct evaluation of the two-path
/// interference amplitude; agrees with the propagator product to rounding.
pub fn p12_general(
    delta1: f64,
    delta2: f64,
    rabi: f64,
    tau: f64,
    gap: f64,
    entrance: f64,
) -> f64 {
    if rabi == 0.0 {
        // No coupling, no excitation; also covers the op = 0 corner without
        // dividing by zero.
        return 0.0;
    }
    let op1 = effective_rabi(rabi, delta1);
    let op2 = effective_rabi(rabi, delta2);
    let (s1, c1) = (0.5 * op1 * tau).sin_cos();
    let (s2, c2) = (0.5 * op2 * tau).sin_cos();
    // Relative phase of the two interfering paths (excite in pulse 1 vs
    // excite in pulse 2): a detuning-difference part tied to the absolute
    // entrance time plus the phase the second field winds up during the gap.
    let mix = 0.5 * (delta1 - delta2) * (entrance + tau);
    let wind = 0.5 * delta2 * gap;
    let z1 = C64::new(c1, -delta1 / op1 * s1);
    let z2 = C64::new(c2, delta2 / op2 * s2);
    let term1 = C64::from_polar(rabi / op2 * s2, mix - wind) * z1;
    let term2 = C64::from_polar(rabi / op1 * s1, wind - mix) * z2;
    (term1 + term2).norm_sqr().clamp(0.0, 1.0)
}

/// Equal detunings (the ordinary separated-fields fringe): independent of the
/// entrance time.
pub fn p12_equal(delta: f64, rabi: f64, tau: f64, gap: f64) -> f64 {
    if rabi == 0.0 {
        return 0.0;
    }
    let op = effective_rabi(rabi, delta);
    let (s, c) = (0.5 * op * tau).sin_cos();
    let (sg, cg) = (0.5 * delta * gap).sin_cos();
    let amp = 2.0 * (rabi / op) * s * (c * cg - (delta / op) * s * sg);
    (amp * amp).clamp(0.0, 1.0)
}

/// Matched pulse pair detuned to opposite sides: pulse 1 at `-detuning`,
/// pulse 2 at `+detuning`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OppositeDetuningParams {
    pub detuning: f64,
    pub rabi: f64,
    pub tau: f64,
    pub gap: f64,
    pub entrance: f64,
}

impl OppositeDetuningParams {
    /// Extract the parameters from a sequence of two matched mesa pulses
    /// whose detunings are exact opposites.
    pub fn from_sequence(seq: &SequenceConfig) -> Result<Self, AnalyticError> {
        if seq.pulse1.envelope != EnvelopeKind::Mesa || seq.pulse2.envelope != EnvelopeKind::Mesa {
            return Err(AnalyticError::UnsupportedEnvelope);
        }
        if seq.pulse1.duration != seq.pulse2.duration {
            return Err(AnalyticError::MismatchedSequence("durations differ"));
        }
        if seq.pulse1.rabi_peak != seq.pulse2.rabi_peak {
            return Err(AnalyticError::MismatchedSequence("peak couplings differ"));
        }
        if seq.pulse1.detuning != -seq.pulse2.detuning {
            return Err(AnalyticError::MismatchedSequence(
                "detunings are not opposite",
            ));
        }
        Ok(Self {
            detuning: seq.pulse2.detuning,
            rabi: seq.pulse2.rabi_peak,
            tau: seq.pulse2.duration,
            gap: seq.gap,
            entrance: seq.entrance_time,
        })
    }
}

/// Fringe for oppositely detuned fields. The central structure is set by
/// `cos^2[detuning * (entrance + tau + gap/2)]`, so the pattern narrows as
/// the entrance time grows and repeats with period `pi / detuning`.
pub fn p12_opposite(p: &OppositeDetuningParams) -> f64 {
    if p.rabi == 0.0 {
        return 0.0;
    }
    let op = effective_rabi(p.rabi, p.detuning);
    let (s, c) = (0.5 * op * p.tau).sin_cos();
    let cos_fringe = (p.detuning * (p.entrance + p.tau + 0.5 * p.gap)).cos();
    let r = p.rabi / op;
    let d = p.detuning / op;
    (4.0 * r * r * s * s * cos_fringe * cos_fringe * (c * c + d * d * s * s)).clamp(0.0, 1.0)
}

/// Opposite-detuning fringe for an atom entering at time zero, with the
/// entrance-time dependence recast as an initial phase difference of the two
/// fields: `phi2 - phi1 = detuning * t0` reproduces [`p12_opposite`] with
/// entrance time `t0`.
///
/// Convention note: these phases parametrize the shift of the *fringe*
/// pattern, which winds twice as fast as the phase of a single coupling. A
/// sequence whose couplings carry explicit field phases `(a, b)` (see
/// [`PulseConfig::phase`]) lands at `phi2 - phi1 = (b - a) / 2` here.
pub fn p12_opposite_phases(
    delta: f64,
    rabi: f64,
    tau: f64,
    gap: f64,
    phi1: f64,
    phi2: f64,
) -> f64 {
    if rabi == 0.0 {
        return 0.0;
    }
    let op = effective_rabi(rabi, delta);
    let (s, c) = (0.5 * op * tau).sin_cos();
    let cos_fringe = (delta * (tau + 0.5 * gap) + (phi2 - phi1)).cos();
    let r = rabi / op;
    let d = delta / op;
    (4.0 * r * r * s * s * cos_fringe * cos_fringe * (c * c + d * d * s * s)).clamp(0.0, 1.0)
}

/// Small-detuning estimate of where the central fringe first touches zero,
/// `2 / (gap + 2 (entrance + tau))`, assuming quarter-flip pulses
/// (`rabi * tau = pi/2`). The exact first zero of the fringe factor sits at
/// `pi / (gap + 2 (entrance + tau))`, a factor `pi/2` higher; the estimate
/// tracks the same scaling and is kept as the quick-look number.
pub fn central_zero_estimate(tau: f64, gap: f64, entrance: f64) -> f64 {
    2.0 / (gap + 2.0 * (entrance + tau))
}
