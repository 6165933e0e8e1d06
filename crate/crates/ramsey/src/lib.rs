//! Two-level atom crossing two separated oscillating-field regions.
//!
//! The two field regions have independently chosen detunings and initial
//! phases. Detuning both fields to the same side gives the ordinary
//! separated-fields fringe; detuning them to *opposite* sides makes the
//! fringe depend on when the atom enters the first field, and the central
//! fringe narrows as that entrance time grows — the narrowing that this
//! crate simulates, for point atoms, phase-space ensembles, and smooth pulse
//! envelopes.
//!
//! Layout:
//!
//! - [`core`] — states, 2x2 propagators, pulse/sequence configuration.
//! - [`pulses`] — envelope shapes (flat-top, sin^4, tabulated).
//! - [`analytic`] — closed-form propagators and fringe formulas for
//!   flat-top pulses.
//! - [`numeric`] — RK4 integration of the Schrodinger equation in three
//!   interaction pictures, for arbitrary envelopes.
//! - [`ensemble`] — phase-space averaging over a Gaussian wavepacket.
//! - [`analysis`] — fringe metrology: zeros, widths, contour grids,
//!   periodicity checks.
//! - [`cli`] — configuration loading and the subcommand entry points used
//!   by the `ramsey` binary.

// Negated comparisons like `!(step > 0.0)` are NaN-rejecting guards
// throughout this crate; the un-negated forms would silently accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod analytic;
pub mod cli;
pub mod core;
pub mod ensemble;
pub mod numeric;
pub mod pulses;
pub mod quad;

pub use crate::analytic::{
    central_zero_estimate, effective_rabi, p12_equal, p12_general, p12_opposite,
    p12_opposite_phases, OppositeDetuningParams,
};
pub use crate::core::{Propagator2, PulseConfig, SequenceConfig, TwoLevelState};
pub use crate::pulses::EnvelopeKind;
