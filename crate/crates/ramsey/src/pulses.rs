//! Field envelopes: the time profile of the Rabi coupling inside each of the
//! two field regions.
//!
//! An envelope occupies the closed window `[t_start, t_start + duration]` and
//! is identically zero outside it. All Rabi frequencies are angular.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PulseError {
    #[error("envelope queried at non-finite time t = {0}")]
    NonFiniteTime(f64),
    #[error("bad envelope table: {0}")]
    BadTable(String),
    #[error("cannot read envelope table: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Unsupported(&'static str),
}

/// Time profile of a single field region.
///
/// `Mesa` and `SinFourth` are closed-form shapes scaled by the owning pulse's
/// peak Rabi frequency. `Tabulated` carries explicit `(time, rabi)` samples on
/// a uniform grid of local times (0 = start of the window); the samples *are*
/// the Rabi values, so the peak setting of the owning pulse is ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    /// Flat top: the coupling jumps to its peak value at the window edges and
    /// stays there (sudden switching).
    #[default]
    Mesa,
    /// `peak * sin^4(pi (t - t_start) / duration)`: smooth switch-on and
    /// switch-off with pulse area `(3/8) * peak * duration`.
    SinFourth,
    /// Piecewise-linear interpolation of Rabi samples at strictly increasing,
    /// uniformly spaced local times. First and last values must vanish so the
    /// shape connects continuously to the field-free regions.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl EnvelopeKind {
    /// Load a tabulated envelope from a two-column CSV file of
    /// `time, rabi` rows. Lines starting with `#` and blank lines are
    /// skipped; a single leading header line is tolerated.
    pub fn tabulated_from_csv(path: impl AsRef<Path>) -> Result<Self, PulseError> {
        let text = std::fs::read_to_string(path)?;
        let mut samples = Vec::new();
        let mut header_allowed = true;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let parsed = match (cols.next(), cols.next(), cols.next()) {
                (Some(a), Some(b), None) => a
                    .parse::<f64>()
                    .and_then(|t| b.parse::<f64>().map(|w| (t, w)))
                    .ok(),
                _ => None,
            };
            match parsed {
                Some(sample) => {
                    samples.push(sample);
                    header_allowed = false;
                }
                None if header_allowed => header_allowed = false,
                None => {
                    return Err(PulseError::BadTable(format!(
                        "line {}: expected `time, rabi`, got {:?}",
                        lineno + 1,
                        raw
                    )))
                }
            }
        }
        Ok(EnvelopeKind::Tabulated { samples })
    }

    /// Rescale a tabulated envelope so that its time-integrated area equals
    /// `target_area`. Closed-form shapes are rejected: their areas are set by
    /// the peak Rabi frequency, which is the caller's knob.
    pub fn scaled_to_area(&self, target_area: f64) -> Result<Self, PulseError> {
        let EnvelopeKind::Tabulated { samples } = self else {
            return Err(PulseError::Unsupported(
                "area normalization applies only to tabulated envelopes",
            ));
        };
        let area = trapezoid(samples);
        if !(area > 0.0) {
            return Err(PulseError::BadTable(format!(
                "cannot normalize a table with area {area}"
            )));
        }
        let scale = target_area / area;
        Ok(EnvelopeKind::Tabulated {
            samples: samples.iter().map(|&(t, w)| (t, w * scale)).collect(),
        })
    }

    /// Check the structural invariants of the shape against the window length
    /// it will occupy.
    pub fn validate(&self, duration: f64) -> Result<(), PulseError> {
        let EnvelopeKind::Tabulated { samples } = self else {
            return Ok(());
        };
        if samples.len() < 2 {
            return Err(PulseError::BadTable(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        let mut peak: f64 = 0.0;
        for &(t, w) in samples {
            if !t.is_finite() || !w.is_finite() {
                return Err(PulseError::BadTable("non-finite sample".into()));
            }
            if w < 0.0 {
                return Err(PulseError::BadTable(format!("negative Rabi value {w}")));
            }
            peak = peak.max(w);
        }
        let span = samples[samples.len() - 1].0 - samples[0].0;
        let mean_dt = span / (samples.len() - 1) as f64;
        for pair in samples.windows(2) {
            let dt = pair[1].0 - pair[0].0;
            if dt <= 0.0 {
                return Err(PulseError::BadTable(
                    "sample times must be strictly increasing".into(),
                ));
            }
            if (dt - mean_dt).abs() > 1e-9 * mean_dt {
                return Err(PulseError::BadTable(
                    "sample times must be uniformly spaced".into(),
                ));
            }
        }
        // Endpoints must hand over smoothly to the field-free regions.
        let edge_tol = 1e-12 * peak.max(1e-300);
        if samples[0].1 > edge_tol || samples[samples.len() - 1].1 > edge_tol {
            return Err(PulseError::BadTable(
                "first and last samples must be zero".into(),
            ));
        }
        if (span - duration).abs() > 1e-9 * duration.max(1.0) {
            return Err(PulseError::BadTable(format!(
                "table spans {span} but the pulse window lasts {duration}"
            )));
        }
        Ok(())
    }
}

/// Envelope value at absolute time `t` for a pulse occupying
/// `[t_start, t_start + duration]` with the given peak Rabi frequency.
pub fn envelope_value(
    kind: &EnvelopeKind,
    t: f64,
    t_start: f64,
    duration: f64,
    peak: f64,
) -> Result<f64, PulseError> {
    if !t.is_finite() {
        return Err(PulseError::NonFiniteTime(t));
    }
    Ok(value_local(kind, t - t_start, duration, peak))
}

/// Same as [`envelope_value`] on pre-validated local time `t - t_start`.
pub(crate) fn value_local(kind: &EnvelopeKind, local: f64, duration: f64, peak: f64) -> f64 {
    match kind {
        EnvelopeKind::Mesa => {
            if (0.0..=duration).contains(&local) {
                peak
            } else {
                0.0
            }
        }
        EnvelopeKind::SinFourth => {
            if (0.0..=duration).contains(&local) {
                let s = (std::f64::consts::PI * local / duration).sin();
                peak * s * s * s * s
            } else {
                0.0
            }
        }
        EnvelopeKind::Tabulated { samples } => {
            if samples.len() < 2 {
                return 0.0;
            }
            let (t_first, t_last) = (samples[0].0, samples[samples.len() - 1].0);
            if local < t_first || local > t_last {
                return 0.0;
            }
            // Binary search is robust even if the grid drifted by a few ulps.
            let hi = samples
                .partition_point(|&(t, _)| t < local)
                .clamp(1, samples.len() - 1);
            let (t0, w0) = samples[hi - 1];
            let (t1, w1) = samples[hi];
            let frac = (local - t0) / (t1 - t0);
            w0 + frac * (w1 - w0)
        }
    }
}

/// Time-integrated envelope area (the pulse area for a resonant crossing).
pub fn pulse_area(kind: &EnvelopeKind, duration: f64, peak: f64) -> f64 {
    match kind {
        EnvelopeKind::Mesa => peak * duration,
        EnvelopeKind::SinFourth => 0.375 * peak * duration,
        EnvelopeKind::Tabulated { samples } => trapezoid(samples),
    }
}

fn trapezoid(samples: &[(f64, f64)]) -> f64 {
    samples
        .windows(2)
        .map(|p| 0.5 * (p[0].1 + p[1].1) * (p[1].0 - p[0].0))
        .sum()
}
