//! Fringe metrology: locating zeros, measuring widths, mapping the pattern
//! over parameter grids, and checking its periodicity.
//!
//! The probability curves handled here are smooth and cheap to evaluate, so
//! every search is built on a dense uniform prescan followed by a contained
//! refinement — golden-section for minima, bisection for level crossings.
//! Nothing here assumes a particular engine; curves come in as closures.

use crate::analytic::{p12_opposite, OppositeDetuningParams};
use rayon::prelude::*;
use thiserror::Error;

/// A refined minimum must sink below this value to count as a zero of the
/// fringe. True zeros of the closed forms refine to ~1e-25, while false
/// candidates (pedestals, shallow dips) sit orders of magnitude above.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Number of uniform prescan intervals used by the searches.
pub const PRESCAN_SAMPLES: usize = 2000;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("no zero found in (0, {search_max}]")]
    NoZeroFound { search_max: f64 },
    #[error("curve never falls below half its central value on the {side} side within {search_max}")]
    HalfMaxNotBracketed {
        side: &'static str,
        search_max: f64,
    },
    #[error("periodicity is undefined at zero detuning")]
    ZeroDetuning,
    #[error("bad search parameters: {0}")]
    BadGrid(&'static str),
}

/// `n` evenly spaced points covering `[min, max]` inclusive. Midpoints of
/// symmetric ranges land exactly (the offset is computed as one product and
/// one quotient), and the final point is exactly `max`.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    max
                } else {
                    min + (i as f64 * (max - min)) / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn golden_minimum<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if b - a < 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Position of the first zero of `curve` in `(0, search_max]`.
///
/// The curve is prescanned on [`PRESCAN_SAMPLES`] uniform intervals; each
/// local-minimum triple is refined by golden section, in order, and the
/// first refined minimum whose value sinks below [`ZERO_THRESHOLD`] wins.
/// Shallow local minima — pedestals of ensemble averages, envelope dips —
/// are rejected by the threshold rather than mistaken for zeros.
pub fn find_first_zero<F: Fn(f64) -> f64>(
    curve: F,
    search_max: f64,
) -> Result<f64, AnalysisError> {
    if !(search_max.is_finite() && search_max > 0.0) {
        return Err(AnalysisError::BadGrid(
            "search_max must be positive and finite",
        ));
    }
    let n = PRESCAN_SAMPLES;
    let xs: Vec<f64> = (0..=n).map(|i| search_max * i as f64 / n as f64).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| curve(x)).collect();
    for i in 1..n {
        if vs[i] <= vs[i - 1] && vs[i] <= vs[i + 1] {
            let (x, v) = golden_minimum(&curve, xs[i - 1], xs[i + 1]);
            if v <= ZERO_THRESHOLD {
                return Ok(x);
            }
        }
    }
    Err(AnalysisError::NoZeroFound { search_max })
}

fn half_crossing<F: Fn(f64) -> f64>(
    curve: &F,
    half: f64,
    search_max: f64,
    tol: f64,
    side: &'static str,
) -> Result<f64, AnalysisError> {
    let n = PRESCAN_SAMPLES;
    let mut prev = 0.0;
    for i in 1..=n {
        let x = search_max * i as f64 / n as f64;
        if curve(x) < half {
            let (mut lo, mut hi) = (prev, x);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if curve(mid) >= half {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        prev = x;
    }
    Err(AnalysisError::HalfMaxNotBracketed { side, search_max })
}

/// Full width of the central fringe at half its value at zero: the distance
/// between the first crossings of `curve(0) / 2` on either side, each
/// located to within `tol`.
pub fn fwhm<F: Fn(f64) -> f64>(curve: F, search_max: f64, tol: f64) -> Result<f64, AnalysisError> {
    if !(search_max.is_finite() && search_max > 0.0) {
        return Err(AnalysisError::BadGrid(
            "search_max must be positive and finite",
        ));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(AnalysisError::BadGrid("tol must be positive and finite"));
    }
    let half = 0.5 * curve(0.0);
    let right = half_crossing(&curve, half, search_max, tol, "positive")?;
    let mirrored = |x: f64| curve(-x);
    let left = half_crossing(&mirrored, half, search_max, tol, "negative")?;
    Ok(right + left)
}

/// Summary numbers of a fringe pattern around its center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FringeMetrics {
    /// Value at zero detuning.
    pub peak: f64,
    /// First zero at positive detuning.
    pub first_zero_pos: f64,
    /// First zero at negative detuning (a negative number).
    pub first_zero_neg: f64,
    /// Full width at half the central value.
    pub fwhm: f64,
}

/// Measure peak, flanking zeros, and width of a fringe curve in one pass.
pub fn fringe_metrics<F: Fn(f64) -> f64>(
    curve: F,
    search_max: f64,
    tol: f64,
) -> Result<FringeMetrics, AnalysisError> {
    let peak = curve(0.0);
    let first_zero_pos = find_first_zero(&curve, search_max)?;
    let first_zero_neg = -find_first_zero(|x| curve(-x), search_max)?;
    let width = fwhm(curve, search_max, tol)?;
    Ok(FringeMetrics {
        peak,
        first_zero_pos,
        first_zero_neg,
        fwhm: width,
    })
}

/// A fringe sampled on a detuning grid, with a free-form label describing
/// how it was produced.
#[derive(Clone, Debug, PartialEq)]
pub struct FringeScan {
    pub detunings: Vec<f64>,
    pub values: Vec<f64>,
    pub metadata: String,
}

impl FringeScan {
    /// Evaluate `curve` on the given grid.
    pub fn compute<F: Fn(f64) -> f64>(
        detunings: Vec<f64>,
        curve: F,
        metadata: impl Into<String>,
    ) -> Self {
        let values = detunings.iter().map(|&d| curve(d)).collect();
        Self {
            detunings,
            values,
            metadata: metadata.into(),
        }
    }
}

/// Probability sampled over an entrance-time x detuning grid; one row per
/// entrance time.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourGrid {
    pub t0_values: Vec<f64>,
    pub detunings: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

/// Fill a contour grid in parallel. Cells are computed independently with
/// rayon and collected in index order, so the result is identical for any
/// thread count; the first cell error, if any, aborts the grid.
pub fn contour_grid<E, F>(
    t0_values: &[f64],
    detunings: &[f64],
    cell: F,
) -> Result<ContourGrid, E>
where
    F: Fn(f64, f64) -> Result<f64, E> + Sync,
    E: Send,
{
    if t0_values.is_empty() || detunings.is_empty() {
        return Ok(ContourGrid {
            t0_values: t0_values.to_vec(),
            detunings: detunings.to_vec(),
            values: vec![Vec::new(); t0_values.len()],
        });
    }
    let cols = detunings.len();
    let flat: Result<Vec<f64>, E> = (0..t0_values.len() * cols)
        .into_par_iter()
        .map(|idx| cell(t0_values[idx / cols], detunings[idx % cols]))
        .collect();
    let values = flat?.chunks(cols).map(<[f64]>::to_vec).collect();
    Ok(ContourGrid {
        t0_values: t0_values.to_vec(),
        detunings: detunings.to_vec(),
        values,
    })
}

/// Result of sampling the fringe against its expected entrance-time period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicityReport {
    pub period: f64,
    pub max_residual: f64,
    pub samples: usize,
}

/// Verify that the opposite-detuning fringe repeats when the entrance time
/// advances by `pi / |detuning|`. Samples one period's worth of entrance
/// times starting at `base.entrance` and compares each against the next
/// three repetitions, reporting the worst disagreement.
pub fn periodicity_check(
    base: &OppositeDetuningParams,
    samples: usize,
) -> Result<PeriodicityReport, AnalysisError> {
    if base.detuning == 0.0 {
        return Err(AnalysisError::ZeroDetuning);
    }
    if samples < 2 {
        return Err(AnalysisError::BadGrid("need at least two samples"));
    }
    let period = std::f64::consts::PI / base.detuning.abs();
    let mut max_residual = 0.0f64;
    for i in 0..samples {
        let t0 = base.entrance + period * i as f64 / samples as f64;
        let reference = p12_opposite(&OppositeDetuningParams {
            entrance: t0,
            ..*base
        });
        for lap in 1..=3 {
            let shifted = p12_opposite(&OppositeDetuningParams {
                entrance: t0 + lap as f64 * period,
                ..*base
            });
            max_residual = max_residual.max((shifted - reference).abs());
        }
    }
    Ok(PeriodicityReport {
        period,
        max_residual,
        samples,
    })
}
