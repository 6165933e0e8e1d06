//! Configuration schema and subcommand entry points for the `ramsey` binary.
//!
//! Every subcommand renders its result as CSV with `#`-prefixed comment
//! lines: a title line, a `# config: {...}` stamp of the effective physics
//! configuration (runtime details like thread counts are deliberately not
//! stamped), then the data. Cells are computed in parallel with rayon but
//! assembled in index order and formatted with the shortest round-trip
//! float representation, so a given configuration produces byte-identical
//! output on every run at any thread count.
//!
//! Exit-code contract of the binary: 0 on success, 1 for configuration
//! problems (unreadable or invalid config, incompatible engine/envelope
//! combinations, bad sweep grids), 2 for domain failures in an otherwise
//! valid run (step-size or unitarity violations, quadrature windows reaching
//! unphysical wavenumbers, curves without the requested feature).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{contour_grid, fringe_metrics, linspace, AnalysisError};
use crate::analytic::{central_zero_estimate, two_pulse_state, AnalyticError, OppositeDetuningParams};
use crate::core::{ConfigError, SequenceConfig};
use crate::ensemble::{
    averaged_p12_closed_with, averaged_p12_quadrature_with, EnsembleError, PhaseSpaceGaussian,
    QuadratureSpec, SpatialConfig,
};
use crate::numeric::{p12_numeric, IntegratorParams, NumericError, PictureTag};
use crate::pulses::EnvelopeKind;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    /// Process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<AnalyticError> for CliError {
    fn from(e: AnalyticError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::InvalidSequence(inner) => CliError::Config(inner.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<EnsembleError> for CliError {
    fn from(e: EnsembleError) -> Self {
        match e {
            EnsembleError::Domain { .. } => CliError::Domain(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::BadGrid(_) => CliError::Config(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

/// Which evaluator produces the probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Closed-form propagators; flat-top envelopes only.
    #[default]
    Analytic,
    /// RK4 integration; any envelope, any interaction picture.
    Numeric,
    /// Wavepacket average over a Gaussian beam.
    Ensemble,
}

/// Command-line spelling of the interaction pictures, kept separate so the
/// integration module carries no CLI dependencies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PictureChoice {
    I1,
    I2,
    I3,
}

impl From<PictureChoice> for PictureTag {
    fn from(choice: PictureChoice) -> Self {
        match choice {
            PictureChoice::I1 => PictureTag::I1,
            PictureChoice::I2 => PictureTag::I2,
            PictureChoice::I3 => PictureTag::I3,
        }
    }
}

/// How the swept detuning is split between the two pulses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DetuningMode {
    /// Pulse 1 at `-delta`, pulse 2 at `+delta`: the entrance-time-sensitive
    /// arrangement.
    #[default]
    Opposite,
    /// Both pulses at `+delta`: the ordinary separated-fields fringe.
    Equal,
}

/// Beam and quadrature parameters for the ensemble engine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSection {
    /// Mean wavenumber of the packet.
    pub k_mean: f64,
    /// Wavenumber spread; the position spread follows from dx = 1/(2 dk).
    pub dk: f64,
    /// Length of each field region.
    pub field_length: f64,
    /// Field-free distance between the regions.
    pub gap_length: f64,
    /// Peak Rabi frequency; omit to get a quarter flip per region for the
    /// mean wavenumber.
    pub rabi: Option<f64>,
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub window_sigmas: f64,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        Self {
            k_mean: 1.0,
            dk: 0.1,
            field_length: 1.0,
            gap_length: 5.0,
            rabi: None,
            panels: 8,
            nodes_per_panel: 32,
            window_sigmas: 8.0,
        }
    }
}

/// Step control for the numeric engine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSection {
    /// RK4 step; omit to derive one from each swept sequence's own time
    /// scales.
    pub step: Option<f64>,
    pub max_defect: f64,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self {
            step: None,
            max_defect: 1e-9,
        }
    }
}

/// Grids swept by the subcommands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub delta_min: f64,
    pub delta_max: f64,
    pub delta_points: usize,
    /// Entrance times for the block-per-time subcommands (`fringe`,
    /// `ensemble`, `width`, `pulse`).
    pub t0_values: Vec<f64>,
    /// Entrance-time axis of the `contour` subcommand.
    pub t0_min: f64,
    pub t0_max: f64,
    pub t0_points: usize,
    pub detuning_mode: DetuningMode,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            delta_min: -8.0,
            delta_max: 8.0,
            delta_points: 321,
            t0_values: vec![0.0, 5.0, 10.0],
            t0_min: 0.0,
            t0_max: 10.0,
            t0_points: 41,
            detuning_mode: DetuningMode::Opposite,
        }
    }
}

/// Everything a run needs, loadable from a JSON file. Any subset of fields
/// may be given; the rest take the defaults below. Unknown keys are
/// rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sequence: SequenceConfig,
    pub ensemble: EnsembleSection,
    pub integrator: IntegratorSection,
    pub sweep: SweepSection,
    pub engine: Engine,
    pub picture: PictureTag,
    /// Rayon thread count; omit or 0 for one thread per core. Results do
    /// not depend on this.
    pub threads: Option<usize>,
    /// Output file; omit to write to stdout.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sequence: SequenceConfig::default(),
            ensemble: EnsembleSection::default(),
            integrator: IntegratorSection::default(),
            sweep: SweepSection::default(),
            engine: Engine::Analytic,
            picture: PictureTag::I1,
            threads: None,
            output: None,
        }
    }
}

/// The part of the configuration that determines the numbers, serialized
/// into every output header. Thread count and output path are excluded on
/// purpose: files produced by different runners must compare equal.
#[derive(Serialize)]
struct ConfigStamp<'a> {
    sequence: &'a SequenceConfig,
    ensemble: &'a EnsembleSection,
    integrator: &'a IntegratorSection,
    sweep: &'a SweepSection,
    engine: Engine,
    picture: PictureTag,
}

fn config_stamp(config: &RunConfig) -> Result<String, CliError> {
    serde_json::to_string(&ConfigStamp {
        sequence: &config.sequence,
        ensemble: &config.ensemble,
        integrator: &config.integrator,
        sweep: &config.sweep,
        engine: config.engine,
        picture: config.picture,
    })
    .map_err(|e| CliError::Config(format!("cannot serialize configuration: {e}")))
}

/// Read a [`RunConfig`] from a JSON file, or produce the defaults when no
/// path is given.
pub fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
}

#[derive(Parser, Debug)]
#[command(
    name = "ramsey",
    version,
    about = "Fringes of a two-level atom crossing two separated oscillating fields",
    long_about = "Simulates a two-level atom driven by two spatially separated oscillating \
                  fields with independently chosen detunings and phases. Oppositely detuned \
                  fields make the fringe pattern depend on the atom's entrance time, and the \
                  central fringe narrows as that time grows; the subcommands map this out for \
                  point atoms, Gaussian wavepackets, and smooth pulse envelopes."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON configuration file; defaults apply for anything omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Override the configured engine.
    #[arg(long, global = true, value_enum)]
    pub engine: Option<Engine>,
    /// Override the configured interaction picture (numeric engine).
    #[arg(long, global = true, value_enum)]
    pub picture: Option<PictureChoice>,
    /// Worker threads; 0 or omitted means one per core. Output bytes do not
    /// depend on this.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Cross-check mode: the ensemble engine averages by direct phase-space
    /// quadrature instead of the closed form.
    #[arg(long, global = true)]
    pub oracle: bool,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Probability vs detuning, one block per entrance time.
    Fringe,
    /// Probability on the full entrance-time x detuning grid.
    Contour,
    /// Wavepacket-averaged probability vs detuning (forces the ensemble
    /// engine).
    Ensemble,
    /// Peak, first zeros, width, and the quick zero estimate per entrance
    /// time (closed forms).
    Width,
    /// Fringe under smooth pulses: flat-top envelopes are swapped for sin^4
    /// and the run is integrated numerically.
    Pulse,
}

fn apply_overrides(config: &mut RunConfig, cli: &Cli) {
    if let Some(engine) = cli.engine {
        config.engine = engine;
    }
    if let Some(picture) = cli.picture {
        config.picture = picture.into();
    }
    if let Some(threads) = cli.threads {
        config.threads = Some(threads);
    }
    if let Some(out) = &cli.out {
        config.output = Some(out.clone());
    }
}

/// Parse the configuration, apply flag overrides, run the subcommand on a
/// dedicated thread pool, and deliver the output to the configured
/// destination.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut config = load_config(cli.config.as_deref())?;
    apply_overrides(&mut config, cli);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;
    let text = pool.install(|| match cli.command {
        Command::Fringe => cmd_fringe(&config, cli.oracle),
        Command::Contour => cmd_contour(&config, cli.oracle),
        Command::Ensemble => cmd_ensemble(&config, cli.oracle),
        Command::Width => cmd_width(&config),
        Command::Pulse => cmd_pulse(&config, cli.oracle),
    })?;
    match &config.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn checked_deltas(sweep: &SweepSection) -> Result<Vec<f64>, CliError> {
    if !(sweep.delta_min.is_finite() && sweep.delta_max.is_finite()) {
        return Err(CliError::Config("sweep detuning bounds must be finite".into()));
    }
    if sweep.delta_min > sweep.delta_max {
        return Err(CliError::Config(
            "sweep.delta_min must not exceed sweep.delta_max".into(),
        ));
    }
    if sweep.delta_points == 0 {
        return Err(CliError::Config("sweep.delta_points must be at least 1".into()));
    }
    Ok(linspace(sweep.delta_min, sweep.delta_max, sweep.delta_points))
}

fn checked_t0_values(sweep: &SweepSection) -> Result<&[f64], CliError> {
    if sweep.t0_values.is_empty() {
        return Err(CliError::Config("sweep.t0_values must not be empty".into()));
    }
    if sweep.t0_values.iter().any(|t| !t.is_finite()) {
        return Err(CliError::Config("sweep.t0_values must be finite".into()));
    }
    Ok(&sweep.t0_values)
}

fn checked_t0_axis(sweep: &SweepSection) -> Result<Vec<f64>, CliError> {
    if !(sweep.t0_min.is_finite() && sweep.t0_max.is_finite()) {
        return Err(CliError::Config("sweep entrance-time bounds must be finite".into()));
    }
    if sweep.t0_min > sweep.t0_max {
        return Err(CliError::Config(
            "sweep.t0_min must not exceed sweep.t0_max".into(),
        ));
    }
    if sweep.t0_points == 0 {
        return Err(CliError::Config("sweep.t0_points must be at least 1".into()));
    }
    Ok(linspace(sweep.t0_min, sweep.t0_max, sweep.t0_points))
}

fn set_detunings(seq: &mut SequenceConfig, mode: DetuningMode, delta: f64) {
    match mode {
        DetuningMode::Opposite => {
            seq.pulse1.detuning = -delta;
            seq.pulse2.detuning = delta;
        }
        DetuningMode::Equal => {
            seq.pulse1.detuning = delta;
            seq.pulse2.detuning = delta;
        }
    }
}

type Cell<'a> = Box<dyn Fn(f64, f64) -> Result<f64, CliError> + Sync + 'a>;

/// Build the `(entrance time, detuning) -> probability` evaluator for the
/// configured engine, checking engine-specific requirements up front.
fn make_cell(config: &RunConfig, oracle: bool) -> Result<Cell<'_>, CliError> {
    config.sequence.validate()?;
    let mode = config.sweep.detuning_mode;
    match config.engine {
        Engine::Analytic => {
            if config.sequence.pulse1.envelope != EnvelopeKind::Mesa
                || config.sequence.pulse2.envelope != EnvelopeKind::Mesa
            {
                return Err(CliError::Config(
                    "the analytic engine handles flat-top (mesa) envelopes only; \
                     use --engine numeric for shaped pulses"
                        .into(),
                ));
            }
            Ok(Box::new(move |t0, delta| {
                let mut seq = config.sequence.clone().with_entrance_time(t0);
                set_detunings(&mut seq, mode, delta);
                let state = two_pulse_state(&seq)?;
                Ok(state.excited_population().clamp(0.0, 1.0))
            }))
        }
        Engine::Numeric => {
            let picture = config.picture;
            let section = config.integrator;
            Ok(Box::new(move |t0, delta| {
                let mut seq = config.sequence.clone().with_entrance_time(t0);
                set_detunings(&mut seq, mode, delta);
                let params = match section.step {
                    Some(step) => IntegratorParams {
                        step,
                        max_defect: section.max_defect,
                    },
                    None => IntegratorParams {
                        max_defect: section.max_defect,
                        ..IntegratorParams::for_sequence(&seq)
                    },
                };
                Ok(p12_numeric(picture, &seq, &params)?)
            }))
        }
        Engine::Ensemble => {
            if mode != DetuningMode::Opposite {
                return Err(CliError::Config(
                    "the ensemble engine averages the opposite-detuning fringe; \
                     set sweep.detuning_mode = \"opposite\""
                        .into(),
                ));
            }
            let section = &config.ensemble;
            let dist = PhaseSpaceGaussian::from_dk(section.k_mean, section.dk)?;
            let constants = config.sequence.constants;
            let spatial = SpatialConfig {
                field_length: section.field_length,
                gap_length: section.gap_length,
                rabi: section.rabi.unwrap_or_else(|| {
                    SpatialConfig::quarter_flip_rabi(
                        section.k_mean,
                        section.field_length,
                        &constants,
                    )
                }),
                constants,
            };
            spatial.validate()?;
            let spec = QuadratureSpec {
                panels: section.panels,
                nodes_per_panel: section.nodes_per_panel,
                window_sigmas: section.window_sigmas,
            };
            Ok(Box::new(move |t0_center, delta| {
                let p = if oracle {
                    averaged_p12_quadrature_with(delta, t0_center, &dist, &spatial, &spec)?
                } else {
                    averaged_p12_closed_with(delta, t0_center, &dist, &spatial, &spec)?
                };
                Ok(p)
            }))
        }
    }
}

/// Shared body of the block-per-entrance-time subcommands.
fn fringe_blocks(title: &str, config: &RunConfig, oracle: bool) -> Result<String, CliError> {
    let deltas = checked_deltas(&config.sweep)?;
    let t0_values = checked_t0_values(&config.sweep)?;
    let cell = make_cell(config, oracle)?;
    let (t0_label, value_label) = match config.engine {
        Engine::Ensemble => ("t0_center", "p12_avg"),
        _ => ("t0", "p12"),
    };
    let mut out = String::new();
    let _ = writeln!(out, "# ramsey {title}");
    let _ = writeln!(out, "# config: {}", config_stamp(config)?);
    for (block, &t0) in t0_values.iter().enumerate() {
        if block > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "# {t0_label} = {t0}");
        let _ = writeln!(out, "# delta,{value_label}");
        let values: Result<Vec<f64>, CliError> =
            deltas.par_iter().map(|&d| cell(t0, d)).collect();
        for (delta, value) in deltas.iter().zip(values?) {
            let _ = writeln!(out, "{delta},{value}");
        }
    }
    Ok(out)
}

/// Probability vs detuning, one block per entrance time, with the
/// configured engine.
pub fn cmd_fringe(config: &RunConfig, oracle: bool) -> Result<String, CliError> {
    fringe_blocks("fringe", config, oracle)
}

/// Probability over the full entrance-time x detuning grid. Row = entrance
/// time, column = detuning.
pub fn cmd_contour(config: &RunConfig, oracle: bool) -> Result<String, CliError> {
    let deltas = checked_deltas(&config.sweep)?;
    let t0_axis = checked_t0_axis(&config.sweep)?;
    let cell = make_cell(config, oracle)?;
    let grid = contour_grid(&t0_axis, &deltas, cell)?;
    let mut out = String::new();
    let _ = writeln!(out, "# ramsey contour");
    let _ = writeln!(out, "# config: {}", config_stamp(config)?);
    let mut header = String::from("# t0\\delta");
    for delta in &grid.detunings {
        let _ = write!(header, ",{delta}");
    }
    let _ = writeln!(out, "{header}");
    for (t0, row) in grid.t0_values.iter().zip(&grid.values) {
        let mut line = format!("{t0}");
        for value in row {
            let _ = write!(line, ",{value}");
        }
        let _ = writeln!(out, "{line}");
    }
    Ok(out)
}

/// Wavepacket-averaged fringe; forces the ensemble engine regardless of the
/// configured one.
pub fn cmd_ensemble(config: &RunConfig, oracle: bool) -> Result<String, CliError> {
    let mut config = config.clone();
    config.engine = Engine::Ensemble;
    fringe_blocks("ensemble", &config, oracle)
}

/// Fringe metrology per entrance time, from the closed forms: central value,
/// flanking zeros, width at half maximum, and the quick estimate
/// `2 / (gap + 2 (t0 + tau))` of the first zero with its ratio to the found
/// one.
pub fn cmd_width(config: &RunConfig) -> Result<String, CliError> {
    config.sequence.validate()?;
    if config.sweep.detuning_mode != DetuningMode::Opposite {
        return Err(CliError::Config(
            "width metrology is defined for the opposite-detuning fringe; \
             set sweep.detuning_mode = \"opposite\""
                .into(),
        ));
    }
    let base = OppositeDetuningParams::from_sequence(&config.sequence)?;
    let t0_values = checked_t0_values(&config.sweep)?;
    let search_max = config.sweep.delta_max;
    if !(search_max.is_finite() && search_max > 0.0) {
        return Err(CliError::Config(
            "width searches up to sweep.delta_max, which must be positive".into(),
        ));
    }
    let tol = search_max * 1e-12;
    let rows: Result<Vec<String>, CliError> = t0_values
        .par_iter()
        .map(|&t0| {
            let curve = |delta: f64| {
                crate::analytic::p12_opposite(&OppositeDetuningParams {
                    detuning: delta,
                    entrance: t0,
                    ..base
                })
            };
            let m = fringe_metrics(curve, search_max, tol)?;
            let estimate = central_zero_estimate(base.tau, base.gap, t0);
            let ratio = estimate / m.first_zero_pos;
            Ok(format!(
                "{t0},{},{},{},{},{estimate},{ratio}",
                m.peak, m.first_zero_pos, m.first_zero_neg, m.fwhm
            ))
        })
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "# ramsey width");
    let _ = writeln!(out, "# config: {}", config_stamp(config)?);
    let _ = writeln!(
        out,
        "# t0,peak,first_zero_pos,first_zero_neg,fwhm,zero_estimate,estimate_ratio"
    );
    for row in rows? {
        let _ = writeln!(out, "{row}");
    }
    Ok(out)
}

/// Fringe under smooth pulses: any flat-top envelope in the sequence is
/// replaced by sin^4 (explicit tabulated envelopes are kept) and the run is
/// integrated numerically.
pub fn cmd_pulse(config: &RunConfig, oracle: bool) -> Result<String, CliError> {
    let mut config = config.clone();
    config.engine = Engine::Numeric;
    for pulse in [&mut config.sequence.pulse1, &mut config.sequence.pulse2] {
        if pulse.envelope == EnvelopeKind::Mesa {
            pulse.envelope = EnvelopeKind::SinFourth;
        }
    }
    fringe_blocks("pulse", &config, oracle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::p12_general;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn small_sweep() -> SweepSection {
        SweepSection {
            delta_min: -0.6,
            delta_max: 0.6,
            delta_points: 7,
            t0_values: vec![0.0, 10.0],
            t0_min: 0.0,
            t0_max: 10.0,
            t0_points: 3,
            ..SweepSection::default()
        }
    }

    #[test]
    fn empty_json_gives_the_default_config() {
        let parsed: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(parsed, RunConfig::default());
        assert_eq!(load_config(None).unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>("{\"detuning\": 1.0}").is_err());
        assert!(serde_json::from_str::<RunConfig>("{\"sweep\": {\"deltamax\": 1.0}}").is_err());
    }

    #[test]
    fn partial_configs_fill_in_defaults() {
        let parsed: RunConfig =
            serde_json::from_str("{\"engine\": \"numeric\", \"sweep\": {\"delta_points\": 5}}")
                .unwrap();
        assert_eq!(parsed.engine, Engine::Numeric);
        assert_eq!(parsed.sweep.delta_points, 5);
        assert_eq!(parsed.sweep.delta_min, -8.0);
        assert_eq!(parsed.picture, PictureTag::I1);
    }

    #[test]
    fn fringe_output_shape_and_values() {
        let config = RunConfig {
            sweep: small_sweep(),
            ..RunConfig::default()
        };
        let text = cmd_fringe(&config, false).unwrap();
        assert!(text.starts_with("# ramsey fringe\n# config: {"));
        assert!(text.contains("# t0 = 0\n# delta,p12\n"));
        assert!(text.contains("\n\n# t0 = 10\n# delta,p12\n"));
        // Center row of the first block carries the resonant peak.
        assert!(text.contains("\n0,1\n"));
        // Spot-check one off-center value against the closed form.
        let expected = p12_general(0.6, -0.6, PI / 2.0, 1.0, 5.0, 0.0);
        let line = text
            .lines()
            .find(|l| l.starts_with("-0.6,"))
            .expect("row for delta = -0.6");
        let got: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_abs_diff_eq!(got, expected, epsilon = 1e-13);
    }

    #[test]
    fn engines_agree_on_the_fringe_output_grid() {
        let analytic = RunConfig {
            sweep: SweepSection {
                delta_points: 5,
                t0_values: vec![2.0],
                ..small_sweep()
            },
            ..RunConfig::default()
        };
        let numeric = RunConfig {
            engine: Engine::Numeric,
            ..analytic.clone()
        };
        let a = cmd_fringe(&analytic, false).unwrap();
        let n = cmd_fringe(&numeric, false).unwrap();
        let parse = |text: &str| -> Vec<(f64, f64)> {
            text.lines()
                .filter(|l| !l.starts_with('#') && !l.is_empty())
                .map(|l| {
                    let mut parts = l.split(',');
                    (
                        parts.next().unwrap().parse().unwrap(),
                        parts.next().unwrap().parse().unwrap(),
                    )
                })
                .collect()
        };
        for ((da, pa), (dn, pn)) in parse(&a).into_iter().zip(parse(&n)) {
            assert_eq!(da, dn);
            assert_abs_diff_eq!(pa, pn, epsilon = 1e-8);
        }
    }

    #[test]
    fn contour_layout_matches_the_grids() {
        let config = RunConfig {
            sweep: small_sweep(),
            ..RunConfig::default()
        };
        let text = cmd_contour(&config, false).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# ramsey contour"));
        assert!(lines.next().unwrap().starts_with("# config: {"));
        let header = lines.next().unwrap();
        assert!(header.starts_with("# t0\\delta,-0.6,"));
        assert_eq!(header.split(',').count(), 8);
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].starts_with("0,"));
        assert!(rows[2].starts_with("10,"));
    }

    #[test]
    fn ensemble_blocks_are_labeled_for_the_packet_center() {
        let config = RunConfig {
            sweep: SweepSection {
                delta_min: -0.2,
                delta_max: 0.2,
                delta_points: 3,
                t0_values: vec![0.0],
                ..SweepSection::default()
            },
            ..RunConfig::default()
        };
        let text = cmd_ensemble(&config, false).unwrap();
        assert!(text.starts_with("# ramsey ensemble\n"));
        assert!(text.contains("\"engine\":\"ensemble\""));
        assert!(text.contains("# t0_center = 0\n# delta,p12_avg\n"));
        // The resonant average sags slightly below one.
        let peak: f64 = text
            .lines()
            .find(|l| l.starts_with("0,"))
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert!(peak > 0.9 && peak < 1.0);
        // The oracle path agrees closely but not bit-for-bit.
        let oracle = cmd_ensemble(&config, true).unwrap();
        let peak_oracle: f64 = oracle
            .lines()
            .find(|l| l.starts_with("0,"))
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert_abs_diff_eq!(peak, peak_oracle, epsilon = 1e-6);
    }

    #[test]
    fn width_rows_carry_the_narrowing_and_the_estimate_ratio() {
        let config = RunConfig {
            sweep: SweepSection {
                delta_max: 1.0,
                t0_values: vec![0.0, 10.0],
                ..SweepSection::default()
            },
            ..RunConfig::default()
        };
        let text = cmd_width(&config).unwrap();
        assert!(text.contains(
            "# t0,peak,first_zero_pos,first_zero_neg,fwhm,zero_estimate,estimate_ratio"
        ));
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        let first: Vec<f64> = rows[0].split(',').map(|v| v.parse().unwrap()).collect();
        let later: Vec<f64> = rows[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_abs_diff_eq!(first[2], PI / 7.0, epsilon = 1e-9);
        assert_abs_diff_eq!(later[2], PI / 27.0, epsilon = 1e-9);
        assert!(later[4] < first[4], "width must narrow");
        assert_abs_diff_eq!(first[6], 2.0 / PI, epsilon = 1e-9);
        assert_abs_diff_eq!(first[5], 2.0 / 7.0, epsilon = 1e-12);
    }

    #[test]
    fn pulse_swaps_mesa_for_sin_fourth_and_integrates() {
        let config = RunConfig {
            sweep: SweepSection {
                delta_min: -0.3,
                delta_max: 0.3,
                delta_points: 3,
                t0_values: vec![0.0],
                ..SweepSection::default()
            },
            ..RunConfig::default()
        };
        let text = cmd_pulse(&config, false).unwrap();
        assert!(text.starts_with("# ramsey pulse\n"));
        assert!(text.contains("\"envelope\":\"sin_fourth\""));
        assert!(text.contains("\"engine\":\"numeric\""));
        // Resonant transfer under two sin^4 quarter-amplitude pulses.
        let expected = (0.375 * PI / 2.0).sin().powi(2);
        let peak: f64 = text
            .lines()
            .find(|l| l.starts_with("0,"))
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert_abs_diff_eq!(peak, expected, epsilon = 1e-9);
    }

    #[test]
    fn incompatible_engine_and_envelope_is_a_config_error() {
        let mut config = RunConfig::default();
        config.sequence.pulse1.envelope = EnvelopeKind::SinFourth;
        config.sequence.pulse2.envelope = EnvelopeKind::SinFourth;
        let err = cmd_fringe(&config, false).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn oversized_steps_are_domain_errors() {
        let config = RunConfig {
            engine: Engine::Numeric,
            integrator: IntegratorSection {
                step: Some(0.5),
                max_defect: 1e-9,
            },
            sweep: SweepSection {
                delta_points: 3,
                t0_values: vec![0.0],
                ..small_sweep()
            },
            ..RunConfig::default()
        };
        let err = cmd_fringe(&config, false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn quadrature_window_below_zero_is_a_domain_error() {
        let config = RunConfig {
            ensemble: EnsembleSection {
                window_sigmas: 20.0,
                ..EnsembleSection::default()
            },
            sweep: SweepSection {
                delta_points: 3,
                t0_values: vec![0.0],
                ..small_sweep()
            },
            ..RunConfig::default()
        };
        let err = cmd_ensemble(&config, false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn bad_sweeps_are_config_errors() {
        let mut config = RunConfig::default();
        config.sweep.delta_points = 0;
        assert_eq!(cmd_fringe(&config, false).unwrap_err().exit_code(), 1);
        let mut config = RunConfig::default();
        config.sweep.t0_values.clear();
        assert_eq!(cmd_fringe(&config, false).unwrap_err().exit_code(), 1);
        let mut config = RunConfig::default();
        config.sweep.delta_min = 3.0;
        config.sweep.delta_max = -3.0;
        assert_eq!(cmd_contour(&config, false).unwrap_err().exit_code(), 1);
        let mut config = RunConfig::default();
        config.sweep.detuning_mode = DetuningMode::Equal;
        assert_eq!(cmd_width(&config).unwrap_err().exit_code(), 1);
        assert_eq!(cmd_ensemble(&config, false).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn equal_mode_sweeps_ignore_the_entrance_time() {
        let config = RunConfig {
            sweep: SweepSection {
                detuning_mode: DetuningMode::Equal,
                ..small_sweep()
            },
            ..RunConfig::default()
        };
        let text = cmd_fringe(&config, false).unwrap();
        let blocks: Vec<&str> = text.split("\n\n").collect();
        assert_eq!(blocks.len(), 2);
        let values = |block: &str| -> Vec<f64> {
            block
                .lines()
                .filter(|l| !l.starts_with('#') && !l.is_empty())
                .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
                .collect()
        };
        // The matrix route carries entrance-time phases that only cancel
        // analytically, so compare to roundoff rather than bitwise.
        for (a, b) in values(blocks[0]).into_iter().zip(values(blocks[1])) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn output_is_identical_across_thread_counts() {
        let config = RunConfig {
            engine: Engine::Numeric,
            sweep: SweepSection {
                delta_points: 5,
                t0_values: vec![0.0, 3.0],
                ..small_sweep()
            },
            ..RunConfig::default()
        };
        let render = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| cmd_fringe(&config, false).unwrap())
        };
        assert_eq!(render(1), render(8));
    }
}
