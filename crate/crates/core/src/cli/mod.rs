//! Command-line front end.
//!
//! `wavelab dispersion|profile|paths|verify [--config FILE] [--out DIR]
//! [--format csv,json,svg]`. Exit codes: 0 success, 1 failed verification,
//! 2 configuration error, 3 I/O error.

pub mod config;
pub mod output;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::WaveError;
use crate::gerstner::{surface_profile, LagrangianLabel};
use crate::params::{derive_constants, dispersion_residual, GerstnerParams};
use crate::pathtrace::{trace_orbit, OrbitDiagnostics, RefinementLevel, TraceOptions};
use config::{Format, ParticleSeed, RunConfig};
use output::{csv_table, json_bytes, svg_polyline, write_atomic};
use suite::{run_suite, CheckRecord, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "WAVELAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "wavelab", version, about = "Exact equatorial water waves: construction and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print c, alpha, A and m for the configured wave as JSON.
    Dispersion(CommonArgs),
    /// Write the free-surface profile over one wavelength.
    Profile(CommonArgs),
    /// Trace the configured particles and write their orbit diagnostics.
    Paths(CommonArgs),
    /// Run the full verification suite and write a report.
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON configuration; defaults run the canonical wave.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding the configuration.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated output formats, overriding the configuration.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "configuration error: {m}"),
            Self::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

fn config_err(e: WaveError) -> CliError {
    CliError::Config(e.to_string())
}

/// Loads the configuration and applies the command-line overrides.
pub fn resolve_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = RunConfig::load(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text).map_err(config_err)?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = &args.out {
        cfg.output.dir = out.clone();
    }
    if let Some(formats) = &args.format {
        cfg.output.formats = formats.clone();
    }
    Ok(cfg)
}

/// Sizes the global thread pool from [`THREADS_ENV`]; unset leaves the
/// hardware default.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    // A pool built earlier in the same process keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Payload of `wavelab dispersion`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionReport {
    pub k: f64,
    pub omega: f64,
    pub g: f64,
    pub c: f64,
    pub alpha: f64,
    #[serde(rename = "A")]
    pub slope: f64,
    pub m: f64,
    pub residual: f64,
}

pub fn dispersion_report(cfg: &RunConfig) -> Result<DispersionReport, CliError> {
    let prm = cfg.gerstner_params().map_err(config_err)?;
    let d = derive_constants(prm.k, prm.c, &cfg.constants).map_err(config_err)?;
    Ok(DispersionReport {
        k: prm.k,
        omega: cfg.constants.omega,
        g: cfg.constants.g,
        c: prm.c,
        alpha: d.alpha,
        slope: d.slope,
        m: d.m,
        residual: dispersion_residual(prm.k, prm.c, &cfg.constants),
    })
}

/// Prints the constants; writes `dispersion.json` only when `--out` is given.
pub fn cmd_dispersion(cfg: &RunConfig, write: bool, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let report = dispersion_report(cfg)?;
    let bytes = json_bytes(&report)?;
    stdout.write_all(&bytes)?;
    if write && cfg.output.wants(Format::Json) {
        write_atomic(&cfg.output.dir, "dispersion.json", &bytes)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileSummary {
    pub k: f64,
    pub b0: f64,
    pub h0: f64,
    pub samples: usize,
    pub wavelength: f64,
    /// The profile continues periodically with period `wavelength`.
    pub periodic: bool,
    /// Trochoid (`b0 < 0`) or cycloid (`b0 = 0`).
    pub curve: &'static str,
    /// Samples with a vertical tangent.
    pub cusp_indices: Vec<usize>,
    pub crest_to_trough: f64,
    pub min_stretch: f64,
}

fn gerstner_only(cfg: &RunConfig, what: &str) -> Result<GerstnerParams, CliError> {
    if cfg.laminar.is_some() {
        return Err(CliError::Config(format!("{what} needs a Gerstner configuration, not a laminar one")));
    }
    cfg.gerstner_params().map_err(config_err)
}

pub fn cmd_profile(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let prm = gerstner_only(cfg, "profile")?;
    let n = cfg.grid.surface_samples;
    let lambda = prm.wavelength();
    let a: Vec<f64> = (0..n).map(|i| lambda * i as f64 / n as f64).collect();
    let prof = surface_profile(0.0, &a, &prm).map_err(config_err)?;
    let summary = ProfileSummary {
        k: prm.k,
        b0: prm.b0,
        h0: prm.h0,
        samples: n,
        wavelength: lambda,
        periodic: true,
        curve: if prm.is_cusped() { "cycloid" } else { "trochoid" },
        cusp_indices: prof.cusps.clone(),
        crest_to_trough: prof.crest_to_trough(),
        min_stretch: prof.min_stretch(),
    };
    let dir = &cfg.output.dir;
    let mut written = Vec::new();
    if cfg.output.wants(Format::Csv) {
        let rows = prof.points.iter().map(|&(x, z)| vec![x, z]);
        written.push(write_atomic(dir, "profile.csv", &csv_table(&["X", "Z"], rows)?)?);
    }
    if cfg.output.wants(Format::Json) {
        written.push(write_atomic(dir, "profile.json", &json_bytes(&summary)?)?);
    }
    if cfg.output.wants(Format::Svg) {
        let title = format!("{} profile, k = {}, b0 = {}", summary.curve, prm.k, prm.b0);
        written.push(write_atomic(dir, "profile.svg", svg_polyline(&prof.points, &prof.cusps, &title).as_bytes())?);
    }
    report_written(stdout, &written)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ParticleOutcome {
    Ok {
        index: usize,
        seed: ParticleSeed,
        label: LagrangianLabel,
        center: (f64, f64),
        radius: f64,
        period: f64,
        diagnostics: OrbitDiagnostics,
        levels: Vec<RefinementLevel>,
        converged: bool,
        file: Option<String>,
    },
    Error {
        index: usize,
        seed: ParticleSeed,
        error: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathsSummary {
    pub k: f64,
    pub b0: f64,
    pub h0: f64,
    pub t0: f64,
    pub expected_period: f64,
    pub particles: Vec<ParticleOutcome>,
}

pub fn cmd_paths(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let prm = gerstner_only(cfg, "paths")?;
    let pc = &cfg.paths;
    if pc.particles.is_empty() {
        return Err(CliError::Config("paths.particles is empty".into()));
    }
    let opts = TraceOptions {
        steps_per_period: pc.steps_per_period,
        max_halvings: pc.max_halvings,
        tol: 1e-2 * cfg.tolerances.orbit * prm.length_scale(),
        periods: pc.periods,
    };
    let starts: Vec<(f64, f64)> = pc.particles.iter().map(|s| s.start(pc.t0, &prm)).collect();
    let traced: Vec<_> = {
        use rayon::prelude::*;
        starts.par_iter().map(|&s| trace_orbit(s, pc.t0, &prm, &opts)).collect()
    };
    let dir = &cfg.output.dir;
    let mut written = Vec::new();
    let mut outcomes = Vec::with_capacity(traced.len());
    for (index, (result, seed)) in traced.into_iter().zip(&pc.particles).enumerate() {
        match result {
            Ok(orbit) => {
                let traj = &orbit.trajectory;
                let file = if cfg.output.wants(Format::Csv) {
                    let name = format!("path_{index:03}.csv");
                    let rows = traj.t.iter().zip(&traj.points).map(|(&t, &(x, z))| vec![t, x, z]);
                    written.push(write_atomic(dir, &name, &csv_table(&["t", "X", "Z"], rows)?)?);
                    Some(name)
                } else {
                    None
                };
                outcomes.push(ParticleOutcome::Ok {
                    index,
                    seed: *seed,
                    label: traj.label,
                    center: traj.center,
                    radius: traj.radius,
                    period: traj.period,
                    diagnostics: orbit.diagnostics,
                    levels: orbit.levels.clone(),
                    converged: orbit.converged,
                    file,
                });
            }
            Err(e) => outcomes.push(ParticleOutcome::Error { index, seed: *seed, error: e.to_string() }),
        }
    }
    let summary = PathsSummary {
        k: prm.k,
        b0: prm.b0,
        h0: prm.h0,
        t0: pc.t0,
        expected_period: prm.period(),
        particles: outcomes,
    };
    if cfg.output.wants(Format::Json) {
        written.push(write_atomic(dir, "paths.json", &json_bytes(&summary)?)?);
    }
    report_written(stdout, &written)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    #[serde(rename = "n/a")]
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub flow: &'static str,
    pub seed: u64,
    /// The configuration that produced the report, output settings aside.
    pub config: RunConfig,
    pub passed: bool,
    pub counts: Counts,
    pub checks: Vec<CheckRecord>,
}

pub fn verify_report(cfg: &RunConfig) -> VerifyReport {
    let checks = run_suite(cfg);
    let mut counts = Counts::default();
    for c in &checks {
        match c.status {
            Status::Pass => counts.pass += 1,
            Status::Fail => counts.fail += 1,
            Status::Error => counts.error += 1,
            Status::Skipped => counts.skipped += 1,
        }
    }
    let mut echo = cfg.clone();
    echo.output = Default::default();
    VerifyReport {
        tool: "wavelab",
        version: env!("CARGO_PKG_VERSION"),
        flow: if cfg.laminar.is_some() { "laminar" } else { "gerstner" },
        seed: cfg.seed,
        config: echo,
        passed: counts.fail == 0 && counts.error == 0,
        counts,
        checks,
    }
}

/// Writes `report.json` (always) and `report.csv`; exit 1 on any failed
/// or errored check.
pub fn cmd_verify(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let report = verify_report(cfg);
    let dir = &cfg.output.dir;
    let mut written = vec![write_atomic(dir, "report.json", &json_bytes(&report)?)?];
    if cfg.output.wants(Format::Csv) {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["group", "name", "status", "value", "tolerance", "unit"])
            .map_err(|e| CliError::Io(e.to_string()))?;
        for c in &report.checks {
            let status = serde_json::to_value(c.status).map_err(|e| CliError::Io(e.to_string()))?;
            let opt = |v: Option<f64>| v.map(output::csv_float).unwrap_or_default();
            w.write_record([
                c.group.as_str(),
                c.name.as_str(),
                status.as_str().unwrap_or(""),
                &opt(c.value),
                &opt(c.tolerance),
                c.unit.as_str(),
            ])
            .map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        written.push(write_atomic(dir, "report.csv", &bytes)?);
    }
    for c in &report.checks {
        let value = c.value.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
        let status = serde_json::to_value(c.status).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(stdout, "{:<6} {}.{} {}", status.as_str().unwrap_or(""), c.group, c.name, value)?;
    }
    writeln!(
        stdout,
        "{} passed, {} failed, {} errors, {} n/a",
        report.counts.pass, report.counts.fail, report.counts.error, report.counts.skipped
    )?;
    report_written(stdout, &written)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILED })
}

fn report_written(stdout: &mut dyn Write, files: &[PathBuf]) -> std::io::Result<()> {
    for f in files {
        writeln!(stdout, "wrote {}", f.display())?;
    }
    Ok(())
}

/// Parses `argv` and runs one command; returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Dispersion(args) => {
            resolve_config(args).and_then(|cfg| cmd_dispersion(&cfg, args.out.is_some(), stdout))
        }
        Command::Profile(args) => resolve_config(args).and_then(|cfg| cmd_profile(&cfg, stdout)),
        Command::Paths(args) => resolve_config(args).and_then(|cfg| cmd_paths(&cfg, stdout)),
        Command::Verify(args) => resolve_config(args).and_then(|cfg| cmd_verify(&cfg, stdout)),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "wavelab: {e}");
            e.exit_code()
        }
    }
}

/// Convenience for tests: the output directory a command will use.
pub fn output_dir(cfg: &RunConfig) -> &Path {
    &cfg.output.dir
}
