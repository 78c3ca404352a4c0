//! Run configuration: one JSON document, every field optional.
//!
//! An empty document `{}` runs the canonical Gerstner demo. The schema is
//! documented in `docs/config.md`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, WaveError};
use crate::gerstner::{position, LagrangianLabel};
use crate::laminar::ShearProfile;
use crate::params::{dispersion_speed, GerstnerParams, PhysicalConstants};

/// Smallest grid dimension accepted.
pub const MIN_GRID: usize = 8;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub constants: PhysicalConstants,
    pub wave: WaveConfig,
    /// Replaces the Gerstner wave by a laminar flow when present.
    pub laminar: Option<LaminarConfig>,
    pub grid: GridConfig,
    pub fd: FdConfig,
    pub tolerances: Tolerances,
    pub paths: PathConfig,
    pub fault: FaultConfig,
    /// Recorded in reports; no check draws random numbers by default.
    pub seed: u64,
    pub output: OutputConfig,
}


#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveConfig {
    /// Wavenumber (1/m).
    pub k: f64,
    /// Surface label (m).
    pub b0: f64,
    /// Orbit-centre offset (m).
    pub h0: f64,
}

impl Default for WaveConfig {
    fn default() -> Self {
        Self {
            k: 0.01,
            b0: -10.0,
            h0: 0.0,
        }
    }
}

/// Current profile of a laminar run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ShearSpec {
    /// Fluid at rest.
    Zero,
    /// `u = speed`.
    Uniform { speed: f64 },
    /// `u = shear (z + depth)`.
    Linear { shear: f64 },
    /// Tabulated `u(z)` spanning `[-depth, eta0]`.
    Table(ShearProfile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaminarConfig {
    pub profile: ShearSpec,
    /// Depth below `z = 0` of the flat bed (m).
    pub depth: f64,
    /// Surface level (m).
    #[serde(default)]
    pub eta0: f64,
    /// Frame speed (m/s); defaults to the dispersion speed of `wave.k`.
    #[serde(default)]
    pub c: Option<f64>,
}

impl LaminarConfig {
    pub fn shear_profile(&self) -> ShearProfile {
        match &self.profile {
            ShearSpec::Zero => ShearProfile::uniform(0.0, self.depth, self.eta0),
            ShearSpec::Uniform { speed } => ShearProfile::uniform(*speed, self.depth, self.eta0),
            ShearSpec::Linear { shear } => ShearProfile::linear(*shear, self.depth, self.eta0),
            ShearSpec::Table(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Phases per streamline in the residual study.
    pub residual_phases: usize,
    /// Streamlines in the residual study.
    pub residual_labels: usize,
    /// Surface samples for the boundary checks and the profile command.
    pub surface_samples: usize,
    pub streamlines: usize,
    pub streamline_points: usize,
    /// Stream coordinates used for profile extraction.
    pub hodograph_samples: usize,
    /// Abscissae per streamline in the hodograph identities.
    pub hodograph_abscissae: usize,
    /// Vertical levels of the laminar residual grid.
    pub laminar_levels: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            residual_phases: 32,
            residual_labels: 32,
            surface_samples: 256,
            streamlines: 8,
            streamline_points: 32,
            hodograph_samples: 24,
            hodograph_abscissae: 8,
            laminar_levels: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FdConfig {
    /// Base step of the residual study in units of the flow length scale.
    pub residual_step: f64,
    pub halvings: usize,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            residual_step: 1e-2,
            halvings: 3,
        }
    }
}

/// Pass thresholds, each in the unit named by its comment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// `|k c^2 + 2 omega c - g|` (m/s^2).
    pub dispersion: f64,
    /// Extrapolated residual, nondimensional.
    pub residual: f64,
    /// `rho g / k`.
    pub surface_pressure: f64,
    /// `c`.
    pub kinematic: f64,
    /// `rho g / k`.
    pub isobaric: f64,
    /// `c`.
    pub has: f64,
    /// Nondimensional cubic coefficients.
    pub ais: f64,
    /// `c^2`.
    pub bernoulli: f64,
    /// `1/k`.
    pub circle: f64,
    /// `alpha^2 / A^2`.
    pub first_integral: f64,
    /// Relative for `K`, `1/k` for `T`.
    pub identification: f64,
    /// `1/k`, for closure, radius and drift.
    pub orbit: f64,
    /// Relative.
    pub period: f64,
    /// Nondimensional laminar `r2`.
    pub laminar: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            dispersion: 1e-10,
            residual: 1e-8,
            surface_pressure: 1e-6,
            kinematic: 1e-8,
            isobaric: 1e-6,
            has: 1e-8,
            ais: 1e-6,
            bernoulli: 1e-8,
            circle: 1e-8,
            first_integral: 1e-10,
            identification: 1e-6,
            orbit: 1e-7,
            period: 1e-6,
            laminar: 1e-8,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        let all = [
            ("dispersion", self.dispersion),
            ("residual", self.residual),
            ("surface_pressure", self.surface_pressure),
            ("kinematic", self.kinematic),
            ("isobaric", self.isobaric),
            ("has", self.has),
            ("ais", self.ais),
            ("bernoulli", self.bernoulli),
            ("circle", self.circle),
            ("first_integral", self.first_integral),
            ("identification", self.identification),
            ("orbit", self.orbit),
            ("period", self.period),
            ("laminar", self.laminar),
        ];
        for (name, v) in all {
            if !(v > 0.0 && v.is_finite()) {
                return Err(WaveError::Validation(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Particle seed: a label, a fixed-frame point at `t0`, or a label in
/// units of `1/k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ParticleSeed {
    Label { a: f64, b: f64 },
    Point { x: f64, z: f64 },
    Scaled { ka: f64, kb: f64 },
}

impl ParticleSeed {
    /// Fixed-frame starting point at time `t0`.
    pub fn start(&self, t0: f64, prm: &GerstnerParams) -> (f64, f64) {
        match *self {
            Self::Label { a, b } => position(t0, LagrangianLabel::new(a, b), prm),
            Self::Point { x, z } => (x, z),
            Self::Scaled { ka, kb } => position(t0, LagrangianLabel::new(ka / prm.k, kb / prm.k), prm),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathConfig {
    pub particles: Vec<ParticleSeed>,
    pub t0: f64,
    pub steps_per_period: usize,
    pub max_halvings: usize,
    pub periods: usize,
    /// Coarsest steps per period of the order study.
    pub order_base: usize,
}

impl Default for PathConfig {
    fn default() -> Self {
        Self {
            particles: vec![
                ParticleSeed::Scaled { ka: 0.0, kb: -0.5 },
                ParticleSeed::Scaled { ka: 0.0, kb: -1.0 },
                ParticleSeed::Scaled { ka: 0.0, kb: -2.0 },
            ],
            t0: 0.0,
            steps_per_period: crate::pathtrace::STEPS_PER_PERIOD,
            max_halvings: crate::pathtrace::MAX_HALVINGS,
            periods: 1,
            order_base: 128,
        }
    }
}

/// Deliberate corruption used to show that a check can fail.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FaultConfig {
    /// Amplitude of `eps sin(k x)` added to the reconstructed pressure, in
    /// units of `rho g / k`.
    pub pressure_amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = WaveError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg" => Ok(Self::Svg),
            other => Err(WaveError::Validation(format!("unknown output format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("wavelab-out"),
            formats: vec![Format::Csv, Format::Json, Format::Svg],
        }
    }
}

impl OutputConfig {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| WaveError::InvalidConfiguration(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> std::io::Result<String> {
        std::fs::read_to_string(path)
    }

    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        self.tolerances.validate()?;
        let g = &self.grid;
        for (name, v) in [
            ("residual_phases", g.residual_phases),
            ("residual_labels", g.residual_labels),
            ("surface_samples", g.surface_samples),
            ("streamlines", g.streamlines),
            ("streamline_points", g.streamline_points),
            ("hodograph_samples", g.hodograph_samples),
            ("hodograph_abscissae", g.hodograph_abscissae),
            ("laminar_levels", g.laminar_levels),
        ] {
            if v < MIN_GRID {
                return Err(WaveError::Validation(format!("grid size {name} must be at least {MIN_GRID}, got {v}")));
            }
        }
        if !(self.fd.residual_step > 0.0 && self.fd.residual_step.is_finite()) {
            return Err(WaveError::Validation("fd.residual_step must be positive".into()));
        }
        if self.fd.halvings < 2 {
            return Err(WaveError::Validation("fd.halvings must be at least 2".into()));
        }
        let p = &self.paths;
        if p.steps_per_period < MIN_GRID || p.order_base < MIN_GRID || p.periods == 0 {
            return Err(WaveError::Validation("path step counts must be at least 8 and periods positive".into()));
        }
        if !p.t0.is_finite() {
            return Err(WaveError::Validation("paths.t0 must be finite".into()));
        }
        if !self.fault.pressure_amplitude.is_finite() {
            return Err(WaveError::Validation("fault amplitude must be finite".into()));
        }
        if let Some(lam) = &self.laminar {
            if !(lam.depth > 0.0 && lam.depth.is_finite()) {
                return Err(WaveError::Validation(format!("laminar depth must be positive, got {}", lam.depth)));
            }
        }
        self.gerstner_params()?;
        Ok(())
    }

    pub fn gerstner_params(&self) -> Result<GerstnerParams> {
        GerstnerParams::new(self.wave.k, self.wave.b0, self.wave.h0, &self.constants)
    }

    /// Frame speed of the laminar run.
    pub fn laminar_speed(&self, lam: &LaminarConfig) -> Result<f64> {
        match lam.c {
            Some(c) => Ok(c),
            None => dispersion_speed(self.wave.k, &self.constants),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_canonical() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.wave.k, 0.01);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(RunConfig::from_json(r#"{"wave": {"kk": 1}}"#).is_err());
    }

    #[test]
    fn small_grid_rejected() {
        assert!(RunConfig::from_json(r#"{"grid": {"streamlines": 4}}"#).is_err());
    }

    #[test]
    fn laminar_table_parses() {
        let cfg = RunConfig::from_json(
            r#"{"laminar": {"profile": {"table": {"z": [-10, 0], "u": [0, 1]}}, "depth": 10}}"#,
        )
        .unwrap();
        let lam = cfg.laminar.unwrap();
        assert_eq!(lam.shear_profile().u, vec![0.0, 1.0]);
    }

    #[test]
    fn negative_wavenumber_message() {
        let err = RunConfig::from_json(r#"{"wave": {"k": -1}}"#).unwrap_err();
        assert!(err.to_string().contains("wavenumber must be positive"));
    }
}
