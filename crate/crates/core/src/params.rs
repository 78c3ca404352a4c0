//! Physical constants, wave parameters and the dispersion relation.
//!
//! Everything here is SI. The wave speed `c` of a Gerstner wave on the
//! f-plane is the positive root of `k c^2 + 2 omega c - g = 0`, and the
//! hodograph-side constants follow from it:
//!
//! * `alpha = g - 2 omega c` (equal to `k c^2`),
//! * `A = -k c` (slope of `Q(p) = P/rho + 2 omega p`),
//! * `m = -alpha / A` (equal to `c`).

use serde::{Deserialize, Serialize};

use crate::error::{Result, WaveError};

/// Relative tolerance used when checking that a `(k, c)` pair obeys the
/// dispersion relation.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// Rotation, gravity, density and atmospheric pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConstants {
    /// Angular speed of the rotating frame (rad/s).
    pub omega: f64,
    /// Gravitational acceleration (m/s^2).
    pub g: f64,
    /// Density (kg/m^3).
    pub rho: f64,
    /// Atmospheric pressure at the free surface (Pa).
    pub p_atm: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            omega: 7.3e-5,
            g: 9.8,
            rho: 1000.0,
            p_atm: 101_325.0,
        }
    }
}

impl PhysicalConstants {
    pub fn new(omega: f64, g: f64, rho: f64, p_atm: f64) -> Result<Self> {
        let consts = Self {
            omega,
            g,
            rho,
            p_atm,
        };
        consts.validate()?;
        Ok(consts)
    }

    /// Same constants with a different rotation rate.
    pub fn with_omega(self, omega: f64) -> Result<Self> {
        Self::new(omega, self.g, self.rho, self.p_atm)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(WaveError::Validation(format!(
                "gravity must be positive, got {}",
                self.g
            )));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(WaveError::Validation(format!(
                "density must be positive, got {}",
                self.rho
            )));
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return Err(WaveError::Validation(format!(
                "angular speed must be non-negative, got {}",
                self.omega
            )));
        }
        if !self.p_atm.is_finite() {
            return Err(WaveError::Validation("atmospheric pressure must be finite".into()));
        }
        Ok(())
    }

    /// `g - 2 omega c`.
    pub fn alpha(&self, c: f64) -> f64 {
        self.g - 2.0 * self.omega * c
    }
}

/// Wave speed from the f-plane dispersion relation.
///
/// Evaluated as `g / (omega + sqrt(omega^2 + g k))`, which is algebraically
/// `(-omega + sqrt(omega^2 + g k)) / k` without the cancellation.
pub fn dispersion_speed(k: f64, consts: &PhysicalConstants) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(WaveError::Domain(format!(
            "wavenumber must be positive, got {k}"
        )));
    }
    consts.validate()?;
    let root = (consts.omega * consts.omega + consts.g * k).sqrt();
    Ok(consts.g / (consts.omega + root))
}

/// Residual of the dispersion relation, `k c^2 + 2 omega c - g`.
pub fn dispersion_residual(k: f64, c: f64, consts: &PhysicalConstants) -> f64 {
    k * c * c + 2.0 * consts.omega * c - consts.g
}

/// Hodograph-side constants of a Gerstner wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    /// `g - 2 omega c`.
    pub alpha: f64,
    /// Slope `A` of `Q(p)`; negative.
    pub slope: f64,
    /// `-alpha / A`; equals the wave speed.
    pub m: f64,
}

pub fn derive_constants(k: f64, c: f64, consts: &PhysicalConstants) -> Result<DerivedConstants> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(WaveError::Domain(format!(
            "wavenumber must be positive, got {k}"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(WaveError::Validation(format!("wave speed must be positive, got {c}")));
    }
    let residual = dispersion_residual(k, c, consts);
    if residual.abs() > CONSISTENCY_TOL * consts.g {
        return Err(WaveError::Validation(format!(
            "(k, c) = ({k}, {c}) violates the dispersion relation by {residual:e}"
        )));
    }
    let alpha = consts.alpha(c);
    let slope = -k * c;
    Ok(DerivedConstants {
        alpha,
        slope,
        m: -alpha / slope,
    })
}

/// Parameters of one Gerstner wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GerstnerParams {
    /// Wavenumber (1/m).
    pub k: f64,
    /// Label of the free surface streamline (m), `b0 <= 0`.
    pub b0: f64,
    /// Vertical offset of the orbit centres (m).
    pub h0: f64,
    /// Wave speed (m/s).
    pub c: f64,
    /// `g - 2 omega c`.
    pub alpha: f64,
    /// Slope `A = -k c` of `Q(p)`.
    pub slope: f64,
    /// `-alpha / A`.
    pub m: f64,
}

impl GerstnerParams {
    /// Builds the parameters with `c` taken from the dispersion relation.
    pub fn new(k: f64, b0: f64, h0: f64, consts: &PhysicalConstants) -> Result<Self> {
        let c = dispersion_speed(k, consts)?;
        Self::with_speed(k, b0, h0, c, consts)
    }

    /// Builds the parameters for a given speed, rejecting pairs that miss
    /// the dispersion relation.
    pub fn with_speed(k: f64, b0: f64, h0: f64, c: f64, consts: &PhysicalConstants) -> Result<Self> {
        if !(b0 <= 0.0) {
            return Err(WaveError::Validation(format!(
                "surface label b0 must be non-positive, got {b0}"
            )));
        }
        if !h0.is_finite() {
            return Err(WaveError::Validation("offset h0 must be finite".into()));
        }
        let derived = derive_constants(k, c, consts)?;
        Ok(Self {
            k,
            b0,
            h0,
            c,
            alpha: derived.alpha,
            slope: derived.slope,
            m: derived.m,
        })
    }

    /// `b0 == 0`: the profile is a cycloid with cusps and the label map
    /// degenerates on the surface.
    pub fn is_cusped(&self) -> bool {
        self.b0 == 0.0
    }

    pub fn wavelength(&self) -> f64 {
        std::f64::consts::TAU / self.k
    }

    /// Orbital period of every particle, `2 pi / (k c)`.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / (self.k * self.c)
    }

    /// Intrinsic length `1/k`.
    pub fn length_scale(&self) -> f64 {
        1.0 / self.k
    }

    /// Radius `e^{kb}/k` of the orbit of particles with label `b`.
    pub fn orbit_radius(&self, b: f64) -> f64 {
        (self.k * b).exp() / self.k
    }

    /// Crest-to-trough height of the free surface, `2 e^{k b0} / k`.
    pub fn wave_height(&self) -> f64 {
        2.0 * self.orbit_radius(self.b0)
    }

    /// Lowest elevation reached by the free surface.
    pub fn trough_level(&self) -> f64 {
        self.h0 + self.b0 - self.orbit_radius(self.b0)
    }
}

/// Flat-surface and bed data for finite-depth or laminar configurations.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FreeSurfaceSpec {
    /// Flat surface level of a laminar flow (m).
    pub eta0: Option<f64>,
    /// Depth of the bed below the reference level (m).
    pub depth: Option<f64>,
    /// Stream-function value on the bed (m^2/s).
    pub bed_stream: Option<f64>,
}

impl FreeSurfaceSpec {
    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.depth {
            if !(d > 0.0) {
                return Err(WaveError::Validation(format!("depth must be positive, got {d}")));
            }
        }
        if let Some(p0) = self.bed_stream {
            if !(p0 > 0.0) {
                return Err(WaveError::Validation(format!(
                    "bed stream-function value must be positive, got {p0}"
                )));
            }
        }
        if let (Some(eta0), Some(d)) = (self.eta0, self.depth) {
            if eta0 <= -d {
                return Err(WaveError::Validation(format!(
                    "surface level {eta0} lies below the bed at {}",
                    -d
                )));
            }
        }
        Ok(())
    }
}
