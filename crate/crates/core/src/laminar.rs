//! Laminar flows over a flat bed: a flat surface, `w = 0`, and a shear
//! current `u(z)` with the pressure that balances it.
//!
//! With `x`-independent fields and no vertical velocity, the horizontal
//! momentum and continuity equations hold identically and the vertical one
//! fixes `P_z = rho (2 omega u - g)`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WaveError};
use crate::flow::{FlowState, SteadyFlow, SurfacePoint};
use crate::gerstner::{deepest_label_reaching, invert_map, velocity};
use crate::numerics::{newton_bracketed, CubicSpline};
use crate::params::{GerstnerParams, PhysicalConstants};
use crate::verify::VorticityPrimitive;

/// Shear current sampled at ascending elevations; interpolated by a
/// natural cubic spline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShearProfile {
    pub z: Vec<f64>,
    pub u: Vec<f64>,
}

impl ShearProfile {
    /// `u = speed` on `[-depth, eta0]`.
    pub fn uniform(speed: f64, depth: f64, eta0: f64) -> Self {
        Self {
            z: vec![-depth, eta0],
            u: vec![speed, speed],
        }
    }

    /// `u = shear (z + depth)`, vanishing on the bed.
    pub fn linear(shear: f64, depth: f64, eta0: f64) -> Self {
        Self {
            z: vec![-depth, eta0],
            u: vec![0.0, shear * (eta0 + depth)],
        }
    }
}

/// A laminar flow between the bed `z = -depth` and the surface `z = eta0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaminarFlow {
    spline: CubicSpline,
    pub eta0: f64,
    pub depth: f64,
    pub c: f64,
    pub consts: PhysicalConstants,
    top_integral: f64,
    top_speed: f64,
}

/// Relative mismatch tolerated between the profile span and `[-d, eta0]`.
const SPAN_TOL: f64 = 1e-9;

/// Builds the flow and its pressure `P(z) = P0 + rho int_z^{eta0} (g - 2 omega u) ds`.
///
/// The integral is exact: Simpson's rule on each cubic piece of the spline.
pub fn build_laminar(
    profile: &ShearProfile,
    eta0: f64,
    depth: f64,
    consts: &PhysicalConstants,
    c: f64,
) -> Result<LaminarFlow> {
    consts.validate()?;
    if !(depth > 0.0 && depth.is_finite() && eta0.is_finite()) {
        return Err(WaveError::Validation(format!("depth must be positive, got {depth}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(WaveError::Validation(format!("wave speed must be positive, got {c}")));
    }
    let bed = -depth;
    if !(eta0 > bed) {
        return Err(WaveError::Validation(format!("surface {eta0} must lie above the bed {bed}")));
    }
    let span = eta0 - bed;
    let (first, last) = match (profile.z.first(), profile.z.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(WaveError::InsufficientData("empty shear profile".into())),
    };
    if (first - bed).abs() > SPAN_TOL * span || (last - eta0).abs() > SPAN_TOL * span {
        return Err(WaveError::Validation(format!(
            "shear profile must span [{bed}, {eta0}], got [{first}, {last}]"
        )));
    }
    let mut zs = profile.z.clone();
    zs[0] = bed;
    *zs.last_mut().unwrap() = eta0;
    let spline = CubicSpline::natural(zs, profile.u.clone())?;
    let sup_u = spline.sup();
    if sup_u >= c {
        return Err(WaveError::Stagnation { sup_u, c });
    }
    Ok(LaminarFlow {
        top_integral: spline.integral_from_start(eta0),
        top_speed: spline.value(eta0),
        spline,
        eta0,
        depth,
        c,
        consts: *consts,
    })
}

impl LaminarFlow {
    pub fn u(&self, z: f64) -> f64 {
        self.spline.value(z)
    }

    /// Vorticity `u'(z)`.
    pub fn vorticity(&self, z: f64) -> f64 {
        self.spline.derivative(z)
    }

    /// `int_z^{eta0} u ds`.
    fn upper_integral(&self, z: f64) -> f64 {
        self.top_integral - self.spline.integral_from_start(z)
    }

    pub fn pressure(&self, z: f64) -> f64 {
        let k = &self.consts;
        k.p_atm + k.rho * (k.g * (self.eta0 - z) - 2.0 * k.omega * self.upper_integral(z))
    }

    /// `psi = -int_z^{eta0} (u - c) ds`.
    pub fn stream(&self, z: f64) -> f64 {
        self.c * (self.eta0 - z) - self.upper_integral(z)
    }

    /// Elevation of streamline `p = -psi`.
    pub fn level_of_stream(&self, p: f64) -> Result<f64> {
        let target = -p;
        let bed = -self.depth;
        if !(target >= 0.0 && target <= self.stream(bed)) {
            return Err(WaveError::Domain(format!("stream coordinate {p} outside the layer")));
        }
        newton_bracketed(
            |z| Ok((self.stream(z) - target, self.u(z) - self.c)),
            bed,
            self.eta0,
            1e-15 * (self.depth + self.eta0.abs()),
            200,
        )
    }

    fn inside(&self, z: f64) -> bool {
        z >= -self.depth && z <= self.eta0
    }
}

impl SteadyFlow for LaminarFlow {
    fn wave_speed(&self) -> f64 {
        self.c
    }

    fn state(&self, x: f64, z: f64) -> Result<FlowState> {
        if !(x.is_finite() && self.inside(z)) {
            return Err(WaveError::OutOfDomain { x, z });
        }
        Ok(FlowState {
            u: self.u(z),
            w: 0.0,
            pressure: self.pressure(z),
            psi: self.stream(z),
        })
    }

    fn surface(&self, x: f64) -> Result<SurfacePoint> {
        Ok(SurfacePoint {
            x,
            eta: self.eta0,
            slope: 0.0,
        })
    }

    fn bed(&self) -> Option<f64> {
        Some(-self.depth)
    }

    fn length_scale(&self) -> f64 {
        self.depth + self.eta0
    }

    fn period(&self) -> Option<f64> {
        None
    }

    fn contains(&self, x: f64, z: f64) -> bool {
        x.is_finite() && self.inside(z)
    }
}

impl VorticityPrimitive for LaminarFlow {
    /// `int_0^p gamma = int_{eta0}^{z(p)} u'(s) (c - u(s)) ds
    ///               = c (u - u_top) - (u^2 - u_top^2) / 2`.
    fn primitive(&self, p: f64) -> Result<f64> {
        let z = self.level_of_stream(p)?;
        let (u, top) = (self.u(z), self.top_speed);
        Ok(self.c * (u - top) - 0.5 * (u * u - top * top))
    }
}

/// Vertical velocity of a Gerstner wave on a would-be bed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BedViolation {
    /// Bed elevation `-d` (m).
    pub bed: f64,
    /// `max |w|` over one period on `z = -d` (m/s).
    pub max_w: f64,
    /// `c e^{k b*}` for the deepest label `b*` whose orbit reaches the bed.
    pub envelope: f64,
    /// `c e^{k (-d - h0)}`.
    pub depth_envelope: f64,
}

/// Horizontal samples per period in [`bed_violation_of_gerstner`].
pub const BED_SAMPLES: usize = 256;

pub fn bed_violation_of_gerstner(prm: &GerstnerParams, depth: f64) -> Result<BedViolation> {
    let bed = -depth;
    if !(bed < prm.trough_level()) {
        return Err(WaveError::InvalidConfiguration(format!(
            "bed {bed} is not below the wave trough {}",
            prm.trough_level()
        )));
    }
    let lambda = prm.wavelength();
    let mut max_w: f64 = 0.0;
    for i in 0..BED_SAMPLES {
        let x = lambda * i as f64 / BED_SAMPLES as f64;
        let inv = invert_map(0.0, (x, bed), prm)?;
        max_w = max_w.max(velocity(0.0, inv.label, prm).1.abs());
    }
    let deepest = deepest_label_reaching(bed, prm)?;
    Ok(BedViolation {
        bed,
        max_w,
        envelope: prm.c * (prm.k * deepest).exp(),
        depth_envelope: prm.c * (prm.k * (bed - prm.h0)).exp(),
    })
}
