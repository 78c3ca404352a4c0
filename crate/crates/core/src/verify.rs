//! Residual checks of a steady flow against the f-plane Euler system, its
//! boundary conditions and the hydraulic head.
//!
//! The momentum residuals use the complete steady advection operator
//! `(u - c) d_x + w d_z`:
//!
//! ```text
//! r1 = (u - c) u_x + w u_z + 2 omega w + P_x / rho
//! r2 = (u - c) w_x + w w_z - 2 omega u + P_z / rho + g
//! r3 = u_x + w_z
//! ```
//!
//! For an exact solution the only thing left is finite-difference
//! truncation, which must shrink like `step^2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, WaveError};
use crate::flow::{centered_partials, Axis, SteadyFlow, SurfacePoint};
use crate::params::PhysicalConstants;

/// Richardson ratios accepted as second-order convergence.
pub const RATIO_BAND: (f64, f64) = (3.5, 4.5);

/// Nondimensional residual below which a field counts as exact and no
/// convergence ratios are needed.
pub const EXACT_FLOOR: f64 = 1e-12;

/// `int_0^p gamma(s) ds` for the vorticity function of a flow.
pub trait VorticityPrimitive: Sync {
    fn primitive(&self, p: f64) -> Result<f64>;
}

/// Adapter turning a closure into a [`VorticityPrimitive`].
pub struct PrimitiveFn<F>(pub F);

impl<F> VorticityPrimitive for PrimitiveFn<F>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    fn primitive(&self, p: f64) -> Result<f64> {
        (self.0)(p)
    }
}

/// The three residuals of the steady system at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerResidual {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl EulerResidual {
    fn component(&self, i: usize) -> f64 {
        match i {
            0 => self.r1,
            1 => self.r2,
            _ => self.r3,
        }
    }
}

/// Residuals at `(x, z)` with centered partials of step `step`.
///
/// The point must sit at least `2 step` inside the fluid.
pub fn euler_residual<F: SteadyFlow + ?Sized>(
    flow: &F,
    consts: &PhysicalConstants,
    x: f64,
    z: f64,
    step: f64,
) -> Result<EulerResidual> {
    let margin = 2.0 * step;
    for (dx, dz) in [(margin, 0.0), (-margin, 0.0), (0.0, margin), (0.0, -margin)] {
        if !flow.contains(x + dx, z + dz) {
            return Err(WaveError::Stencil { x, z });
        }
    }
    let s = flow.state(x, z)?;
    let px = centered_partials(flow, x, z, step, Axis::X)?;
    let pz = centered_partials(flow, x, z, step, Axis::Z)?;
    let rel = s.u - flow.wave_speed();
    Ok(EulerResidual {
        r1: rel * px.u + s.w * pz.u + 2.0 * consts.omega * s.w + px.pressure / consts.rho,
        r2: rel * px.w + s.w * pz.w - 2.0 * consts.omega * s.u + pz.pressure / consts.rho + consts.g,
        r3: px.u + pz.w,
    })
}

/// One residual tracked through a step-halving study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub name: String,
    pub grid: String,
    /// Finest step used (m).
    pub step: f64,
    /// Worst residual at the finest step, SI units of the equation.
    pub max_abs: f64,
    /// Scale used to nondimensionalize.
    pub scale: f64,
    pub max_nondim: f64,
    /// Ratios of worst residuals at successive halvings.
    pub ratios: Vec<f64>,
    /// Worst Richardson-extrapolated residual (nondimensional).
    pub extrapolated_nondim: f64,
    pub converged: bool,
}

impl ResidualReport {
    fn from_levels(
        name: &str,
        grid: &str,
        steps: &[f64],
        levels: &[Vec<f64>],
        scale: f64,
    ) -> Self {
        let worst: Vec<f64> = levels
            .iter()
            .map(|l| l.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
            .collect();
        let finest = levels.len() - 1;
        let extrapolated = if finest >= 1 {
            levels[finest]
                .iter()
                .zip(&levels[finest - 1])
                .map(|(fine, coarse)| ((4.0 * fine - coarse) / 3.0).abs())
                .fold(0.0, f64::max)
        } else {
            worst[finest]
        };
        let exact = worst.iter().all(|w| w / scale <= EXACT_FLOOR);
        let ratios: Vec<f64> = if exact {
            Vec::new()
        } else {
            crate::numerics::successive_ratios(&worst)
        };
        let converged = exact
            || (!ratios.is_empty() && ratios.iter().all(|r| *r >= RATIO_BAND.0 && *r <= RATIO_BAND.1));
        Self {
            name: name.to_string(),
            grid: grid.to_string(),
            step: steps[finest],
            max_abs: worst[finest],
            scale,
            max_nondim: worst[finest] / scale,
            ratios,
            extrapolated_nondim: extrapolated / scale,
            converged,
        }
    }
}

/// Step-halving study of the three residuals over a point set.
///
/// Momentum residuals are scaled by `c^2 / L`, continuity by `c / L`.
pub fn euler_convergence<F: SteadyFlow + ?Sized>(
    flow: &F,
    consts: &PhysicalConstants,
    points: &[(f64, f64)],
    base_step: f64,
    halvings: usize,
    grid: &str,
) -> Result<[ResidualReport; 3]> {
    if points.is_empty() {
        return Err(WaveError::InsufficientData("no residual sample points".into()));
    }
    let steps: Vec<f64> = (0..=halvings).map(|l| base_step / f64::powi(2.0, l as i32)).collect();
    let mut per_level: Vec<Vec<EulerResidual>> = Vec::with_capacity(steps.len());
    for &h in &steps {
        let level = points
            .par_iter()
            .map(|&(x, z)| euler_residual(flow, consts, x, z, h))
            .collect::<Result<Vec<_>>>()?;
        per_level.push(level);
    }
    let c = flow.wave_speed();
    let l = flow.length_scale();
    let scales = [c * c / l, c * c / l, c / l];
    let names = ["momentum_x", "momentum_z", "continuity"];
    let reports = [0, 1, 2].map(|i| {
        let levels: Vec<Vec<f64>> = per_level
            .iter()
            .map(|lvl| lvl.iter().map(|r| r.component(i)).collect())
            .collect();
        ResidualReport::from_levels(names[i], grid, &steps, &levels, scales[i])
    });
    Ok(reports)
}

/// Worst speeds found at one probe elevation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayProbe {
    pub z: f64,
    pub max_abs_u: f64,
    pub max_abs_w: f64,
}

impl DecayProbe {
    pub fn max_speed_component(&self) -> f64 {
        self.max_abs_u.max(self.max_abs_w)
    }
}

/// Boundary-condition residuals in SI units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryReport {
    /// `max |P - P0|` on the surface (Pa).
    pub surface_pressure: f64,
    /// `max |w - (u - c) eta_x|` on the surface (m/s).
    pub kinematic: f64,
    /// `max |w|` on the bed (m/s), finite depth only.
    pub bed: Option<f64>,
    pub decay: Vec<DecayProbe>,
}

/// Surface, bed and far-field checks.
///
/// `surface` carries the surface samples with tangents; bed and probe
/// rows reuse their horizontal positions. Cusp samples (infinite slope)
/// are skipped by the kinematic check.
pub fn boundary_residuals<F: SteadyFlow + ?Sized>(
    flow: &F,
    surface: &[SurfacePoint],
    consts: &PhysicalConstants,
    probe_levels: &[f64],
) -> Result<BoundaryReport> {
    if surface.is_empty() {
        return Err(WaveError::InsufficientData("no surface samples".into()));
    }
    let c = flow.wave_speed();
    let on_surface = surface
        .par_iter()
        .map(|s| {
            let st = flow.state(s.x, s.eta)?;
            let kin = if s.slope.is_finite() {
                (st.w - (st.u - c) * s.slope).abs()
            } else {
                0.0
            };
            Ok(((st.pressure - consts.p_atm).abs(), kin))
        })
        .collect::<Result<Vec<_>>>()?;
    let surface_pressure = on_surface.iter().map(|v| v.0).fold(0.0, f64::max);
    let kinematic = on_surface.iter().map(|v| v.1).fold(0.0, f64::max);

    let row_max = |z: f64| -> Result<(f64, f64)> {
        let states = surface
            .par_iter()
            .map(|s| flow.state(s.x, z))
            .collect::<Result<Vec<_>>>()?;
        Ok(states
            .iter()
            .fold((0.0_f64, 0.0_f64), |(mu, mw), st| (mu.max(st.u.abs()), mw.max(st.w.abs()))))
    };
    let bed = match flow.bed() {
        Some(zb) => Some(row_max(zb)?.1),
        None => None,
    };
    let decay = probe_levels
        .iter()
        .map(|&z| {
            let (max_abs_u, max_abs_w) = row_max(z)?;
            Ok(DecayProbe { z, max_abs_u, max_abs_w })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryReport {
        surface_pressure,
        kinematic,
        bed,
        decay,
    })
}

/// `max - min`; exactly zero for constant values.
fn range(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    hi - lo
}

/// Spatial behaviour of the hydraulic head over a point set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HydraulicHead {
    /// Mean head `E` over the points (m^2/s^2).
    pub head: f64,
    /// `max E - min E`.
    pub spread: f64,
    pub values: Vec<f64>,
}

/// Evaluates
/// `E = ((u-c)^2 + w^2)/2 + (g - 2 omega c) z + P/rho - 2 omega psi + int_0^{-psi} gamma`
/// at every point.
pub fn hydraulic_head<F: SteadyFlow + ?Sized>(
    flow: &F,
    points: &[(f64, f64)],
    consts: &PhysicalConstants,
    gamma: Option<&dyn VorticityPrimitive>,
) -> Result<HydraulicHead> {
    let gamma = gamma.ok_or_else(|| {
        WaveError::Dependency("hydraulic head needs the vorticity function gamma(p)".into())
    })?;
    if points.is_empty() {
        return Err(WaveError::InsufficientData("no head sample points".into()));
    }
    let c = flow.wave_speed();
    let alpha = consts.alpha(c);
    let values = points
        .par_iter()
        .map(|&(x, z)| {
            let s = flow.state(x, z)?;
            let kinetic = 0.5 * ((s.u - c).powi(2) + s.w * s.w);
            Ok(kinetic + alpha * z + s.pressure / consts.rho - 2.0 * consts.omega * s.psi
                + gamma.primitive(-s.psi)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let head = values.iter().sum::<f64>() / values.len() as f64;
    let spread = range(&values);
    Ok(HydraulicHead { head, spread, values })
}

/// Pressure spread along each sampled streamline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsobaricReport {
    /// `max P - min P` per streamline (Pa).
    pub spreads: Vec<f64>,
    pub worst: f64,
}

/// Minimum samples per streamline for [`isobaric_check`].
pub const MIN_STREAMLINE_SAMPLES: usize = 16;

pub fn isobaric_check<P>(pressure: P, streamlines: &[Vec<(f64, f64)>]) -> Result<IsobaricReport>
where
    P: Fn(f64, f64) -> Result<f64> + Sync,
{
    if streamlines.is_empty() {
        return Err(WaveError::InsufficientData("no streamlines to check".into()));
    }
    let mut spreads = Vec::with_capacity(streamlines.len());
    for line in streamlines {
        if line.len() < MIN_STREAMLINE_SAMPLES {
            return Err(WaveError::InsufficientData(format!(
                "streamline has {} samples, need at least {MIN_STREAMLINE_SAMPLES}",
                line.len()
            )));
        }
        let values = line
            .par_iter()
            .map(|&(x, z)| pressure(x, z))
            .collect::<Result<Vec<f64>>>()?;
        spreads.push(range(&values));
    }
    let worst = spreads.iter().copied().fold(0.0, f64::max);
    Ok(IsobaricReport { spreads, worst })
}
