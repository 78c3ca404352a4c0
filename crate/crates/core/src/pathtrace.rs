//! Particle paths in the fixed frame.
//!
//! Particles obey the non-autonomous system `X' = u(X - ct, Z)`,
//! `Z' = w(X - ct, Z)`, with the Eulerian field recovered at each stage by
//! inverting the label map. The exact solutions are the closed circles of
//! the Lagrangian description, so closure, radius, period and drift are all
//! checkable against closed forms.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, WaveError};
use crate::gerstner::{invert_map, position, velocity, LagrangianLabel};
use crate::numerics::{fit_line, Hermite};
use crate::params::GerstnerParams;

/// Default number of steps per orbital period.
pub const STEPS_PER_PERIOD: usize = 2048;
/// Cap on the dt-halving levels of [`trace_orbit`].
pub const MAX_HALVINGS: usize = 4;

/// A sampled particle path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Sample times (s).
    pub t: Vec<f64>,
    /// Fixed-frame positions `(X, Z)` (m).
    pub points: Vec<(f64, f64)>,
    /// Field velocities at the samples (m/s).
    pub velocities: Vec<(f64, f64)>,
    /// Label inverted from the starting point.
    pub label: LagrangianLabel,
    /// Orbit centre `(a, h0 + b)` (m).
    pub center: (f64, f64),
    /// Orbit radius `e^{kb}/k` (m).
    pub radius: f64,
    /// Orbital period `2 pi / (k c)` (s).
    pub period: f64,
    /// Time step (s).
    pub dt: f64,
}

fn field(t: f64, pt: (f64, f64), prm: &GerstnerParams) -> Result<(f64, f64)> {
    match invert_map(t, pt, prm) {
        Ok(inv) => Ok(velocity(t, inv.label, prm)),
        Err(WaveError::OutOfDomain { .. }) => Err(WaveError::Escape { t }),
        Err(e) => Err(e),
    }
}

/// Integrates one particle with classical RK4.
///
/// RK4 stage points step along the tangent and overshoot the orbit by about
/// `r (kc dt)^2 / 8`, so a particle that close to the free surface escapes.
pub fn integrate_path(
    start: (f64, f64),
    t0: f64,
    dt: f64,
    n_steps: usize,
    prm: &GerstnerParams,
) -> Result<Trajectory> {
    if !(dt.is_finite() && dt > 0.0 && t0.is_finite()) {
        return Err(WaveError::Validation(format!("time step must be positive, got {dt}")));
    }
    if n_steps == 0 {
        return Err(WaveError::Validation("at least one step is required".into()));
    }
    let label = invert_map(t0, start, prm)?.label;
    let mut t = Vec::with_capacity(n_steps + 1);
    let mut points = Vec::with_capacity(n_steps + 1);
    let mut velocities = Vec::with_capacity(n_steps + 1);
    let mut now = t0;
    let mut p = start;
    let mut v = field(t0, p, prm)?;
    t.push(now);
    points.push(p);
    velocities.push(v);
    for i in 1..=n_steps {
        let k1 = v;
        let k2 = field(now + 0.5 * dt, (p.0 + 0.5 * dt * k1.0, p.1 + 0.5 * dt * k1.1), prm)?;
        let k3 = field(now + 0.5 * dt, (p.0 + 0.5 * dt * k2.0, p.1 + 0.5 * dt * k2.1), prm)?;
        let next = now + dt;
        let k4 = field(next, (p.0 + dt * k3.0, p.1 + dt * k3.1), prm)?;
        p = (
            p.0 + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            p.1 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        );
        now = t0 + i as f64 * dt;
        v = field(now, p, prm)?;
        t.push(now);
        points.push(p);
        velocities.push(v);
    }
    Ok(Trajectory {
        t,
        points,
        velocities,
        label,
        center: (label.a, prm.h0 + label.b),
        radius: prm.orbit_radius(label.b),
        period: prm.period(),
        dt,
    })
}

impl Trajectory {
    pub fn end(&self) -> (f64, f64) {
        *self.points.last().unwrap()
    }

    /// Largest distance from the closed-form path of the inverted label.
    pub fn max_error_against(&self, prm: &GerstnerParams) -> f64 {
        self.t
            .iter()
            .zip(&self.points)
            .map(|(&t, &(x, z))| {
                let (ex, ez) = position(t, self.label, prm);
                (x - ex).hypot(z - ez)
            })
            .fold(0.0, f64::max)
    }

    /// Position at time `t` by cubic Hermite interpolation.
    pub fn position_at(&self, t: f64) -> Option<(f64, f64)> {
        let xs = Hermite::new(
            self.t.clone(),
            self.points.iter().map(|p| p.0).collect(),
            self.velocities.iter().map(|v| v.0).collect(),
        )
        .ok()?;
        let zs = Hermite::new(
            self.t.clone(),
            self.points.iter().map(|p| p.1).collect(),
            self.velocities.iter().map(|v| v.1).collect(),
        )
        .ok()?;
        Some((xs.eval(t)?.0, zs.eval(t)?.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitDiagnostics {
    /// `|P(t0 + T) - P(t0)|` (m).
    pub closure_gap: f64,
    /// `max | |P - centre| - radius |` (m).
    pub max_radial_deviation: f64,
    /// Period from the regression of the unwrapped orbital phase (s).
    pub measured_period: f64,
    /// `X(t0 + T) - X(t0)` (m).
    pub drift: f64,
    /// Largest deviation of the phase from its regression line (rad).
    pub phase_residual: f64,
}

pub fn orbit_diagnostics(traj: &Trajectory) -> Result<OrbitDiagnostics> {
    let t0 = traj.t[0];
    let span = traj.t.last().unwrap() - t0;
    // Tolerate round-off in the accumulated step count.
    if span < traj.period * (1.0 - 1e-12) {
        return Err(WaveError::InsufficientData(format!(
            "trajectory spans {span} s, shorter than the period {} s",
            traj.period
        )));
    }
    let t_end = (t0 + traj.period).min(*traj.t.last().unwrap());
    let start = traj.points[0];
    let end = traj
        .position_at(t_end)
        .ok_or_else(|| WaveError::InsufficientData("cannot interpolate one period".into()))?;
    let (cx, cz) = traj.center;
    let max_radial_deviation = traj
        .points
        .iter()
        .map(|&(x, z)| ((x - cx).hypot(z - cz) - traj.radius).abs())
        .fold(0.0, f64::max);

    // X - a = -r sin(phi), Z - zc = r cos(phi).
    let mut phases = Vec::with_capacity(traj.points.len());
    let mut previous: Option<f64> = None;
    let mut turns = 0.0;
    for &(x, z) in &traj.points {
        let raw = (-(x - cx)).atan2(z - cz);
        if let Some(prev) = previous {
            let jump = raw + turns - prev;
            if jump > std::f64::consts::PI {
                turns -= std::f64::consts::TAU;
            } else if jump < -std::f64::consts::PI {
                turns += std::f64::consts::TAU;
            }
        }
        let phase = raw + turns;
        phases.push(phase);
        previous = Some(phase);
    }
    let fit = fit_line(&traj.t, &phases)?;
    if fit.slope == 0.0 {
        return Err(WaveError::Degenerate("orbital phase does not advance".into()));
    }
    Ok(OrbitDiagnostics {
        closure_gap: (end.0 - start.0).hypot(end.1 - start.1),
        max_radial_deviation,
        measured_period: std::f64::consts::TAU / fit.slope.abs(),
        drift: end.0 - start.0,
        phase_residual: fit.max_residual,
    })
}

/// Step control for [`trace_orbit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceOptions {
    pub steps_per_period: usize,
    pub max_halvings: usize,
    /// Accepted endpoint change between successive levels (m).
    pub tol: f64,
    /// Number of periods integrated.
    pub periods: usize,
}

impl TraceOptions {
    pub fn for_params(prm: &GerstnerParams) -> Self {
        Self {
            steps_per_period: STEPS_PER_PERIOD,
            max_halvings: MAX_HALVINGS,
            tol: 1e-9 * prm.length_scale(),
            periods: 1,
        }
    }
}

/// Endpoint of one refinement level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinementLevel {
    pub dt: f64,
    pub end: (f64, f64),
    /// Distance to the previous level's endpoint.
    pub change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracedOrbit {
    pub trajectory: Trajectory,
    pub diagnostics: OrbitDiagnostics,
    pub levels: Vec<RefinementLevel>,
    pub converged: bool,
}

/// Integrates from `dt = T / steps_per_period`, halving until successive
/// endpoints agree to `tol`; diagnostics come from the finest level.
pub fn trace_orbit(start: (f64, f64), t0: f64, prm: &GerstnerParams, opts: &TraceOptions) -> Result<TracedOrbit> {
    if opts.steps_per_period == 0 || opts.periods == 0 {
        return Err(WaveError::Validation("step and period counts must be positive".into()));
    }
    let total = prm.period() * opts.periods as f64;
    let mut n = opts.steps_per_period * opts.periods;
    let mut levels: Vec<RefinementLevel> = Vec::new();
    let mut traj = integrate_path(start, t0, total / n as f64, n, prm)?;
    levels.push(RefinementLevel { dt: traj.dt, end: traj.end(), change: None });
    let mut converged = false;
    for _ in 0..opts.max_halvings {
        n *= 2;
        let finer = integrate_path(start, t0, total / n as f64, n, prm)?;
        let prev = levels.last().unwrap().end;
        let end = finer.end();
        let change = (end.0 - prev.0).hypot(end.1 - prev.1);
        levels.push(RefinementLevel { dt: finer.dt, end, change: Some(change) });
        traj = finer;
        if change <= opts.tol {
            converged = true;
            break;
        }
    }
    let diagnostics = orbit_diagnostics(&traj)?;
    Ok(TracedOrbit { trajectory: traj, diagnostics, levels, converged })
}

/// Traces independent particles in parallel; results keep the input order.
pub fn trace_batch(
    starts: &[(f64, f64)],
    t0: f64,
    prm: &GerstnerParams,
    opts: &TraceOptions,
) -> Vec<Result<TracedOrbit>> {
    starts.par_iter().map(|&s| trace_orbit(s, t0, prm, opts)).collect()
}

/// Largest distance from the closed-form path over one period for
/// `dt = T/base`, `T/(2 base)`, ...; successive ratios near 16 show
/// fourth order.
pub fn convergence_study(
    start: (f64, f64),
    t0: f64,
    prm: &GerstnerParams,
    base: usize,
    halvings: usize,
) -> Result<Vec<f64>> {
    let period = prm.period();
    (0..=halvings)
        .map(|level| {
            let n = base << level;
            let traj = integrate_path(start, t0, period / n as f64, n, prm)?;
            Ok(traj.max_error_against(prm))
        })
        .collect()
}
