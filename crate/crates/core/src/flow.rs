//! Steady flows in the frame moving with the wave, and finite-difference
//! partials of their fields.

use serde::Serialize;

use crate::error::{Result, WaveError};

/// Velocity, pressure and stream function at one point of the moving frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowState {
    /// Horizontal velocity in the fixed frame (m/s).
    pub u: f64,
    /// Vertical velocity (m/s).
    pub w: f64,
    /// Pressure (Pa).
    pub pressure: f64,
    /// Stream function (m^2/s), zero on the free surface.
    pub psi: f64,
}

/// Eulerian state together with the vorticity `u_z - w_x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowSample {
    pub u: f64,
    pub w: f64,
    pub pressure: f64,
    pub psi: f64,
    pub gamma: f64,
}

/// Free-surface elevation and slope at a horizontal position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub x: f64,
    pub eta: f64,
    /// `eta_x`; infinite at a cusp.
    pub slope: f64,
}

/// A steady solution candidate `(u, w, P, eta)` written in `x = X - c t`.
pub trait SteadyFlow: Sync {
    /// Wave speed `c`.
    fn wave_speed(&self) -> f64;

    fn state(&self, x: f64, z: f64) -> Result<FlowState>;

    fn surface(&self, x: f64) -> Result<SurfacePoint>;

    /// Bed elevation `-d` for finite depth, `None` in deep water.
    fn bed(&self) -> Option<f64>;

    /// Intrinsic length used to scale steps and tolerances.
    fn length_scale(&self) -> f64;

    /// Horizontal period, if the flow has one.
    fn period(&self) -> Option<f64>;

    /// Whether `(x, z)` lies in the closed fluid domain.
    fn contains(&self, x: f64, z: f64) -> bool {
        let below_surface = match self.surface(x) {
            Ok(s) => z <= s.eta,
            Err(_) => false,
        };
        let above_bed = self.bed().is_none_or(|bed| z >= bed);
        below_surface && above_bed && x.is_finite() && z.is_finite()
    }
}

impl<F: SteadyFlow + ?Sized> SteadyFlow for &F {
    fn wave_speed(&self) -> f64 {
        (**self).wave_speed()
    }
    fn state(&self, x: f64, z: f64) -> Result<FlowState> {
        (**self).state(x, z)
    }
    fn surface(&self, x: f64) -> Result<SurfacePoint> {
        (**self).surface(x)
    }
    fn bed(&self) -> Option<f64> {
        (**self).bed()
    }
    fn length_scale(&self) -> f64 {
        (**self).length_scale()
    }
    fn period(&self) -> Option<f64> {
        (**self).period()
    }
    fn contains(&self, x: f64, z: f64) -> bool {
        (**self).contains(x, z)
    }
}

/// Coordinate direction of a partial derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

/// Partials of `(u, w, P)` along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Partials {
    pub u: f64,
    pub w: f64,
    pub pressure: f64,
}

impl Partials {
    fn combine(states: &[(f64, FlowState)], h: f64) -> Self {
        let mut out = Partials::default();
        for (weight, s) in states {
            out.u += weight * s.u;
            out.w += weight * s.w;
            out.pressure += weight * s.pressure;
        }
        out.u /= h;
        out.w /= h;
        out.pressure /= h;
        out
    }
}

fn shifted(x: f64, z: f64, axis: Axis, offset: f64) -> (f64, f64) {
    match axis {
        Axis::X => (x + offset, z),
        Axis::Z => (x, z + offset),
    }
}

/// Second-order centered partial; fails if a stencil point is outside
/// the fluid.
pub fn centered_partials<F: SteadyFlow + ?Sized>(
    flow: &F,
    x: f64,
    z: f64,
    h: f64,
    axis: Axis,
) -> Result<Partials> {
    let (xp, zp) = shifted(x, z, axis, h);
    let (xm, zm) = shifted(x, z, axis, -h);
    if !flow.contains(xp, zp) || !flow.contains(xm, zm) {
        return Err(WaveError::Stencil { x, z });
    }
    let plus = flow.state(xp, zp)?;
    let minus = flow.state(xm, zm)?;
    Ok(Partials::combine(&[(0.5, plus), (-0.5, minus)], h))
}

/// Second-order partial that falls back to one-sided stencils near a
/// boundary.
///
/// When neither side fits (a horizontal stencil straddling a crest), the
/// derivative is extrapolated from two deeper points, still second order.
pub fn adaptive_partials<F: SteadyFlow + ?Sized>(
    flow: &F,
    x: f64,
    z: f64,
    h: f64,
    axis: Axis,
) -> Result<Partials> {
    if !flow.contains(x, z) {
        return Err(WaveError::Stencil { x, z });
    }
    let inside = |o: f64| {
        let (a, b) = shifted(x, z, axis, o);
        flow.contains(a, b)
    };
    let at = |o: f64| {
        let (a, b) = shifted(x, z, axis, o);
        flow.state(a, b)
    };
    if inside(h) && inside(-h) {
        return Ok(Partials::combine(&[(0.5, at(h)?), (-0.5, at(-h)?)], h));
    }
    if inside(h) && inside(2.0 * h) {
        let states = [(-1.5, at(0.0)?), (2.0, at(h)?), (-0.5, at(2.0 * h)?)];
        return Ok(Partials::combine(&states, h));
    }
    if inside(-h) && inside(-2.0 * h) {
        let states = [(1.5, at(0.0)?), (-2.0, at(-h)?), (0.5, at(-2.0 * h)?)];
        return Ok(Partials::combine(&states, h));
    }
    if axis == Axis::X && flow.contains(x, z - 2.0 * h) && flow.contains(x, z - 4.0 * h) {
        let one = adaptive_partials(flow, x, z - h, h, axis)?;
        let two = adaptive_partials(flow, x, z - 2.0 * h, h, axis)?;
        return Ok(Partials {
            u: 2.0 * one.u - two.u,
            w: 2.0 * one.w - two.w,
            pressure: 2.0 * one.pressure - two.pressure,
        });
    }
    Err(WaveError::Stencil { x, z })
}

/// Vorticity `u_z - w_x` by second-order finite differences.
pub fn vorticity<F: SteadyFlow + ?Sized>(flow: &F, x: f64, z: f64, h: f64) -> Result<f64> {
    let dz = adaptive_partials(flow, x, z, h, Axis::Z)?;
    let dx = adaptive_partials(flow, x, z, h, Axis::X)?;
    Ok(dz.u - dx.w)
}

/// Full Eulerian sample including finite-difference vorticity.
pub fn sample<F: SteadyFlow + ?Sized>(flow: &F, x: f64, z: f64, h: f64) -> Result<FlowSample> {
    let s = flow.state(x, z)?;
    Ok(FlowSample {
        u: s.u,
        w: s.w,
        pressure: s.pressure,
        psi: s.psi,
        gamma: vorticity(flow, x, z, h)?,
    })
}
