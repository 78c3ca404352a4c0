//! Gerstner's explicit Lagrangian flow on the f-plane.
//!
//! Particles labelled `(a, b)`, `b <= b0`, move on circles of radius
//! `e^{kb}/k` about `(a, h0 + b)`:
//!
//! ```text
//! X = a - e^{kb}/k sin(k(a - ct)),    Z = h0 + b + e^{kb}/k cos(k(a - ct))
//! ```
//!
//! In the frame `x = X - ct` the flow is steady; the horizontal label
//! enters only through the phase `xi = a - ct`. Each label `b` is a
//! streamline and carries a constant stream-function value, pressure and
//! vorticity, available here in closed form.

use serde::Serialize;

use crate::error::{Result, WaveError};
use crate::flow::{adaptive_partials, Axis, FlowSample, FlowState, SteadyFlow, SurfacePoint};
use crate::numerics::{newton_bracketed, simpson_halving};
use crate::params::{GerstnerParams, PhysicalConstants};

/// Newton iteration cap for [`invert_map`].
pub const MAX_NEWTON_ITERATIONS: usize = 50;
/// Target residual of [`invert_map`] in meters.
pub const INVERSION_TOL: f64 = 1e-12;

/// Relative slack (in units of `1/k`) allowed above the free surface
/// before a point counts as outside the fluid.
const SURFACE_SLACK: f64 = 1e-10;

/// Lagrangian particle label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagrangianLabel {
    pub a: f64,
    pub b: f64,
}

impl LagrangianLabel {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }
}

/// Fixed-frame position of a particle at time `t`.
pub fn position(t: f64, lbl: LagrangianLabel, prm: &GerstnerParams) -> (f64, f64) {
    let phase = prm.k * (lbl.a - prm.c * t);
    let r = prm.orbit_radius(lbl.b);
    (lbl.a - r * phase.sin(), prm.h0 + lbl.b + r * phase.cos())
}

/// Fixed-frame particle velocity `(u, w)` at time `t`.
pub fn velocity(t: f64, lbl: LagrangianLabel, prm: &GerstnerParams) -> (f64, f64) {
    let phase = prm.k * (lbl.a - prm.c * t);
    let speed = prm.c * (prm.k * lbl.b).exp();
    (speed * phase.cos(), speed * phase.sin())
}

/// `d(X, Z) / d(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabelJacobian {
    pub x_a: f64,
    pub x_b: f64,
    pub z_a: f64,
    pub z_b: f64,
}

impl LabelJacobian {
    pub fn det(&self) -> f64 {
        self.x_a * self.z_b - self.x_b * self.z_a
    }
}

pub fn jacobian(t: f64, lbl: LagrangianLabel, prm: &GerstnerParams) -> LabelJacobian {
    let phase = prm.k * (lbl.a - prm.c * t);
    let e = (prm.k * lbl.b).exp();
    let (s, c) = phase.sin_cos();
    LabelJacobian {
        x_a: 1.0 - e * c,
        x_b: -e * s,
        z_a: -e * s,
        z_b: 1.0 + e * c,
    }
}

/// Closed-form Jacobian determinant `1 - e^{2kb}`.
pub fn jacobian_det_exact(b: f64, prm: &GerstnerParams) -> f64 {
    -(2.0 * prm.k * b).exp_m1()
}

/// Result of inverting the label map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Inversion {
    pub label: LagrangianLabel,
    pub iterations: usize,
    pub residual: f64,
    /// Newton from the default start failed and was restarted from the
    /// bracketed solve; a sign of poor conditioning.
    pub restarted: bool,
}

fn surface_slack(prm: &GerstnerParams) -> f64 {
    SURFACE_SLACK * prm.length_scale()
}

fn reduce(x: f64, prm: &GerstnerParams) -> (f64, f64) {
    let lambda = prm.wavelength();
    let shift = (x / lambda).round() * lambda;
    (x - shift, shift)
}

/// Phase `xi` of the surface particle sitting above moving-frame `x`.
fn surface_phase(x: f64, prm: &GerstnerParams) -> Result<f64> {
    let (xr, shift) = reduce(x, prm);
    let r0 = prm.orbit_radius(prm.b0);
    let k = prm.k;
    let tol = 1e-15 * prm.wavelength();
    let xi = newton_bracketed(
        |xi| {
            let (s, c) = (k * xi).sin_cos();
            Ok((xi - r0 * s - xr, 1.0 - k * r0 * c))
        },
        xr - r0 - tol,
        xr + r0 + tol,
        tol,
        200,
    )?;
    Ok(xi + shift)
}

/// Free-surface elevation and slope above moving-frame `x`.
pub fn surface_point(x: f64, prm: &GerstnerParams) -> Result<SurfacePoint> {
    let xi = surface_phase(x, prm)?;
    let e0 = (prm.k * prm.b0).exp();
    let (s, c) = (prm.k * xi).sin_cos();
    let x_a = 1.0 - e0 * c;
    let slope = if x_a > 0.0 { -e0 * s / x_a } else { f64::INFINITY };
    Ok(SurfacePoint {
        x,
        eta: prm.h0 + prm.b0 + prm.orbit_radius(prm.b0) * c,
        slope,
    })
}

/// Phase `xi` with `xi - e^{kb}/k sin(k xi) = x` on streamline `b`.
fn streamline_phase(x: f64, b: f64, prm: &GerstnerParams) -> Result<f64> {
    let r = prm.orbit_radius(b);
    let k = prm.k;
    let tol = 1e-15 * (prm.wavelength() + x.abs());
    newton_bracketed(
        |xi| {
            let (s, c) = (k * xi).sin_cos();
            Ok((xi - r * s - x, 1.0 - k * r * c))
        },
        x - r - tol,
        x + r + tol,
        tol,
        200,
    )
}

/// Globally convergent start for [`invert_map`]: along the vertical at
/// `x`, the height of streamline `b` increases monotonically with `b`, at
/// rate `(1 - e^{2kb}) / (1 - e^{kb} cos(k xi))`.
fn nested_start(x: f64, z: f64, prm: &GerstnerParams) -> Result<(f64, f64)> {
    let height = |b: f64| -> Result<(f64, f64, f64)> {
        let xi = streamline_phase(x, b, prm)?;
        let e = (prm.k * b).exp();
        let c = (prm.k * xi).cos();
        Ok((prm.h0 + b + e / prm.k * c - z, (1.0 - e * e) / (1.0 - e * c), xi))
    };
    let (top, _, xi_top) = height(prm.b0)?;
    if top <= 0.0 {
        // within the surface slack
        return Ok((xi_top, prm.b0));
    }
    let lo = (z - prm.h0).min(prm.b0) - prm.length_scale();
    let tol = 1e-15 * (prm.length_scale() + lo.abs());
    let b = newton_bracketed(
        |b| {
            let (v, d, _) = height(b)?;
            Ok((v, d))
        },
        lo,
        prm.b0,
        tol,
        200,
    )?;
    Ok((height(b)?.2, b))
}

/// Label of the particle found at fixed-frame `(x, z)` at time `t`.
///
/// Damped Newton with the closed-form Jacobian from `(a, b) = (x, z - h0)`,
/// working on the phase reduced to one wavelength. On steep waves Newton
/// can stall against the surface; it is then restarted from a nested
/// bracketed solve. Points on the surface are accepted; points above it
/// are not.
pub fn invert_map(t: f64, pt: (f64, f64), prm: &GerstnerParams) -> Result<Inversion> {
    let (x_fixed, z) = pt;
    if !(x_fixed.is_finite() && z.is_finite()) {
        return Err(WaveError::OutOfDomain { x: x_fixed, z });
    }
    let x_moving = x_fixed - prm.c * t;
    let (xr, shift) = reduce(x_moving, prm);
    let slack = surface_slack(prm);
    let eta = surface_point(xr, prm)?.eta;
    if z > eta + slack {
        return Err(WaveError::OutOfDomain { x: x_fixed, z });
    }
    let start = (xr, (z - prm.h0).min(prm.b0));
    let ((xi, b, iterations, residual), restarted) = match newton_inversion(xr, z, start, prm) {
        Ok(found) => (found, false),
        Err(WaveError::Convergence { iterations: first, .. }) => {
            let (xi, b, more, res) = newton_inversion(xr, z, nested_start(xr, z, prm)?, prm)?;
            ((xi, b, first + more, res), true)
        }
        Err(e) => return Err(e),
    };
    Ok(Inversion {
        label: LagrangianLabel::new(xi + shift + prm.c * t, b),
        iterations,
        residual,
        restarted,
    })
}

fn newton_inversion(
    xr: f64,
    z: f64,
    start: (f64, f64),
    prm: &GerstnerParams,
) -> Result<(f64, f64, usize, f64)> {
    let k = prm.k;
    let b_max = prm.b0 + surface_slack(prm);
    let tol = INVERSION_TOL.max(4.0 * f64::EPSILON * (xr.abs() + (z - prm.h0).abs() + prm.length_scale()));

    let residual = |xi: f64, b: f64| {
        let e = (k * b).exp();
        let (s, c) = (k * xi).sin_cos();
        let fx = xi - e / k * s - xr;
        let fz = prm.h0 + b + e / k * c - z;
        (fx, fz, e, s, c)
    };

    let (mut xi, mut b) = start;
    let (mut fx, mut fz, mut e, mut s, mut c) = residual(xi, b);
    let mut norm = fx.hypot(fz);
    let mut iterations = 0;
    let mut polished = false;
    while iterations < MAX_NEWTON_ITERATIONS {
        if norm <= tol {
            if polished {
                break;
            }
            polished = true;
        }
        iterations += 1;
        let det = 1.0 - e * e;
        if !(det > 0.0) {
            return Err(WaveError::Convergence { iterations, residual: norm });
        }
        let (x_a, x_b, z_a, z_b) = (1.0 - e * c, -e * s, -e * s, 1.0 + e * c);
        let dxi = -(z_b * fx - x_b * fz) / det;
        let db = -(-z_a * fx + x_a * fz) / det;
        let mut step = 1.0;
        loop {
            let (txi, tb) = (xi + step * dxi, b + step * db);
            if tb <= b_max {
                let trial = residual(txi, tb);
                let tnorm = trial.0.hypot(trial.1);
                if tnorm < norm || (polished && tnorm <= norm) {
                    xi = txi;
                    b = tb;
                    (fx, fz, e, s, c) = trial;
                    norm = tnorm;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-10 {
                if norm <= tol {
                    break;
                }
                return Err(WaveError::Convergence { iterations, residual: norm });
            }
        }
        if polished && norm <= tol {
            break;
        }
    }
    if norm > tol {
        return Err(WaveError::Convergence { iterations, residual: norm });
    }
    Ok((xi, b, iterations, norm))
}

/// Free surface sampled as a polyline, with the horizontal stretch `X_a`
/// used to locate cusps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceProfile {
    pub points: Vec<(f64, f64)>,
    pub x_a: Vec<f64>,
    /// Indices where `X_a` vanishes (cycloid cusps).
    pub cusps: Vec<usize>,
}

impl SurfaceProfile {
    pub fn crest_to_trough(&self) -> f64 {
        let (lo, hi) = self
            .points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
        hi - lo
    }

    pub fn min_stretch(&self) -> f64 {
        self.x_a.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn surface_profile(t: f64, a_samples: &[f64], prm: &GerstnerParams) -> Result<SurfaceProfile> {
    if a_samples.is_empty() {
        return Err(WaveError::InsufficientData("surface profile needs at least one sample".into()));
    }
    let mut points = Vec::with_capacity(a_samples.len());
    let mut x_a = Vec::with_capacity(a_samples.len());
    let mut cusps = Vec::new();
    for (i, &a) in a_samples.iter().enumerate() {
        let lbl = LagrangianLabel::new(a, prm.b0);
        points.push(position(t, lbl, prm));
        let stretch = jacobian(t, lbl, prm).x_a;
        if stretch.abs() <= 1e-12 {
            cusps.push(i);
        }
        x_a.push(stretch);
    }
    Ok(SurfaceProfile { points, x_a, cusps })
}

/// Largest label whose orbit reaches down to elevation `z`: the root of
/// `h0 + b - e^{kb}/k = z`.
pub fn deepest_label_reaching(z: f64, prm: &GerstnerParams) -> Result<f64> {
    let target = z - prm.h0;
    let hi = prm.b0;
    if prm.h0 + hi - prm.orbit_radius(hi) < z {
        return Err(WaveError::Domain(format!("elevation {z} lies above the wave trough")));
    }
    newton_bracketed(
        |b| Ok((b - prm.orbit_radius(b) - target, 1.0 - (prm.k * b).exp())),
        target - prm.length_scale(),
        hi,
        1e-15 * (prm.length_scale() + target.abs()),
        200,
    )
}

/// The Gerstner wave as a steady flow in the moving frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GerstnerFlow {
    pub params: GerstnerParams,
    pub consts: PhysicalConstants,
}

impl GerstnerFlow {
    pub fn new(params: GerstnerParams, consts: PhysicalConstants) -> Self {
        Self { params, consts }
    }

    /// Finite-difference step used for field partials, `1e-5 / k`.
    pub fn fd_step(&self) -> f64 {
        1e-5 * self.params.length_scale()
    }

    /// Hodograph coordinate `p = -psi` of streamline `b`:
    /// `c [(b - b0) - (e^{2kb} - e^{2kb0}) / (2k)]`.
    pub fn stream_coordinate(&self, b: f64) -> f64 {
        let prm = &self.params;
        let e0sq = (2.0 * prm.k * prm.b0).exp();
        prm.c * ((b - prm.b0) - e0sq * (2.0 * prm.k * (b - prm.b0)).exp_m1() / (2.0 * prm.k))
    }

    /// Inverse of [`Self::stream_coordinate`].
    pub fn label_of_stream(&self, p: f64) -> Result<f64> {
        if !(p <= 0.0) {
            return Err(WaveError::Domain(format!("stream coordinate must be non-positive, got {p}")));
        }
        let prm = self.params;
        // p(b) <= c (b - b0) + c / (2k), so b0 + p/c - 1/k lies below the root
        let lo = prm.b0 + p / prm.c - prm.length_scale();
        let tol = 1e-15 * (prm.length_scale() + lo.abs());
        newton_bracketed(
            |b| Ok((self.stream_coordinate(b) - p, prm.c * jacobian_det_exact(b, &prm))),
            lo,
            prm.b0,
            tol,
            200,
        )
    }

    /// Pressure carried by streamline `b`:
    /// `P0 + rho g [(b0 - b) + (e^{2kb} - e^{2kb0}) / (2k)]`.
    pub fn streamline_pressure(&self, b: f64) -> f64 {
        let p = self.stream_coordinate(b);
        self.consts.p_atm - self.consts.rho * self.consts.g * p / self.params.c
    }

    /// Vorticity on streamline `b`: `-2 c k e^{2kb} / (1 - e^{2kb})`.
    pub fn streamline_vorticity(&self, b: f64) -> f64 {
        let prm = &self.params;
        -2.0 * prm.c * prm.k * (2.0 * prm.k * b).exp() / jacobian_det_exact(b, prm)
    }

    /// Moving-frame point of the particle with phase `xi` on streamline `b`.
    pub fn point(&self, xi: f64, b: f64) -> (f64, f64) {
        position(0.0, LagrangianLabel::new(xi, b), &self.params)
    }

    /// `n` points along streamline `b`, phases uniform over one wavelength.
    pub fn streamline(&self, b: f64, n: usize) -> Vec<(f64, f64)> {
        let lambda = self.params.wavelength();
        (0..n)
            .map(|i| self.point(lambda * i as f64 / n as f64, b))
            .collect()
    }

    /// `nx * nz` moving-frame points on streamlines between `b_top` and
    /// `b_bottom` (inclusive), phases uniform over one wavelength.
    pub fn label_grid(&self, nx: usize, nz: usize, b_top: f64, b_bottom: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(nx * nz);
        for j in 0..nz {
            let s = if nz > 1 { j as f64 / (nz - 1) as f64 } else { 0.0 };
            let b = b_top + (b_bottom - b_top) * s;
            out.extend(self.streamline(b, nx));
        }
        out
    }

    /// See [`deepest_label_reaching`].
    pub fn deepest_label_reaching(&self, z: f64) -> Result<f64> {
        deepest_label_reaching(z, &self.params)
    }

    /// Upper bound `c e^{k b*(z)}` on the particle speed at elevation `z`.
    pub fn speed_envelope(&self, z: f64) -> Result<f64> {
        let b = self.deepest_label_reaching(z)?;
        Ok(self.params.c * (self.params.k * b).exp())
    }

    /// Eulerian sample with vorticity from finite differences at
    /// [`Self::fd_step`].
    pub fn eulerian_field(&self, x: f64, z: f64) -> Result<FlowSample> {
        crate::flow::sample(self, x, z, self.fd_step())
    }
}

impl SteadyFlow for GerstnerFlow {
    fn wave_speed(&self) -> f64 {
        self.params.c
    }

    fn state(&self, x: f64, z: f64) -> Result<FlowState> {
        let inv = invert_map(0.0, (x, z), &self.params)?;
        let (u, w) = velocity(0.0, inv.label, &self.params);
        Ok(FlowState {
            u,
            w,
            pressure: self.streamline_pressure(inv.label.b),
            psi: -self.stream_coordinate(inv.label.b),
        })
    }

    fn surface(&self, x: f64) -> Result<SurfacePoint> {
        surface_point(x, &self.params)
    }

    fn bed(&self) -> Option<f64> {
        None
    }

    fn length_scale(&self) -> f64 {
        self.params.length_scale()
    }

    fn period(&self) -> Option<f64> {
        Some(self.params.wavelength())
    }

    fn contains(&self, x: f64, z: f64) -> bool {
        match surface_point(x, &self.params) {
            Ok(s) => z.is_finite() && z <= s.eta + surface_slack(&self.params),
            Err(_) => false,
        }
    }
}

/// Settings of the pressure line integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressureQuadrature {
    /// Finite-difference step for velocity partials (m).
    pub fd_step: f64,
    /// Stop when successive Simpson estimates differ by less (Pa).
    pub tol: f64,
    pub initial_intervals: usize,
    pub max_intervals: usize,
}

impl PressureQuadrature {
    /// `fd_step = 1e-5 L`, `tol = 1e-9 rho g L` for intrinsic length `L`.
    pub fn for_length(length: f64, consts: &PhysicalConstants) -> Self {
        Self {
            fd_step: 1e-5 * length,
            tol: 1e-9 * consts.rho * consts.g * length,
            initial_intervals: 16,
            max_intervals: 1 << 14,
        }
    }
}

/// `-P_z / rho = (u - c) w_x + w w_z - 2 omega u + g`.
fn vertical_load<F: SteadyFlow + ?Sized>(
    flow: &F,
    consts: &PhysicalConstants,
    x: f64,
    z: f64,
    h: f64,
) -> Result<f64> {
    let s = flow.state(x, z)?;
    let dx = adaptive_partials(flow, x, z, h, Axis::X)?;
    let dz = adaptive_partials(flow, x, z, h, Axis::Z)?;
    Ok((s.u - flow.wave_speed()) * dx.w + s.w * dz.w - 2.0 * consts.omega * s.u + consts.g)
}

/// `-P_x / rho = (u - c) u_x + w u_z + 2 omega w`.
fn horizontal_load<F: SteadyFlow + ?Sized>(
    flow: &F,
    consts: &PhysicalConstants,
    x: f64,
    z: f64,
    h: f64,
) -> Result<f64> {
    let s = flow.state(x, z)?;
    let dx = adaptive_partials(flow, x, z, h, Axis::X)?;
    let dz = adaptive_partials(flow, x, z, h, Axis::Z)?;
    Ok((s.u - flow.wave_speed()) * dx.u + s.w * dz.u + 2.0 * consts.omega * s.w)
}

fn vertical_descent<F: SteadyFlow + ?Sized>(
    flow: &F,
    consts: &PhysicalConstants,
    x: f64,
    z: f64,
    opts: &PressureQuadrature,
) -> Result<f64> {
    let top = flow.surface(x)?.eta;
    if z > top || !flow.contains(x, z) {
        return Err(WaveError::OutOfDomain { x, z });
    }
    let integral = simpson_halving(
        |s| vertical_load(flow, consts, x, s, opts.fd_step),
        z,
        top,
        opts.tol / consts.rho,
        opts.initial_intervals,
        opts.max_intervals,
    )?;
    Ok(consts.p_atm + consts.rho * integral)
}

/// Pressure reconstructed from the velocity field alone.
///
/// Starts from `P0` at the surface point directly above `(x, z)` and
/// integrates `P_z` down the vertical, with the momentum balance supplying
/// `P_z` from finite-difference velocity partials.
pub fn pressure_field<F: SteadyFlow + ?Sized>(
    flow: &F,
    consts: &PhysicalConstants,
    x: f64,
    z: f64,
    opts: &PressureQuadrature,
) -> Result<f64> {
    vertical_descent(flow, consts, x, z, opts)
}

/// Same reconstruction along a second path: down the vertical at
/// `x_start`, then horizontally at depth `z` to `x`.
pub fn pressure_field_via<F: SteadyFlow + ?Sized>(
    flow: &F,
    consts: &PhysicalConstants,
    x: f64,
    z: f64,
    x_start: f64,
    opts: &PressureQuadrature,
) -> Result<f64> {
    let n_check = 64;
    for i in 0..=n_check {
        let xs = x_start + (x - x_start) * i as f64 / n_check as f64;
        if !flow.contains(xs, z) {
            return Err(WaveError::IntegrationPath(format!(
                "horizontal segment at z = {z} crosses the surface near x = {xs}"
            )));
        }
    }
    let corner = vertical_descent(flow, consts, x_start, z, opts)?;
    let integral = simpson_halving(
        |s| {
            if !flow.contains(s, z) {
                return Err(WaveError::IntegrationPath(format!(
                    "horizontal segment leaves the fluid at ({s}, {z})"
                )));
            }
            horizontal_load(flow, consts, s, z, opts.fd_step)
        },
        x_start,
        x,
        opts.tol / consts.rho,
        opts.initial_intervals,
        opts.max_intervals,
    )?;
    Ok(corner - consts.rho * integral)
}
