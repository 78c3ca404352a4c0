//! The verification suite behind `wavelab verify`, grouped by subject.
//!
//! Every check yields a [`CheckRecord`] holding the worst value found, in
//! the unit its tolerance is stated in. Module errors become `error`
//! records rather than aborting the run.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{LaminarConfig, RunConfig};
use crate::error::{Result, WaveError};
use crate::flow::{SteadyFlow, SurfacePoint};
use crate::gammaflow::{beta_of_p, default_steps, implicit_residual, k_and_t, refine_gamma, GammaConstants};
use crate::gerstner::{pressure_field, surface_point, GerstnerFlow, PressureQuadrature};
use crate::hodograph::{
    bernoulli_residual, check_has, circle_identity, clustered_samples, cubic_coefficients, extract_profiles,
    height_function, ExtractionOptions, Profiles,
};
use crate::laminar::{bed_violation_of_gerstner, build_laminar, LaminarFlow};
use crate::params::{dispersion_residual, GerstnerParams};
use crate::pathtrace::{convergence_study, trace_batch, TraceOptions};
use crate::verify::{boundary_residuals, euler_convergence, hydraulic_head, isobaric_check, ResidualReport};

/// Streamlines of the residual, isobaric and hodograph grids reach down to
/// `b0 - DEPTH_SPAN / k`.
pub const DEPTH_SPAN: f64 = 4.0;
/// Top row of the residual grid, `b0 - RESIDUAL_TOP / k`.
pub const RESIDUAL_TOP: f64 = 0.5;
/// The vorticity ODE is integrated down to `b0 - GAMMA_SPAN / k`.
pub const GAMMA_SPAN: f64 = 8.0;
/// Richardson target of the vorticity ODE, in units of `alpha^2 / A^2`.
pub const GAMMA_REFINE_TOL: f64 = 1e-12;
/// Probe rows sit at `h0 + b0 - n / k` for these `n`.
pub const PROBE_DEPTHS: [f64; 3] = [2.0, 4.0, 8.0];
/// Slack on the speed-to-envelope ratio of the decay probes.
pub const ENVELOPE_SLACK: f64 = 1e-9;
/// `k d` of the bed-violation experiment.
pub const BED_KD: f64 = 4.0;
/// Accepted band for `max |w| / (c e^{-kd})`.
pub const BED_BAND: (f64, f64) = (0.5, 2.0);
/// Accepted band for RK4 error ratios under dt halving.
pub const ORDER4_BAND: (f64, f64) = (12.0, 20.0);
/// Accepted fraction of `|gamma(surface)|` left at the bottom of the ODE run.
pub const GAMMA_DECAY: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    #[serde(rename = "n/a")]
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub group: String,
    pub name: String,
    pub status: Status,
    pub pass: bool,
    /// Worst value found, in units of `unit`.
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub unit: String,
    /// Richardson or step-halving ratios where the check has them.
    pub ratios: Vec<f64>,
    pub detail: Option<String>,
}

impl CheckRecord {
    fn base(group: &str, name: &str, status: Status, unit: &str) -> Self {
        Self {
            group: group.into(),
            name: name.into(),
            status,
            pass: status == Status::Pass,
            value: None,
            tolerance: None,
            unit: unit.into(),
            ratios: Vec::new(),
            detail: None,
        }
    }

    /// Passes when `value <= tol`.
    pub fn at_most(group: &str, name: &str, value: f64, tol: f64, unit: &str) -> Self {
        let status = if value <= tol { Status::Pass } else { Status::Fail };
        Self {
            value: Some(value),
            tolerance: Some(tol),
            ..Self::base(group, name, status, unit)
        }
    }

    /// Passes when `value` lies in `[lo, hi]`; the tolerance field holds `hi`.
    pub fn within(group: &str, name: &str, value: f64, band: (f64, f64), unit: &str) -> Self {
        let status = if value >= band.0 && value <= band.1 { Status::Pass } else { Status::Fail };
        Self {
            value: Some(value),
            tolerance: Some(band.1),
            detail: Some(format!("accepted band [{}, {}]", band.0, band.1)),
            ..Self::base(group, name, status, unit)
        }
    }

    pub fn flag(group: &str, name: &str, ok: bool, detail: String) -> Self {
        Self {
            detail: Some(detail),
            ..Self::base(group, name, if ok { Status::Pass } else { Status::Fail }, "")
        }
    }

    pub fn error(group: &str, name: &str, err: &WaveError) -> Self {
        Self {
            detail: Some(err.to_string()),
            ..Self::base(group, name, Status::Error, "")
        }
    }

    pub fn skipped(group: &str, name: &str, why: &str) -> Self {
        Self {
            detail: Some(why.into()),
            ..Self::base(group, name, Status::Skipped, "")
        }
    }

    fn with_ratios(mut self, ratios: Vec<f64>) -> Self {
        self.ratios = ratios;
        self
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }
}

/// Runs `body`; on error every check of the group is recorded as failed
/// with the error message.
fn guarded<F>(group: &str, names: &[&str], body: F) -> Vec<CheckRecord>
where
    F: FnOnce() -> Result<Vec<CheckRecord>>,
{
    match body() {
        Ok(records) => records,
        Err(e) => names.iter().map(|n| CheckRecord::error(group, n, &e)).collect(),
    }
}

fn skipped(group: &str, names: &[&str], why: &str) -> Vec<CheckRecord> {
    names.iter().map(|n| CheckRecord::skipped(group, n, why)).collect()
}

pub const GERSTNER_GROUPS: [(&str, &[&str]); 6] = [
    ("residuals", &["momentum_x", "momentum_z", "continuity"]),
    ("boundary", &["surface_pressure", "kinematic", "decay"]),
    ("isobaric", &["streamline_spread", "pressure_routes"]),
    ("hodograph", &["has", "ais", "bernoulli", "circle"]),
    ("gamma", &["first_integral", "monotone_decay", "orbit_radius", "label_map", "beta_forms"]),
    ("paths", &["closure", "radius", "period", "drift", "phase", "order"]),
];
pub const LAMINAR_NAMES: [&str; 5] = ["momentum_x", "momentum_z", "continuity", "boundary", "head"];

pub fn dispersion_checks(cfg: &RunConfig) -> Vec<CheckRecord> {
    guarded("dispersion", &["relation"], || {
        let prm = cfg.gerstner_params()?;
        let r = dispersion_residual(prm.k, prm.c, &cfg.constants).abs();
        Ok(vec![CheckRecord::at_most("dispersion", "relation", r, cfg.tolerances.dispersion, "m/s^2")
            .with_detail(format!("c = {:.15e} m/s", prm.c))])
    })
}

fn residual_record(group: &str, r: &ResidualReport, tol: f64) -> CheckRecord {
    let ok = r.converged && r.extrapolated_nondim <= tol;
    let mut rec = CheckRecord::at_most(group, &r.name, r.extrapolated_nondim, tol, "nondimensional");
    if !ok {
        rec.status = Status::Fail;
        rec.pass = false;
    }
    rec.with_ratios(r.ratios.clone())
        .with_detail(format!("finest-step residual {:.3e} nondimensional", r.max_nondim))
}

/// Steady Euler residuals on the label grid below the surface.
pub fn residual_checks(cfg: &RunConfig, flow: &GerstnerFlow) -> Vec<CheckRecord> {
    let names = GERSTNER_GROUPS[0].1;
    guarded("residuals", names, || {
        let prm = flow.params;
        let l = prm.length_scale();
        let points = flow.label_grid(
            cfg.grid.residual_phases,
            cfg.grid.residual_labels,
            prm.b0 - RESIDUAL_TOP * l,
            prm.b0 - DEPTH_SPAN * l,
        );
        let grid = format!("{}x{}", cfg.grid.residual_phases, cfg.grid.residual_labels);
        let reports = euler_convergence(flow, &cfg.constants, &points, cfg.fd.residual_step * l, cfg.fd.halvings, &grid)?;
        Ok(reports.iter().map(|r| residual_record("residuals", r, cfg.tolerances.residual)).collect())
    })
}

fn surface_samples(prm: &GerstnerParams, n: usize) -> Result<Vec<SurfacePoint>> {
    let lambda = prm.wavelength();
    (0..n).map(|i| surface_point(lambda * i as f64 / n as f64, prm)).collect()
}

/// Dynamic and kinematic surface conditions and the decay with depth.
pub fn boundary_checks(cfg: &RunConfig, flow: &GerstnerFlow) -> Vec<CheckRecord> {
    let names = GERSTNER_GROUPS[1].1;
    guarded("boundary", names, || {
        let prm = flow.params;
        let consts = &cfg.constants;
        let l = prm.length_scale();
        let surface = surface_samples(&prm, cfg.grid.surface_samples)?;
        let levels: Vec<f64> = PROBE_DEPTHS.iter().map(|n| prm.h0 + prm.b0 - n * l).collect();
        let report = boundary_residuals(flow, &surface, consts, &levels)?;
        let pressure_scale = consts.rho * consts.g * l;
        let mut worst_ratio: f64 = 0.0;
        for probe in &report.decay {
            worst_ratio = worst_ratio.max(probe.max_speed_component() / flow.speed_envelope(probe.z)?);
        }
        Ok(vec![
            CheckRecord::at_most(
                "boundary",
                "surface_pressure",
                report.surface_pressure / pressure_scale,
                cfg.tolerances.surface_pressure,
                "rho g / k",
            ),
            CheckRecord::at_most("boundary", "kinematic", report.kinematic / prm.c, cfg.tolerances.kinematic, "c"),
            CheckRecord::at_most("boundary", "decay", worst_ratio, 1.0 + ENVELOPE_SLACK, "speed / envelope")
                .with_detail(format!("probes at z = {levels:?}")),
        ])
    })
}

/// Streamlines `b0 - (j + 1) span / (n k)`, `j < n`.
pub fn check_streamlines(prm: &GerstnerParams, n: usize) -> Vec<f64> {
    let l = prm.length_scale();
    (0..n).map(|j| prm.b0 - (j + 1) as f64 * DEPTH_SPAN * l / n as f64).collect()
}

/// Pressure from the line integral along sampled streamlines, plus the
/// configured fault `eps rho g / k sin(k x)`.
pub fn isobaric_checks(cfg: &RunConfig, flow: &GerstnerFlow) -> Vec<CheckRecord> {
    let names = GERSTNER_GROUPS[2].1;
    guarded("isobaric", names, || {
        let prm = flow.params;
        let consts = cfg.constants;
        let scale = consts.rho * consts.g * prm.length_scale();
        let quad = PressureQuadrature::for_length(prm.length_scale(), &consts);
        let fault = cfg.fault.pressure_amplitude * scale;
        let labels = check_streamlines(&prm, cfg.grid.streamlines);
        let lines: Vec<Vec<(f64, f64)>> = labels.iter().map(|&b| flow.streamline(b, cfg.grid.streamline_points)).collect();
        let integrated: Vec<Vec<f64>> = lines
            .par_iter()
            .map(|line| line.iter().map(|&(x, z)| pressure_field(flow, &consts, x, z, &quad)).collect())
            .collect::<Result<_>>()?;
        let lookup: HashMap<(u64, u64), f64> = lines
            .iter()
            .flatten()
            .zip(integrated.iter().flatten())
            .map(|(&(x, z), &v)| ((x.to_bits(), z.to_bits()), v))
            .collect();
        let pressure = |x: f64, z: f64| -> Result<f64> {
            let v = lookup.get(&(x.to_bits(), z.to_bits())).ok_or(WaveError::OutOfDomain { x, z })?;
            Ok(v + fault * (prm.k * x).sin())
        };
        let report = isobaric_check(pressure, &lines)?;
        // Line integral against the closed form, without the fault.
        let routes = integrated
            .iter()
            .zip(&labels)
            .flat_map(|(vals, &b)| {
                let closed = flow.streamline_pressure(b);
                vals.iter().map(move |v| (v - closed).abs())
            })
            .fold(0.0, f64::max);
        Ok(vec![
            CheckRecord::at_most("isobaric", "streamline_spread", report.worst / scale, cfg.tolerances.isobaric, "rho g / k")
                .with_detail(format!(
                    "{} streamlines x {} points, injected fault {:e} rho g / k",
                    lines.len(),
                    cfg.grid.streamline_points,
                    cfg.fault.pressure_amplitude
                )),
            CheckRecord::at_most("isobaric", "pressure_routes", routes / scale, cfg.tolerances.isobaric, "rho g / k"),
        ])
    })
}

/// Profiles extracted on clustered stream coordinates down to `b0 - 4/k`.
pub fn gerstner_profiles(cfg: &RunConfig, flow: &GerstnerFlow) -> Result<Profiles> {
    let prm = flow.params;
    let opts = ExtractionOptions::for_flow(flow);
    let p_min = flow.stream_coordinate(prm.b0 - DEPTH_SPAN * prm.length_scale());
    let ps = clustered_samples(p_min, cfg.grid.hodograph_samples, opts.step)?;
    extract_profiles(flow, &cfg.constants, &ps, &opts)
}

pub fn hodograph_checks(cfg: &RunConfig, flow: &GerstnerFlow, profiles: &Result<Profiles>) -> Vec<CheckRecord> {
    let names = GERSTNER_GROUPS[3].1;
    guarded("hodograph", names, || {
        let profiles = profiles.as_ref().map_err(Clone::clone)?;
        let prm = flow.params;
        let (c, k) = (prm.c, prm.k);
        let gc = GammaConstants::from_profiles(profiles)?;
        let n = cfg.grid.hodograph_abscissae;
        let qs: Vec<f64> = (0..n).map(|i| prm.wavelength() * i as f64 / n as f64).collect();
        let (mut has, mut bern, mut circle, mut ais) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
        for prof in &profiles.samples {
            ais = ais.max(cubic_coefficients(prof, profiles.alpha).max_nondimensional(c, k));
            for &q in &qs {
                let s = height_function(flow, q, prof.p)?;
                has = has.max(check_has(&s, prof));
                bern = bern.max(bernoulli_residual(&s, prof, profiles.alpha, &cfg.constants));
                circle = circle.max(circle_identity(&s, prof, &gc)?.deviation);
            }
        }
        let t = &cfg.tolerances;
        Ok(vec![
            CheckRecord::at_most("hodograph", "has", has / c, t.has, "c"),
            CheckRecord::at_most("hodograph", "ais", ais, t.ais, "nondimensional"),
            CheckRecord::at_most("hodograph", "bernoulli", bern / (c * c), t.bernoulli, "c^2"),
            CheckRecord::at_most("hodograph", "circle", circle * k, t.circle, "1/k"),
        ])
    })
}

/// The vorticity ODE from the extracted constants, its first integral,
/// and the orbit radius and label map it implies.
pub fn gamma_checks(cfg: &RunConfig, flow: &GerstnerFlow, profiles: &Result<Profiles>) -> Vec<CheckRecord> {
    let names = GERSTNER_GROUPS[4].1;
    guarded("gamma", names, || {
        let profiles = profiles.as_ref().map_err(Clone::clone)?;
        let prm = flow.params;
        let (c, k) = (prm.c, prm.k);
        let gc = GammaConstants::from_profiles(profiles)?;
        let p_end = flow.stream_coordinate(prm.b0 - GAMMA_SPAN * prm.length_scale());
        let steps = default_steps(0.0, p_end, c / k);
        let refined = refine_gamma(profiles.surface_gamma, 0.0, p_end, steps, &gc, GAMMA_REFINE_TOL * gc.width())?;
        let profile = &refined.profile;
        let implicit = implicit_residual(profile, &gc)?;

        let g = &profile.gamma;
        let negative = g.iter().all(|&v| v < 0.0);
        // p decreases along the grid, so gamma' < 0 means gamma increases.
        let rising = g.windows(2).all(|w| w[1] > w[0]);
        let decayed = g.last().unwrap().abs() <= GAMMA_DECAY * g[0].abs();

        let orbit = k_and_t(profile, &gc)?;
        let (mut radius_err, mut label_err) = (0.0_f64, 0.0_f64);
        for ((&p, &kk), &tt) in orbit.p.iter().zip(&orbit.radius).zip(&orbit.label) {
            let b = flow.label_of_stream(p)?;
            let exact = prm.orbit_radius(b);
            radius_err = radius_err.max((kk - exact).abs() / exact);
            label_err = label_err.max((tt - b).abs() * k);
        }
        let beta = beta_of_p(profile, &gc, implicit.c1);
        let t = &cfg.tolerances;
        Ok(vec![
            CheckRecord::at_most("gamma", "first_integral", implicit.max_nondim, t.first_integral, "alpha^2 / A^2")
                .with_detail(format!("{} RK4 steps, refinement converged: {}", profile.steps(), refined.converged)),
            CheckRecord::flag(
                "gamma",
                "monotone_decay",
                negative && rising && decayed,
                format!(
                    "gamma < 0: {negative}, gamma' < 0: {rising}, |gamma| at b0 - {GAMMA_SPAN}/k is {:.3e} of its surface value",
                    g.last().unwrap().abs() / g[0].abs()
                ),
            ),
            CheckRecord::at_most("gamma", "orbit_radius", radius_err, t.identification, "relative"),
            CheckRecord::at_most("gamma", "label_map", label_err, t.identification, "1/k"),
            CheckRecord::at_most("gamma", "beta_forms", beta.max_disagreement() / c, t.has, "c"),
        ])
    })
}

/// Orbits of the configured particles and the RK4 order study.
pub fn path_checks(cfg: &RunConfig, prm: &GerstnerParams) -> Vec<CheckRecord> {
    let names = GERSTNER_GROUPS[5].1;
    guarded("paths", names, || {
        let pc = &cfg.paths;
        if pc.particles.is_empty() {
            return Err(WaveError::InsufficientData("no particles configured".into()));
        }
        let l = prm.length_scale();
        let starts: Vec<(f64, f64)> = pc.particles.iter().map(|s| s.start(pc.t0, prm)).collect();
        let opts = TraceOptions {
            steps_per_period: pc.steps_per_period,
            max_halvings: pc.max_halvings,
            tol: 1e-2 * cfg.tolerances.orbit * l,
            periods: pc.periods,
        };
        let orbits = trace_batch(&starts, pc.t0, prm, &opts).into_iter().collect::<Result<Vec<_>>>()?;
        let (mut closure, mut radius, mut period, mut drift, mut phase) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
        for o in &orbits {
            let d = &o.diagnostics;
            closure = closure.max(d.closure_gap / l);
            radius = radius.max(d.max_radial_deviation / l);
            period = period.max((d.measured_period / prm.period() - 1.0).abs());
            drift = drift.max(d.drift.abs() / l);
            phase = phase.max(d.phase_residual);
        }
        let errors = convergence_study(starts[0], pc.t0, prm, pc.order_base, 3)?;
        let ratios = crate::numerics::successive_ratios(&errors);
        let in_band = ratios.iter().all(|r| *r >= ORDER4_BAND.0 && *r <= ORDER4_BAND.1);
        let t = &cfg.tolerances;
        Ok(vec![
            CheckRecord::at_most("paths", "closure", closure, t.orbit, "1/k"),
            CheckRecord::at_most("paths", "radius", radius, t.orbit, "1/k"),
            CheckRecord::at_most("paths", "period", period, t.period, "relative"),
            CheckRecord::at_most("paths", "drift", drift, t.orbit, "1/k"),
            CheckRecord::at_most("paths", "phase", phase, t.period, "rad"),
            CheckRecord::flag(
                "paths",
                "order",
                in_band,
                format!("path error ratios under dt halving, accepted band [{}, {}]", ORDER4_BAND.0, ORDER4_BAND.1),
            )
            .with_ratios(ratios),
        ])
    })
}

/// Vertical velocity a Gerstner wave would impose on a bed at `k d = 4`.
pub fn bed_violation_check(prm: &GerstnerParams) -> Vec<CheckRecord> {
    guarded("laminar", &["bed_violation"], || {
        let depth = BED_KD / prm.k - prm.h0;
        let v = bed_violation_of_gerstner(prm, depth)?;
        Ok(vec![CheckRecord::within("laminar", "bed_violation", v.max_w / v.depth_envelope, BED_BAND, "c e^{-kd}")
            .with_detail(format!("max |w| = {:.6e} m/s on z = {}", v.max_w, v.bed))])
    })
}

pub fn laminar_flow(cfg: &RunConfig, lam: &LaminarConfig) -> Result<LaminarFlow> {
    let c = cfg.laminar_speed(lam)?;
    build_laminar(&lam.shear_profile(), lam.eta0, lam.depth, &cfg.constants, c)
}

/// Residuals, boundary conditions and hydraulic head of a laminar flow.
///
/// `x`-independence makes the horizontal momentum and continuity residuals
/// vanish identically; they must come out exactly zero.
pub fn laminar_checks(cfg: &RunConfig, lam: &LaminarConfig) -> Vec<CheckRecord> {
    guarded("laminar", &LAMINAR_NAMES, || {
        let flow = laminar_flow(cfg, lam)?;
        let l = flow.length_scale();
        let (bed, top) = (-flow.depth, flow.eta0);
        let margin = 0.05 * (top - bed);
        let (nx, nz) = (cfg.grid.residual_phases, cfg.grid.laminar_levels);
        let mut points = Vec::with_capacity(nx * nz);
        for j in 0..nz {
            let z = bed + margin + (top - bed - 2.0 * margin) * j as f64 / (nz - 1) as f64;
            points.extend((0..nx).map(|i| (l * i as f64 / nx as f64, z)));
        }
        let reports = euler_convergence(&flow, &cfg.constants, &points, cfg.fd.residual_step * l, cfg.fd.halvings, "laminar")?;
        let mut out = Vec::new();
        for (i, r) in reports.iter().enumerate() {
            if i == 1 {
                out.push(residual_record("laminar", r, cfg.tolerances.laminar));
            } else {
                let mut rec = CheckRecord::flag(
                    "laminar",
                    &r.name,
                    r.max_abs == 0.0,
                    format!("must vanish exactly: max |r| = {:e}", r.max_abs),
                );
                rec.value = Some(r.max_abs);
                rec.tolerance = Some(0.0);
                out.push(rec);
            }
        }
        let surface: Vec<SurfacePoint> = (0..cfg.grid.surface_samples)
            .map(|i| SurfacePoint { x: l * i as f64 / cfg.grid.surface_samples as f64, eta: top, slope: 0.0 })
            .collect();
        let b = boundary_residuals(&flow, &surface, &cfg.constants, &[])?;
        let raw = [b.surface_pressure, b.kinematic, b.bed.unwrap_or(0.0)];
        let mut rec = CheckRecord::flag(
            "laminar",
            "boundary",
            raw.iter().all(|v| *v == 0.0),
            format!(
                "must vanish exactly: |P - P0| = {:e} Pa, kinematic {:e} m/s, bed |w| = {:e} m/s",
                raw[0], raw[1], raw[2]
            ),
        );
        rec.value = Some(raw.iter().copied().fold(0.0, f64::max));
        rec.tolerance = Some(0.0);
        out.push(rec);
        let head = hydraulic_head(&flow, &points, &cfg.constants, Some(&flow))?;
        out.push(CheckRecord::at_most("laminar", "head", head.spread / (flow.c * flow.c), cfg.tolerances.bernoulli, "c^2"));
        Ok(out)
    })
}

/// All checks for the configured flow, in a fixed order.
pub fn run_suite(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = dispersion_checks(cfg);
    match &cfg.laminar {
        Some(lam) => {
            for (group, names) in GERSTNER_GROUPS {
                out.extend(skipped(group, names, "Gerstner-only check; laminar configuration"));
            }
            out.push(CheckRecord::skipped("laminar", "bed_violation", "Gerstner-only check; laminar configuration"));
            out.extend(laminar_checks(cfg, lam));
        }
        None => {
            let prm = match cfg.gerstner_params() {
                Ok(p) => p,
                Err(e) => {
                    for (group, names) in GERSTNER_GROUPS {
                        out.extend(names.iter().map(|n| CheckRecord::error(group, n, &e)));
                    }
                    return out;
                }
            };
            let flow = GerstnerFlow::new(prm, cfg.constants);
            out.extend(residual_checks(cfg, &flow));
            out.extend(boundary_checks(cfg, &flow));
            out.extend(isobaric_checks(cfg, &flow));
            let profiles = gerstner_profiles(cfg, &flow);
            out.extend(hodograph_checks(cfg, &flow, &profiles));
            out.extend(gamma_checks(cfg, &flow, &profiles));
            out.extend(path_checks(cfg, &prm));
            out.extend(bed_violation_check(&prm));
            out.extend(skipped("laminar", &LAMINAR_NAMES, "laminar-only check; Gerstner configuration"));
        }
    }
    out
}
