use wavelab::gerstner::{position, velocity};
use wavelab::pathtrace::{integrate_path, orbit_diagnostics, trace_orbit, TraceOptions};
use wavelab::*;

fn trace(prm: &GerstnerParams, lbl: LagrangianLabel) -> wavelab::pathtrace::TracedOrbit {
    trace_orbit(position(0.0, lbl, prm), 0.0, prm, &TraceOptions::for_params(prm)).unwrap()
}

#[test]
fn unit_wavenumber_period() {
    let consts = PhysicalConstants::default().with_omega(0.0).unwrap();
    let prm = GerstnerParams::new(1.0, -0.3, 0.0, &consts).unwrap();
    assert!((prm.period() - 2.0071).abs() < 5e-5, "period {}", prm.period());
    let orbit = trace(&prm, LagrangianLabel::new(0.0, -1.0));
    assert!((orbit.diagnostics.measured_period / prm.period() - 1.0).abs() < 1e-6);
    assert!(orbit.diagnostics.phase_residual < 1e-6);
}

#[test]
fn deep_particle_is_nearly_at_rest() {
    let consts = PhysicalConstants::default();
    let prm = GerstnerParams::new(0.01, -10.0, 0.0, &consts).unwrap();
    let lbl = LagrangianLabel::new(30.0, -8.0 / prm.k);
    let orbit = trace(&prm, lbl);
    let r = (-8.0_f64).exp() / prm.k;
    assert!((orbit.trajectory.radius - r).abs() < 1e-12 * r);
    assert!(orbit.diagnostics.max_radial_deviation < 1e-7 * prm.length_scale());
    let (u, w) = velocity(0.0, lbl, &prm);
    assert!(u.hypot(w) < 1e-3 * prm.c);
}

#[test]
fn equal_labels_share_radius_and_period() {
    let consts = PhysicalConstants::default();
    let prm = GerstnerParams::new(0.01, -10.0, 0.0, &consts).unwrap();
    let b = -1.2 / prm.k;
    let first = trace(&prm, LagrangianLabel::new(0.0, b));
    let second = trace(&prm, LagrangianLabel::new(217.0, b));
    let (d1, d2) = (first.diagnostics, second.diagnostics);
    assert!((first.trajectory.radius - second.trajectory.radius).abs() < 1e-12 * first.trajectory.radius);
    assert!((d1.measured_period - d2.measured_period).abs() < 1e-9 * prm.period());
    assert!((d1.measured_period / prm.period() - 1.0).abs() < 1e-6);
}

#[test]
fn closed_orbit_has_no_drift() {
    let consts = PhysicalConstants::default();
    let prm = GerstnerParams::new(0.01, -10.0, 0.0, &consts).unwrap();
    let lbl = LagrangianLabel::new(10.0, -0.5 / prm.k);
    let dt = prm.period() / 2048.0;
    let traj = integrate_path(position(0.0, lbl, &prm), 0.0, dt, 2048, &prm).unwrap();
    let d = orbit_diagnostics(&traj).unwrap();
    let l = prm.length_scale();
    assert!(d.closure_gap < 1e-7 * l, "closure {:e}", d.closure_gap);
    assert!(d.drift.abs() < 1e-7 * l, "drift {:e}", d.drift);
    assert!(traj.max_error_against(&prm) < 1e-7 * l);
}
