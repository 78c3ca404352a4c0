use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavelab::gerstner::{
    invert_map, position, pressure_field, pressure_field_via, surface_point, velocity, PressureQuadrature,
};
use wavelab::*;

fn canonical() -> (PhysicalConstants, GerstnerParams, GerstnerFlow) {
    let consts = PhysicalConstants::default();
    let prm = GerstnerParams::new(0.01, -10.0, 0.0, &consts).unwrap();
    (consts, prm, GerstnerFlow::new(prm, consts))
}

#[test]
fn inversion_round_trips_random_labels() {
    let (_, prm, _) = canonical();
    let l = prm.length_scale();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..1000 {
        let lbl = LagrangianLabel::new(
            rng.random_range(0.0..prm.wavelength()),
            rng.random_range(prm.b0 - 5.0 * l..prm.b0 - 1e-3),
        );
        let t = rng.random_range(0.0..prm.period());
        let inv = invert_map(t, position(t, lbl, &prm), &prm).unwrap();
        assert!((inv.label.a - lbl.a).abs() < 1e-10 * l, "a: {lbl:?} -> {:?}", inv.label);
        assert!((inv.label.b - lbl.b).abs() < 1e-10 * l, "b: {lbl:?} -> {:?}", inv.label);
    }
}

#[test]
fn velocity_matches_position_differences_at_second_order() {
    let consts = PhysicalConstants::default().with_omega(0.0).unwrap();
    let prm = GerstnerParams::new(1.0, -0.2, 0.0, &consts).unwrap();
    let lbl = LagrangianLabel::new(0.4, -1.0);
    let (t, u) = (0.3, velocity(0.3, lbl, &prm));
    let errors: Vec<f64> = [0.05, 0.025, 0.0125]
        .iter()
        .map(|&dt| {
            let (xp, zp) = position(t + dt, lbl, &prm);
            let (xm, zm) = position(t - dt, lbl, &prm);
            ((xp - xm) / (2.0 * dt) - u.0).hypot((zp - zm) / (2.0 * dt) - u.1)
        })
        .collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }
}

#[test]
fn eulerian_field_is_steady_in_the_moving_frame() {
    let (_, prm, flow) = canonical();
    let (x, z) = (37.0, -150.0);
    let steady = flow.eulerian_field(x, z).unwrap();
    for t in [0.0, 1.7, 9.3, 25.0] {
        let inv = invert_map(t, (x + prm.c * t, z), &prm).unwrap();
        let (u, w) = velocity(t, inv.label, &prm);
        assert!((u - steady.u).abs() < 1e-12 * prm.c && (w - steady.w).abs() < 1e-12 * prm.c, "t = {t}");
    }
}

#[test]
fn no_stagnation_and_negative_vorticity_on_a_grid() {
    let (_, prm, flow) = canonical();
    let n = 50;
    let (mut sup_u, mut max_gamma) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let x = prm.wavelength() * i as f64 / n as f64;
        let eta = surface_point(x, &prm).unwrap().eta;
        for j in 0..n {
            let z = eta - 4.0 * prm.length_scale() * (j + 1) as f64 / n as f64;
            let s = flow.eulerian_field(x, z).unwrap();
            sup_u = sup_u.max(s.u);
            max_gamma = max_gamma.max(s.gamma);
        }
    }
    assert!(sup_u < prm.c, "sup u = {sup_u}");
    assert!(max_gamma < 0.0, "max gamma = {max_gamma}");
}

#[test]
fn fields_are_periodic_in_x() {
    let (_, prm, flow) = canonical();
    for (x, z) in [(0.0, -120.0), (210.0, -300.0), (-55.0, -105.0)] {
        let a = flow.state(x, z).unwrap();
        let b = flow.state(x + prm.wavelength(), z).unwrap();
        assert!((a.u - b.u).abs() < 1e-12 * prm.c);
        assert!((a.w - b.w).abs() < 1e-12 * prm.c);
        assert!((a.pressure - b.pressure).abs() < 1e-9 * a.pressure);
    }
}

#[test]
fn pressure_paths_agree() {
    let (consts, prm, flow) = canonical();
    let scale = consts.rho * consts.g * prm.length_scale();
    let quad = PressureQuadrature::for_length(prm.length_scale(), &consts);
    let z = prm.trough_level() - 0.5 * prm.length_scale();
    for x in [0.0, 100.0, 333.0] {
        let vertical = pressure_field(&flow, &consts, x, z, &quad).unwrap();
        let bent = pressure_field_via(&flow, &consts, x, z, x - 0.25 * prm.wavelength(), &quad).unwrap();
        assert!((vertical - bent).abs() < 1e-6 * scale, "x = {x}: {vertical} vs {bent}");
        let closed = flow.state(x, z).unwrap().pressure;
        assert!((vertical - closed).abs() < 1e-6 * scale);
    }
}

#[test]
fn particle_speed_stays_below_wave_speed() {
    let (_, prm, _) = canonical();
    for kb in [-0.1, -1.0, -3.0] {
        let lbl = LagrangianLabel::new(12.0, kb / prm.k);
        for t in [0.0, 3.0, 11.0] {
            let (u, w) = velocity(t, lbl, &prm);
            let speed = u.hypot(w);
            assert!((speed - prm.c * kb.exp()).abs() < 1e-12 * prm.c);
            assert!(speed < prm.c);
        }
    }
}
