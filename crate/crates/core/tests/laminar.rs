use wavelab::laminar::{bed_violation_of_gerstner, build_laminar, LaminarFlow, ShearProfile};
use wavelab::verify::{boundary_residuals, euler_convergence, hydraulic_head, isobaric_check};
use wavelab::*;

fn shear_flow(profile: ShearProfile) -> LaminarFlow {
    build_laminar(&profile, 2.0, 100.0, &PhysicalConstants::default(), 31.0).unwrap()
}

fn profiles() -> [ShearProfile; 3] {
    [
        ShearProfile::uniform(0.0, 100.0, 2.0),
        ShearProfile::uniform(0.8, 100.0, 2.0),
        ShearProfile::linear(0.01, 100.0, 2.0),
    ]
}

#[test]
fn laminar_residuals_vanish() {
    for profile in profiles() {
        let flow = shear_flow(profile);
        let pts: Vec<(f64, f64)> =
            (0..16).flat_map(|i| (0..16).map(move |j| (7.0 * i as f64, -95.0 + 6.0 * j as f64))).collect();
        let [r1, r2, r3] = euler_convergence(&flow, &flow.consts, &pts, 1.0, 3, "laminar").unwrap();
        assert_eq!(r1.max_abs, 0.0);
        assert_eq!(r3.max_abs, 0.0);
        assert!(r2.max_nondim < 1e-8, "r2 = {:e}", r2.max_nondim);
    }
}

#[test]
fn laminar_streamlines_are_exactly_isobaric() {
    for profile in profiles() {
        let flow = shear_flow(profile);
        let lines: Vec<Vec<(f64, f64)>> =
            [-90.0, -40.0, 0.0].iter().map(|&z| (0..32).map(|i| (13.0 * i as f64, z)).collect()).collect();
        let report = isobaric_check(|x, z| Ok(flow.state(x, z)?.pressure), &lines).unwrap();
        assert_eq!(report.worst, 0.0);
    }
}

#[test]
fn laminar_bed_and_surface_conditions_hold_exactly() {
    for profile in profiles() {
        let flow = shear_flow(profile);
        let surface: Vec<SurfacePoint> =
            (0..16).map(|i| SurfacePoint { x: 10.0 * i as f64, eta: 2.0, slope: 0.0 }).collect();
        let report = boundary_residuals(&flow, &surface, &flow.consts, &[-50.0]).unwrap();
        assert_eq!(report.bed, Some(0.0));
        assert_eq!(report.surface_pressure, 0.0);
        assert_eq!(report.kinematic, 0.0);
    }
}

#[test]
fn laminar_head_is_constant() {
    for profile in profiles() {
        let flow = shear_flow(profile);
        let pts: Vec<(f64, f64)> = (0..40).map(|j| (3.0 * j as f64, 2.0 - 2.5 * j as f64)).collect();
        let head = hydraulic_head(&flow, &pts, &flow.consts, Some(&flow)).unwrap();
        assert!(head.spread < 1e-10 * flow.c * flow.c, "spread {:e}", head.spread);
    }
}

#[test]
fn gerstner_bed_violation_follows_the_depth_law() {
    for omega in [7.3e-5, 0.0] {
        let consts = PhysicalConstants::default().with_omega(omega).unwrap();
        let prm = GerstnerParams::new(0.01, -10.0, 0.0, &consts).unwrap();
        let mut previous = f64::INFINITY;
        for kd in [2.0_f64, 4.0, 8.0, 16.0] {
            let v = bed_violation_of_gerstner(&prm, kd / prm.k).unwrap();
            let law = prm.c * (-kd).exp();
            assert!(v.max_w > 0.0 && v.max_w < previous);
            assert!(v.max_w >= 0.5 * law && v.max_w <= 2.0 * law, "kd = {kd}: {} vs {law}", v.max_w);
            previous = v.max_w;
        }
    }
}
