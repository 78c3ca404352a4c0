use wavelab::cli::config::RunConfig;
use wavelab::cli::suite::gerstner_profiles;
use wavelab::gerstner::surface_point;
use wavelab::hodograph::{
    check_has, cubic_coefficients, height_function, height_pde_residual, stream_function, Profiles,
    StreamQuadrature,
};
use wavelab::*;

fn canonical() -> (RunConfig, GerstnerParams, GerstnerFlow) {
    let cfg = RunConfig::default();
    let prm = cfg.gerstner_params().unwrap();
    let flow = GerstnerFlow::new(prm, cfg.constants);
    (cfg, prm, flow)
}

fn profiles() -> (GerstnerParams, GerstnerFlow, Profiles) {
    let (cfg, prm, flow) = canonical();
    let profiles = gerstner_profiles(&cfg, &flow).unwrap();
    (prm, flow, profiles)
}

#[test]
fn stream_function_vanishes_on_the_surface() {
    let (_, prm, flow) = canonical();
    let quad = StreamQuadrature::for_flow(&flow);
    for x in [0.0, 150.0, 400.0] {
        let eta = surface_point(x, &prm).unwrap().eta;
        assert_eq!(stream_function(&flow, (x, eta), &quad).unwrap(), 0.0);
    }
}

#[test]
fn stream_function_gradient_converges_to_velocity() {
    let (_, prm, flow) = canonical();
    let quad = StreamQuadrature::for_flow(&flow);
    let (x, z) = (80.0, -160.0);
    let s = flow.state(x, z).unwrap();
    let exact = (-s.w, s.u - prm.c);
    let psi = |x: f64, z: f64| stream_function(&flow, (x, z), &quad).unwrap();
    let errors: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|f| {
            let h = f * prm.length_scale();
            let gx = (psi(x + h, z) - psi(x - h, z)) / (2.0 * h);
            let gz = (psi(x, z + h) - psi(x, z - h)) / (2.0 * h);
            (gx - exact.0).hypot(gz - exact.1)
        })
        .collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}, errors {errors:?}");
    }
}

#[test]
fn streamlines_are_level_curves() {
    let (_, prm, flow) = canonical();
    let quad = StreamQuadrature::for_flow(&flow);
    let b = prm.b0 - 1.5 * prm.length_scale();
    let values: Vec<f64> = [0.0, 1.3, 2.9, 4.4]
        .iter()
        .map(|xi| stream_function(&flow, flow.point(xi / prm.k, b), &quad).unwrap())
        .collect();
    for v in &values {
        assert!((v - values[0]).abs() < 1e-8 * prm.c * prm.length_scale());
    }
    assert!((values[0] + flow.stream_coordinate(b)).abs() < 1e-8 * prm.c * prm.length_scale());
}

#[test]
fn height_function_round_trip_and_partials() {
    let (_, prm, flow) = canonical();
    let quad = StreamQuadrature::for_flow(&flow);
    let cl = prm.c * prm.length_scale();
    for q in [0.0, 90.0, 250.0] {
        let top = height_function(&flow, q, 0.0).unwrap();
        assert_eq!(top.h, surface_point(q, &prm).unwrap().eta);
        for p in [-0.1 * cl, -cl, -3.0 * cl] {
            let s = height_function(&flow, q, p).unwrap();
            let psi = stream_function(&flow, (q, s.h), &quad).unwrap();
            assert!((p + psi).abs() < 1e-9 * cl, "q = {q}, p = {p}: psi = {psi}");
            assert!(s.h_p > 0.0);
            assert!((s.state.u - prm.c + 1.0 / s.h_p).abs() < 1e-14 * prm.c);
            let dp = 1e-4 * cl;
            let fd = (height_function(&flow, q, p + dp).unwrap().h - height_function(&flow, q, p - dp).unwrap().h)
                / (2.0 * dp);
            assert!((fd - s.h_p).abs() < 1e-6 * s.h_p, "h_p {} vs {fd}", s.h_p);
        }
    }
}

#[test]
fn height_equation_residual_is_second_order() {
    let (_, prm, flow) = canonical();
    let (l, cl) = (prm.length_scale(), prm.c * prm.length_scale());
    let p = -1.5 * cl;
    let gamma = flow.streamline_vorticity(flow.label_of_stream(p).unwrap());
    let h = |q: f64, p: f64| Ok(height_function(&flow, q, p)?.h);
    let residuals: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|f| height_pde_residual(h, 40.0, p, f * l, f * cl, gamma).unwrap().abs())
        .collect();
    for w in residuals.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}, residuals {residuals:?}");
    }
}

#[test]
fn beta_is_independent_of_q() {
    let (prm, flow, profiles) = profiles();
    for prof in profiles.samples.iter().step_by(5) {
        let beta_at = |q: f64| {
            let s = height_function(&flow, q, prof.p).unwrap();
            1.0 / s.h_p - prof.dq * s.h
        };
        let (b1, b2) = (beta_at(0.0), beta_at(0.37 * prm.wavelength()));
        assert!((b1 - b2).abs() < 1e-8 * prm.c, "p = {}: {b1} vs {b2}", prof.p);
        assert!(check_has(&height_function(&flow, 100.0, prof.p).unwrap(), prof) < 1e-8 * prm.c);
    }
}

#[test]
fn extracted_slope_is_minus_kc() {
    let (prm, _, profiles) = profiles();
    let expected = -prm.k * prm.c;
    assert!((profiles.slope - expected).abs() < 1e-6 * expected.abs());
    assert_eq!(profiles.bernoulli_constant(), -profiles.surface_gamma);
    assert!(profiles.samples.iter().all(|s| s.p <= 0.0));
}

#[test]
fn misscaled_beta_raises_a0() {
    let (prm, _, profiles) = profiles();
    let prof = profiles.samples[profiles.samples.len() / 2];
    let a0 = |scale: f64| {
        let mut bent = prof;
        bent.beta *= scale;
        cubic_coefficients(&bent, profiles.alpha).nondimensional(prm.c, prm.k)[0].abs()
    };
    let (clean, one, two) = (a0(1.0), a0(1.01), a0(1.02));
    assert!(clean < 1e-6);
    assert!(one > 1e3 * clean.max(1e-12), "a0 {clean} -> {one}");
    let growth = two / one;
    assert!((1.8..=2.2).contains(&growth), "growth {growth}");
}
