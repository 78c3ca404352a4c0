use wavelab::cli::config::RunConfig;
use wavelab::cli::suite::gerstner_profiles;
use wavelab::gammaflow::{
    beta_label_slope, beta_of_p, implicit_residual, integrate_gamma, k_and_t, refine_gamma, GammaConstants,
};
use wavelab::hodograph::Profiles;
use wavelab::numerics::d1_five;
use wavelab::{GerstnerFlow, GerstnerParams, WaveError};

fn extracted_wave(omega: f64, b0: f64) -> (GerstnerParams, GerstnerFlow, Profiles, GammaConstants) {
    let mut cfg = RunConfig::default();
    cfg.constants = cfg.constants.with_omega(omega).unwrap();
    cfg.wave.b0 = b0;
    let prm = cfg.gerstner_params().unwrap();
    let flow = GerstnerFlow::new(prm, cfg.constants);
    let profiles = gerstner_profiles(&cfg, &flow).unwrap();
    let gc = GammaConstants::from_profiles(&profiles).unwrap();
    (prm, flow, profiles, gc)
}

fn extracted(omega: f64) -> (GerstnerParams, GerstnerFlow, Profiles, GammaConstants) {
    extracted_wave(omega, -10.0)
}

fn span(prm: &GerstnerParams) -> f64 {
    prm.c * prm.length_scale()
}

#[test]
fn coefficient_ordering_on_gerstner_constants() {
    let (_, _, _, gc) = extracted(7.3e-5);
    let co = gc.coeffs;
    assert!(co.c0 > 0.0 && co.c2 < 0.0);
    assert!((co.c2 / co.c0 - 2.0 * gc.slope).abs() < 1e-12 * gc.slope.abs());
    assert!(gc.lower() < gc.upper());
}

#[test]
fn rk4_global_error_is_fourth_order() {
    let (prm, _, profiles, gc) = extracted(7.3e-5);
    // Near the steep canonical surface the gap relaxes at a rate of about
    // 60 per unit of p k / c, so the study starts at 512 steps per unit.
    let p_end = -span(&prm);
    let fine = 1 << 15;
    let reference = integrate_gamma(profiles.surface_gamma, 0.0, p_end, fine, &gc).unwrap();
    let errors: Vec<f64> = [512, 1024, 2048]
        .iter()
        .map(|&n| {
            let coarse = integrate_gamma(profiles.surface_gamma, 0.0, p_end, n, &gc).unwrap();
            let stride = fine / n;
            coarse.gap.iter().enumerate().map(|(i, y)| (y - reference.gap[i * stride]).abs()).fold(0.0, f64::max)
        })
        .collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((14.0..=18.0).contains(&ratio), "ratio {ratio}, errors {errors:?}");
    }
}

fn first_integral_drift(b0: f64, steps: usize) -> f64 {
    let (prm, flow, profiles, gc) = extracted_wave(7.3e-5, b0);
    let p_end = flow.stream_coordinate(prm.b0 - 8.0 / prm.k);
    let profile = integrate_gamma(profiles.surface_gamma, 0.0, p_end, steps, &gc).unwrap();
    assert!(profile.big_gamma.iter().all(|&g| g > gc.lower() && g < gc.upper()));
    implicit_residual(&profile, &gc).unwrap().max_nondim
}

#[test]
fn first_integral_holds_at_ten_thousand_steps() {
    let drift = first_integral_drift(-50.0, 10_000);
    assert!(drift < 1e-10, "first integral drift {drift:e}");
}

#[test]
fn steep_wave_needs_finer_steps_for_the_first_integral() {
    let drift = first_integral_drift(-10.0, 20_000);
    assert!(drift < 1e-10, "first integral drift {drift:e}");
}

#[test]
fn equilibrium_first_integral_is_a_bracket_error() {
    let (_, _, _, gc) = extracted(7.3e-5);
    let profile = integrate_gamma(gc.upper(), 0.0, -1.0, 16, &gc).unwrap();
    assert!(profile.gamma.iter().all(|&g| g == 0.0));
    assert!(matches!(implicit_residual(&profile, &gc), Err(WaveError::Bracket(_))));
}

#[test]
fn vorticity_agrees_with_differenced_gap() {
    let (prm, _, profiles, gc) = extracted(7.3e-5);
    let steps = 1 << 15;
    let p_end = -4.0 * span(&prm);
    let profile = integrate_gamma(profiles.surface_gamma, 0.0, p_end, steps, &gc).unwrap();
    let h = p_end / steps as f64;
    let y = &profile.gap;
    for i in (2..steps - 2).step_by(997) {
        let dy = d1_five([y[i - 2], y[i - 1], y[i], y[i + 1], y[i + 2]], h);
        let gamma = profile.gamma[i];
        assert!((-dy - gamma).abs() < 1e-8 * gamma.abs(), "p = {}: {} vs {gamma}", profile.p[i], -dy);
    }
}

#[test]
fn label_map_is_increasing_and_beta_has_slope_minus_a() {
    let (prm, _, profiles, gc) = extracted(7.3e-5);
    let refined =
        refine_gamma(profiles.surface_gamma, 0.0, -6.0 * span(&prm), 8192, &gc, 1e-12 * gc.width()).unwrap();
    let profile = &refined.profile;
    let orbit = k_and_t(profile, &gc).unwrap();
    assert!(orbit.dlabel.iter().all(|&d| d > 0.0));
    assert!(orbit.label.windows(2).all(|w| w[1] < w[0]), "p decreases along the grid");
    let c1 = implicit_residual(profile, &gc).unwrap().c1;
    let beta = beta_of_p(profile, &gc, c1);
    for slope in beta_label_slope(&orbit.label, &beta.linear).iter().step_by(101) {
        assert!((slope + gc.slope).abs() < 1e-6 * gc.slope.abs(), "slope {slope} vs {}", -gc.slope);
    }
}

#[test]
fn ode_vorticity_matches_extracted_vorticity() {
    let (prm, _, profiles, gc) = extracted(7.3e-5);
    let p_end = profiles.samples.iter().map(|s| s.p).fold(0.0, f64::min) - span(&prm);
    let refined = refine_gamma(profiles.surface_gamma, 0.0, p_end, 8192, &gc, 1e-12 * gc.width()).unwrap();
    let ck = prm.c * prm.k;
    for s in &profiles.samples {
        let at = refined.profile.at(s.p).unwrap();
        assert!((at.gamma - s.gamma).abs() < 1e-6 * ck, "p = {}: {} vs {}", s.p, at.gamma, s.gamma);
        assert!((at.big_gamma - s.big_gamma).abs() < 1e-6 * prm.c * prm.c);
    }
}

#[test]
fn classical_limit_keeps_the_structure() {
    let (prm, _, profiles, gc) = extracted(0.0);
    assert_eq!(profiles.alpha, 9.8);
    let refined =
        refine_gamma(profiles.surface_gamma, 0.0, -4.0 * span(&prm), 8192, &gc, 1e-12 * gc.width()).unwrap();
    let c1 = implicit_residual(&refined.profile, &gc).unwrap().c1;
    let beta = beta_of_p(&refined.profile, &gc, c1);
    assert!(beta.max_disagreement() < 1e-8 * prm.c);
    assert!((gc.speed() - prm.c).abs() < 1e-6 * prm.c);
}
