use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavelab::cli::config::RunConfig;
use wavelab::cli::suite::gerstner_profiles;
use wavelab::gammaflow::{refine_gamma, GammaConstants, GammaProfile};
use wavelab::gerstner::surface_point;
use wavelab::verify::{hydraulic_head, PrimitiveFn};
use wavelab::*;

/// The Gerstner flow for `consts`, its vorticity profile and `Gamma(0)`.
fn gerstner_with_gamma(consts: PhysicalConstants) -> (GerstnerFlow, GammaProfile, f64) {
    let cfg = RunConfig { constants: consts, ..RunConfig::default() };
    let prm = cfg.gerstner_params().unwrap();
    let flow = GerstnerFlow::new(prm, consts);
    let profiles = gerstner_profiles(&cfg, &flow).unwrap();
    let gc = GammaConstants::from_profiles(&profiles).unwrap();
    let p_end = flow.stream_coordinate(prm.b0 - 6.0 / prm.k);
    let refined = refine_gamma(profiles.surface_gamma, 0.0, p_end, 1 << 14, &gc, 1e-12 * gc.width()).unwrap();
    (flow, refined.profile, profiles.surface_gamma)
}

fn random_points(flow: &GerstnerFlow, n: usize) -> Vec<(f64, f64)> {
    let prm = flow.params;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    (0..n)
        .map(|_| {
            let x = rng.random_range(0.0..prm.wavelength());
            let eta = surface_point(x, &prm).unwrap().eta;
            (x, eta - rng.random_range(0.05..4.0) * prm.length_scale())
        })
        .collect()
}

fn head(consts: PhysicalConstants) -> (f64, f64, f64) {
    let (flow, gamma, gamma0) = gerstner_with_gamma(consts);
    let pts = random_points(&flow, 100);
    let primitive = PrimitiveFn(|p: f64| {
        gamma.at(p).map(|g| g.big_gamma - gamma0).ok_or(WaveError::Domain(format!("p = {p} off the grid")))
    });
    let h = hydraulic_head(&flow, &pts, &consts, Some(&primitive)).unwrap();
    (h.head, h.spread, flow.params.c)
}

#[test]
fn gerstner_head_is_constant() {
    let (e, spread, c) = head(PhysicalConstants::default());
    assert!(spread < 1e-6 * c * c, "spread {spread:e}");
    assert!(e.is_finite());
}

#[test]
fn head_does_not_depend_on_density() {
    // E sees pressure only through P / rho, so scaling rho and P0 together
    // leaves it unchanged.
    let base = PhysicalConstants::default();
    let s = 1.025;
    let heavy = PhysicalConstants::new(base.omega, base.g, s * base.rho, s * base.p_atm).unwrap();
    let (e1, _, c) = head(base);
    let (e2, _, _) = head(heavy);
    assert!((e1 - e2).abs() < 1e-9 * c * c, "{e1} vs {e2}");
}
