//! Stream function, hodograph coordinates `(q, p) = (x, -psi)` and the
//! height function `h(q, p)`, together with the identities a steady flow
//! with isobaric streamlines must satisfy.
//!
//! Profiles `Q(p) = P/rho + 2 omega p`, `beta(p)` and `Gamma(p)` are read
//! off the field along a reference vertical `q = q_ref`, each at the center
//! of a small uniform stencil in `p` so that first and second derivatives
//! come from fourth-order differences.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, WaveError};
use crate::flow::{FlowState, SteadyFlow};
use crate::gammaflow::GammaConstants;
use crate::numerics::{d1_five, d2_five, fit_line, newton_bracketed, simpson_halving};
use crate::params::PhysicalConstants;

/// Settings of the stream-function quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StreamQuadrature {
    /// Stop when successive Simpson estimates differ by less (m^2/s).
    pub tol: f64,
    pub initial_intervals: usize,
    pub max_intervals: usize,
}

impl StreamQuadrature {
    /// `tol = 1e-12 c L`.
    pub fn for_flow<F: SteadyFlow + ?Sized>(flow: &F) -> Self {
        Self {
            tol: 1e-12 * flow.wave_speed() * flow.length_scale(),
            initial_intervals: 16,
            max_intervals: 1 << 16,
        }
    }
}

/// `psi(x, z) = -int_z^{eta(x)} (u(x, s) - c) ds`, zero on the surface.
pub fn stream_function<F: SteadyFlow + ?Sized>(
    flow: &F,
    pt: (f64, f64),
    opts: &StreamQuadrature,
) -> Result<f64> {
    let (x, z) = pt;
    let top = flow.surface(x)?.eta;
    if z > top || !flow.contains(x, z) {
        return Err(WaveError::OutOfDomain { x, z });
    }
    let c = flow.wave_speed();
    let integral = simpson_halving(
        |s| Ok(flow.state(x, s)?.u - c),
        z,
        top,
        opts.tol,
        opts.initial_intervals,
        opts.max_intervals,
    )?;
    Ok(-integral)
}

/// Height of streamline `p` above abscissa `q`, with its partials
/// `h_q = w / (u - c)` and `h_p = 1 / (c - u)` and the field state there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeightSample {
    pub q: f64,
    pub p: f64,
    pub h: f64,
    pub h_q: f64,
    pub h_p: f64,
    pub state: FlowState,
}

impl HeightSample {
    fn at<F: SteadyFlow + ?Sized>(flow: &F, q: f64, p: f64, h: f64) -> Result<Self> {
        let state = flow.state(q, h)?;
        let rel = state.u - flow.wave_speed();
        Ok(Self {
            q,
            p,
            h,
            h_q: state.w / rel,
            h_p: -1.0 / rel,
            state,
        })
    }
}

/// Solves `psi(q, h) = -p` for `h` using the flow's own stream function.
pub fn height_function<F: SteadyFlow + ?Sized>(flow: &F, q: f64, p: f64) -> Result<HeightSample> {
    if !(p <= 0.0) {
        return Err(WaveError::Domain(format!("stream coordinate must be non-positive, got {p}")));
    }
    let top = flow.surface(q)?.eta;
    if p == 0.0 {
        return HeightSample::at(flow, q, p, top);
    }
    let c = flow.wave_speed();
    let residual = |z: f64| -> Result<(f64, f64)> {
        let s = flow.state(q, z)?;
        Ok((s.psi + p, s.u - c))
    };
    let scale = flow.length_scale();
    let mut reach = scale;
    let mut lo = top - reach;
    loop {
        if let Some(bed) = flow.bed() {
            if lo <= bed {
                lo = bed;
                if residual(bed)?.0 < 0.0 {
                    return Err(WaveError::Domain(format!("stream coordinate {p} lies below the bed")));
                }
                break;
            }
        }
        if residual(lo)?.0 >= 0.0 {
            break;
        }
        reach *= 2.0;
        if reach > 1e6 * scale {
            return Err(WaveError::Domain(format!("no streamline {p} above q = {q}")));
        }
        lo = top - reach;
    }
    let tol = 1e-15 * (scale + top.abs() + reach);
    let h = newton_bracketed(residual, lo, top, tol, 200)?;
    HeightSample::at(flow, q, p, h)
}

/// Profile values and derivatives at one stream coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub p: f64,
    /// Height of the streamline at the reference abscissa.
    pub h: f64,
    /// `Q`, `Q'`, `Q''`.
    pub big_q: f64,
    pub dq: f64,
    pub d2q: f64,
    /// `beta`, `beta'`.
    pub beta: f64,
    pub dbeta: f64,
    /// `Gamma`, and `gamma = Gamma'`.
    pub big_gamma: f64,
    pub gamma: f64,
}

/// Settings of [`extract_profiles`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtractionOptions {
    /// Abscissa of the reference vertical.
    pub q_ref: f64,
    /// Spacing of the local `p` stencil away from the surface (m^2/s).
    pub step: f64,
    /// Natural scale of `p`, `c L` (m^2/s). Within one scale of the
    /// surface the spacing shrinks with `|p|`, down to `step / 8`.
    pub p_scale: f64,
    /// Reject the input when the line fit of `Q` misses by more
    /// (m^2/s^2). `None` skips the check.
    pub linearity_tol: Option<f64>,
}

impl ExtractionOptions {
    /// Stencil `2e-3 c L`, linearity tolerance `1e-8 c^2`.
    pub fn for_flow<F: SteadyFlow + ?Sized>(flow: &F) -> Self {
        let c = flow.wave_speed();
        let p_scale = c * flow.length_scale();
        Self {
            q_ref: 0.0,
            step: 2e-3 * p_scale,
            p_scale,
            linearity_tol: Some(1e-8 * c * c),
        }
    }

    /// Stencil spacing used around `p`.
    pub fn local_step(&self, p: f64) -> f64 {
        self.step * (p.abs() / self.p_scale).clamp(0.125, 1.0)
    }
}

/// Extracted profiles and the constants of the isobaric structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profiles {
    pub options: ExtractionOptions,
    /// `g - 2 omega c`.
    pub alpha: f64,
    pub samples: Vec<ProfileSample>,
    /// `A` and `B` of the fit `Q = A p + B`.
    pub slope: f64,
    pub intercept: f64,
    /// Worst miss of the line fit (m^2/s^2).
    pub linearity_residual: f64,
    /// `C0` in `beta = (A / 2 alpha) Gamma + (A^2 / alpha) p + C0`.
    pub c0: f64,
    /// Spread of `C0` over the samples.
    pub c0_spread: f64,
    /// `Gamma(0)`, fixed by the Bernoulli law on the surface.
    pub surface_gamma: f64,
}

impl Profiles {
    /// Bernoulli constant `C = -Gamma(0)`.
    pub fn bernoulli_constant(&self) -> f64 {
        -self.surface_gamma
    }

    /// Sample whose `p` is closest to the requested value.
    pub fn nearest(&self, p: f64) -> &ProfileSample {
        self.samples
            .iter()
            .min_by(|a, b| (a.p - p).abs().total_cmp(&(b.p - p).abs()))
            .expect("profiles are never empty")
    }
}

/// Minimum number of profile centers.
pub const MIN_PROFILE_SAMPLES: usize = 8;

/// `n` stream coordinates in `[p_min, -4 step]`, clustered toward the
/// surface like the upper half of a Chebyshev grid.
pub fn clustered_samples(p_min: f64, n: usize, step: f64) -> Result<Vec<f64>> {
    let top = -4.0 * step;
    if n < 2 || !(p_min < top) {
        return Err(WaveError::Domain(format!(
            "need at least two samples below {top}, got n = {n}, p_min = {p_min}"
        )));
    }
    Ok((0..n)
        .map(|j| {
            let t = j as f64 / (n - 1) as f64;
            top + (p_min - top) * (1.0 - (0.5 * std::f64::consts::PI * t).cos())
        })
        .collect())
}

fn bernoulli_gamma(s: &HeightSample, big_q: f64, alpha: f64) -> f64 {
    -((1.0 + s.h_q * s.h_q) / (2.0 * s.h_p * s.h_p) + alpha * s.h + big_q)
}

fn profile_at<F: SteadyFlow + ?Sized>(
    flow: &F,
    consts: &PhysicalConstants,
    alpha: f64,
    opts: &ExtractionOptions,
    p: f64,
) -> Result<ProfileSample> {
    let d = opts.local_step(p);
    if p + 4.0 * d > 0.0 {
        return Err(WaveError::Domain(format!(
            "profile stencil around {p} reaches above the surface"
        )));
    }
    let mut hs = Vec::with_capacity(9);
    let mut qs = [0.0; 9];
    for (i, q_val) in qs.iter_mut().enumerate() {
        let pj = p + (i as f64 - 4.0) * d;
        let s = height_function(flow, opts.q_ref, pj)?;
        *q_val = s.state.pressure / consts.rho + 2.0 * consts.omega * pj;
        hs.push(s);
    }
    let window = |v: &[f64; 9], i: usize| [v[i - 2], v[i - 1], v[i], v[i + 1], v[i + 2]];
    let mut dq = [0.0; 9];
    let mut beta = [0.0; 9];
    let mut big_gamma = [0.0; 9];
    for i in 2..7 {
        dq[i] = d1_five(window(&qs, i), d);
        beta[i] = 1.0 / hs[i].h_p - dq[i] * hs[i].h;
        big_gamma[i] = bernoulli_gamma(&hs[i], qs[i], alpha);
    }
    Ok(ProfileSample {
        p,
        h: hs[4].h,
        big_q: qs[4],
        dq: dq[4],
        d2q: d2_five(window(&qs, 4), d),
        beta: beta[4],
        dbeta: d1_five(window(&beta, 4), d),
        big_gamma: big_gamma[4],
        gamma: d1_five(window(&big_gamma, 4), d),
    })
}

/// Reads `Q`, `beta`, `Gamma` and their derivatives off the field at
/// each stream coordinate, then fits `Q = A p + B` and recovers `C0`.
pub fn extract_profiles<F: SteadyFlow + ?Sized>(
    flow: &F,
    consts: &PhysicalConstants,
    p_samples: &[f64],
    opts: &ExtractionOptions,
) -> Result<Profiles> {
    if p_samples.len() < MIN_PROFILE_SAMPLES {
        return Err(WaveError::InsufficientData(format!(
            "profile extraction needs at least {MIN_PROFILE_SAMPLES} samples, got {}",
            p_samples.len()
        )));
    }
    let alpha = consts.alpha(flow.wave_speed());
    let samples = p_samples
        .par_iter()
        .map(|&p| profile_at(flow, consts, alpha, opts, p))
        .collect::<Result<Vec<_>>>()?;

    let ps: Vec<f64> = samples.iter().map(|s| s.p).collect();
    let big_qs: Vec<f64> = samples.iter().map(|s| s.big_q).collect();
    let fit = fit_line(&ps, &big_qs)?;
    if let Some(tol) = opts.linearity_tol {
        if fit.max_residual > tol {
            return Err(WaveError::ModelViolation(format!(
                "Q(p) is not linear: line fit misses by {:e} (tolerance {tol:e})",
                fit.max_residual
            )));
        }
    }
    let a = fit.slope;
    let c0s: Vec<f64> = samples
        .iter()
        .map(|s| s.beta - a / (2.0 * alpha) * s.big_gamma - a * a / alpha * s.p)
        .collect();
    let c0 = c0s.iter().sum::<f64>() / c0s.len() as f64;
    let c0_spread = c0s.iter().map(|v| (v - c0).abs()).fold(0.0, f64::max);

    let surface = height_function(flow, opts.q_ref, 0.0)?;
    let surface_q = surface.state.pressure / consts.rho;
    Ok(Profiles {
        options: *opts,
        alpha,
        samples,
        slope: a,
        intercept: fit.intercept,
        linearity_residual: fit.max_residual,
        c0,
        c0_spread,
        surface_gamma: bernoulli_gamma(&surface, surface_q, alpha),
    })
}

/// `|1/h_p - Q' h - beta|`.
pub fn check_has(s: &HeightSample, prof: &ProfileSample) -> f64 {
    (1.0 / s.h_p - prof.dq * s.h - prof.beta).abs()
}

/// `|(1 + h_q^2) / (2 h_p^2) + alpha h + P/rho + 2 omega p + Gamma|`.
pub fn bernoulli_residual(
    s: &HeightSample,
    prof: &ProfileSample,
    alpha: f64,
    consts: &PhysicalConstants,
) -> f64 {
    let kinetic = (1.0 + s.h_q * s.h_q) / (2.0 * s.h_p * s.h_p);
    (kinetic + alpha * s.h + s.state.pressure / consts.rho + 2.0 * consts.omega * s.p + prof.big_gamma).abs()
}

/// Second-order finite-difference residual of the quasilinear equation
/// `(1 + h_q^2) h_pp - 2 h_p h_q h_pq + h_p^2 h_qq - gamma h_p^3`,
/// with `h` supplied as a function of `(q, p)`.
pub fn height_pde_residual<H>(h: H, q: f64, p: f64, dq: f64, dp: f64, gamma: f64) -> Result<f64>
where
    H: Fn(f64, f64) -> Result<f64>,
{
    let c = h(q, p)?;
    let (qp, qm) = (h(q + dq, p)?, h(q - dq, p)?);
    let (pp, pm) = (h(q, p + dp)?, h(q, p - dp)?);
    let (pp_qp, pp_qm) = (h(q + dq, p + dp)?, h(q - dq, p + dp)?);
    let (pm_qp, pm_qm) = (h(q + dq, p - dp)?, h(q - dq, p - dp)?);
    let h_q = (qp - qm) / (2.0 * dq);
    let h_p = (pp - pm) / (2.0 * dp);
    let h_qq = (qp - 2.0 * c + qm) / (dq * dq);
    let h_pp = (pp - 2.0 * c + pm) / (dp * dp);
    let h_pq = (pp_qp - pp_qm - pm_qp + pm_qm) / (4.0 * dq * dp);
    Ok((1.0 + h_q * h_q) * h_pp - 2.0 * h_p * h_q * h_pq + h_p * h_p * h_qq - gamma * h_p.powi(3))
}

/// Coefficients of the cubic `a3 h^3 + a2 h^2 + a1 h + a0` that every
/// streamline height must annul.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl CubicCoeffs {
    pub fn eval(&self, h: f64) -> f64 {
        ((self.a3 * h + self.a2) * h + self.a1) * h + self.a0
    }

    /// Coefficients divided by `c^3 k^{i+1}`.
    pub fn nondimensional(&self, c: f64, k: f64) -> [f64; 4] {
        let s = c.powi(3) * k;
        [self.a0 / s, self.a1 / (s * k), self.a2 / (s * k * k), self.a3 / (s * k.powi(3))]
    }

    pub fn max_nondimensional(&self, c: f64, k: f64) -> f64 {
        self.nondimensional(c, k).iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn cubic_coefficients(prof: &ProfileSample, alpha: f64) -> CubicCoeffs {
    let (q, q1, q2) = (prof.big_q, prof.dq, prof.d2q);
    let (b, b1) = (prof.beta, prof.dbeta);
    let (g, g1) = (prof.big_gamma, prof.gamma);
    CubicCoeffs {
        a0: -alpha * b + 2.0 * b * b1 * (q + g) - q1 * b * b - b * b * (q1 + g1),
        a1: -alpha * q1 - 2.0 * q1 * b * (q1 + g1) + 2.0 * (q + g) * (q2 * b + q1 * b1)
            - 2.0 * q1 * q1 * b
            + 2.0 * alpha * b * b1,
        a2: -q1.powi(3) - (q1 + g1) * q1 * q1 + 2.0 * alpha * (q2 * b + q1 * b1) + 2.0 * q1 * q2 * (q + g),
        a3: 2.0 * alpha * q1 * q2,
    }
}

/// Residuals of the circle identity on one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleResidual {
    /// `|(h + beta/A)^2 h_q^2 + (h + beta/A + alpha/A^2)^2 + (Gamma + c3/c2)/A^2|` (m^2).
    pub identity: f64,
    /// Distance from the circle center in the `(h_q (h + beta/A), h + beta/A + alpha/A^2)` plane.
    pub radius: f64,
    /// `K = -(1/A) sqrt(-Gamma - c3/c2)`.
    pub k_radius: f64,
    /// `|radius - K|` (m).
    pub deviation: f64,
}

pub fn circle_identity(s: &HeightSample, prof: &ProfileSample, gc: &GammaConstants) -> Result<CircleResidual> {
    let a = gc.slope;
    let shifted = s.h + prof.beta / a;
    let x = shifted * s.h_q;
    let y = shifted + gc.alpha / (a * a);
    let gap = prof.big_gamma + gc.coeffs.c3 / gc.coeffs.c2;
    if !(gap < 0.0) {
        return Err(WaveError::Bracket(format!(
            "Gamma + c3/c2 = {gap:e} is not negative at p = {}",
            prof.p
        )));
    }
    let k_radius = -(-gap).sqrt() / a;
    let radius = x.hypot(y);
    Ok(CircleResidual {
        identity: (x * x + y * y + gap / (a * a)).abs(),
        radius,
        k_radius,
        deviation: (radius - k_radius).abs(),
    })
}

/// Horizontal shift `delta(p) = -q_crest` of streamline `p`: the crest is
/// searched within a quarter period of `q = 0`.
pub fn crest_shift<F: SteadyFlow + ?Sized>(flow: &F, p: f64) -> Result<f64> {
    let period = flow
        .period()
        .ok_or_else(|| WaveError::Degenerate("a crest needs a periodic flow".into()))?;
    let slope = |q: f64| -> Result<(f64, f64)> { Ok((height_function(flow, q, p)?.h_q, 0.0)) };
    let quarter = 0.25 * period;
    let crest = newton_bracketed(slope, -quarter, quarter, 1e-13 * period, 200)?;
    Ok(-crest)
}

/// Everything known at one hodograph point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HodographRecord {
    pub q: f64,
    pub p: f64,
    pub h: f64,
    pub h_q: f64,
    pub h_p: f64,
    #[serde(rename = "Q")]
    pub big_q: f64,
    pub beta: f64,
    #[serde(rename = "Gamma")]
    pub big_gamma: f64,
    pub gamma: f64,
    #[serde(rename = "K")]
    pub k_radius: f64,
    pub delta: Option<f64>,
    /// Hydraulic head `E`; equals `C = -Gamma(0)` for a valid solution.
    #[serde(rename = "E")]
    pub head: f64,
    #[serde(rename = "C")]
    pub head_constant: f64,
}

/// Records at abscissae `qs` on every extracted streamline.
pub fn hodograph_records<F: SteadyFlow + ?Sized>(
    flow: &F,
    consts: &PhysicalConstants,
    profiles: &Profiles,
    gc: &GammaConstants,
    qs: &[f64],
) -> Result<Vec<HodographRecord>> {
    let c = flow.wave_speed();
    let per_p = profiles
        .samples
        .par_iter()
        .map(|prof| {
            let delta = crest_shift(flow, prof.p).ok();
            qs.iter()
                .map(|&q| {
                    let s = height_function(flow, q, prof.p)?;
                    let circle = circle_identity(&s, prof, gc)?;
                    let kinetic = 0.5 * ((s.state.u - c).powi(2) + s.state.w.powi(2));
                    let head = kinetic
                        + profiles.alpha * s.h
                        + s.state.pressure / consts.rho
                        + 2.0 * consts.omega * prof.p
                        + prof.big_gamma
                        - profiles.surface_gamma;
                    Ok(HodographRecord {
                        q,
                        p: prof.p,
                        h: s.h,
                        h_q: s.h_q,
                        h_p: s.h_p,
                        big_q: prof.big_q,
                        beta: prof.beta,
                        big_gamma: prof.big_gamma,
                        gamma: prof.gamma,
                        k_radius: circle.k_radius,
                        delta,
                        head,
                        head_constant: profiles.bernoulli_constant(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_p.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_profile() -> ProfileSample {
        ProfileSample {
            p: -3.0,
            h: -1.2,
            big_q: 0.7,
            dq: -0.4,
            d2q: 0.3,
            beta: 1.9,
            dbeta: 0.25,
            big_gamma: -2.2,
            gamma: -0.6,
        }
    }

    /// Both expressions for `h_q h_pq` from the two-route derivation, with
    /// `D = Q' h + beta` and `S = alpha h + Q + Gamma`.
    fn route_gap(prof: &ProfileSample, alpha: f64, h: f64) -> f64 {
        let (q, q1, q2) = (prof.big_q, prof.dq, prof.d2q);
        let (b, b1, g, g1) = (prof.beta, prof.dbeta, prof.big_gamma, prof.gamma);
        let d = q1 * h + b;
        let s = alpha * h + q + g;
        let first = q1 / (d * d) + 2.0 * s * q1 / d.powi(4);
        let second = -(alpha + (q1 + g1) * d) / d.powi(3) + 2.0 * s / d.powi(4) * (q1 + (q2 * h + b1) * d);
        d.powi(4) * (second - first)
    }

    #[test]
    fn cubic_matches_route_difference() {
        let prof = sample_profile();
        let alpha = 9.7;
        let cubic = cubic_coefficients(&prof, alpha);
        for h in [-3.0, -1.2, 0.0, 0.4, 2.5] {
            let oracle = route_gap(&prof, alpha, h);
            let scale = 1.0 + oracle.abs();
            assert!((cubic.eval(h) - oracle).abs() < 1e-11 * scale, "h = {h}: {} vs {oracle}", cubic.eval(h));
        }
    }

    #[test]
    fn linear_q_kills_a3() {
        let mut prof = sample_profile();
        prof.d2q = 0.0;
        assert_eq!(cubic_coefficients(&prof, 9.8).a3, 0.0);
    }

    #[test]
    fn clustered_samples_shape() {
        let ps = clustered_samples(-100.0, 9, 0.5).unwrap();
        assert_eq!(ps.len(), 9);
        assert_eq!(ps[0], -2.0);
        assert!((ps[8] + 100.0).abs() < 1e-12);
        let gaps: Vec<f64> = ps.windows(2).map(|w| w[0] - w[1]).collect();
        assert!(gaps.windows(2).all(|g| g[1] > g[0]));
        assert!(clustered_samples(-1.0, 9, 0.5).is_err());
    }

    #[test]
    fn pde_residual_of_quadratic_perturbation() {
        // h = p/c0 has zero residual with gamma = 0; adding eps q^2 adds 2 eps h_p^2
        let c0 = 2.0;
        let eps = 1e-3;
        let base = height_pde_residual(|_, p| Ok(p / c0), 0.0, -1.0, 1e-2, 1e-2, 0.0).unwrap();
        let bumped = height_pde_residual(|q, p| Ok(p / c0 + eps * q * q), 0.0, -1.0, 1e-2, 1e-2, 0.0).unwrap();
        assert!(base.abs() < 1e-12);
        assert!((bumped - base - 2.0 * eps / (c0 * c0)).abs() < 1e-9);
    }
}
