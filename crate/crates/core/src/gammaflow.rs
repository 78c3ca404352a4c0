//! The constants chain of a deep-water flow with isobaric streamlines:
//! the ODE for `Gamma(p)`, its first integral, the orbit radius `K(p)` and
//! the label map `T(p)`.
//!
//! With `Q = A p + B` and `beta = (A / 2 alpha) Gamma + (A^2 / alpha) p + C0`,
//! `Gamma` solves `(c0 Gamma + c1) Gamma' = -(c2 Gamma + c3)`. The upper end
//! of the admissible bracket `(-c1/c0, -c3/c2)` is an attracting fixed
//! point as `p -> -inf`, so the solution is carried in the gap
//! `y = -Gamma - c3/c2 > 0`, which keeps full relative precision as it
//! decays. RK4 commutes with this affine change of variable.

use serde::Serialize;

use crate::error::{Result, WaveError};
use crate::hodograph::Profiles;
use crate::numerics::Hermite;

/// Default RK4 resolution per unit of `p k / c`.
pub const STEPS_PER_UNIT: f64 = 2048.0;

/// `c0 .. c3` of the `Gamma` equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeCoefficients {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// `c0 = A^2/(2 alpha)`, `c1 = A^2 B/alpha - A C0`, `c2 = A^3/alpha`,
/// `c3 = 2 A^3 B/alpha - alpha A - 2 A^2 C0`.
pub fn ode_coefficients(a: f64, b: f64, c0_beta: f64, alpha: f64) -> Result<OdeCoefficients> {
    if !(alpha.is_finite() && alpha != 0.0) {
        return Err(WaveError::Domain(format!(
            "alpha = g - 2 omega c must be nonzero for a non-laminar flow, got {alpha}"
        )));
    }
    if !(a.is_finite() && a != 0.0) {
        return Err(WaveError::Domain(format!("the slope A of Q(p) must be nonzero, got {a}")));
    }
    let a2 = a * a;
    let a3 = a2 * a;
    Ok(OdeCoefficients {
        c0: a2 / (2.0 * alpha),
        c1: a2 * b / alpha - a * c0_beta,
        c2: a3 / alpha,
        c3: 2.0 * a3 * b / alpha - alpha * a - 2.0 * a2 * c0_beta,
    })
}

/// `A`, `B`, `C0`, `alpha` and the derived ODE coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaConstants {
    /// `A`, slope of `Q(p)` (1/s).
    pub slope: f64,
    /// `B`, intercept of `Q(p)` (m^2/s^2).
    pub intercept: f64,
    /// `C0` of the `beta` relation (m/s).
    pub c0: f64,
    pub alpha: f64,
    pub coeffs: OdeCoefficients,
}

impl GammaConstants {
    pub fn new(slope: f64, intercept: f64, c0: f64, alpha: f64) -> Result<Self> {
        Ok(Self {
            slope,
            intercept,
            c0,
            alpha,
            coeffs: ode_coefficients(slope, intercept, c0, alpha)?,
        })
    }

    pub fn from_profiles(profiles: &Profiles) -> Result<Self> {
        Self::new(profiles.slope, profiles.intercept, profiles.c0, profiles.alpha)
    }

    /// `-c1 / c0`.
    pub fn lower(&self) -> f64 {
        -self.coeffs.c1 / self.coeffs.c0
    }

    /// `-c3 / c2`, the limit of `Gamma` at infinite depth.
    pub fn upper(&self) -> f64 {
        -self.coeffs.c3 / self.coeffs.c2
    }

    /// Bracket width `alpha^2 / A^2` (exactly `upper - lower`).
    pub fn width(&self) -> f64 {
        (self.alpha / self.slope).powi(2)
    }

    /// Wavenumber `A^2 / alpha` identified from the constants.
    pub fn wavenumber(&self) -> f64 {
        self.slope * self.slope / self.alpha
    }

    /// Speed `-alpha / A` identified from the constants.
    pub fn speed(&self) -> f64 {
        -self.alpha / self.slope
    }

    /// `gamma` as a function of the gap `y = -Gamma - c3/c2`.
    fn gamma_of_gap(&self, y: f64) -> f64 {
        2.0 * self.slope * y / (self.width() - y)
    }

    fn gap_of(&self, big_gamma: f64) -> f64 {
        self.upper() - big_gamma
    }
}

/// `gamma = -2A (Gamma + c3/c2) / (Gamma + c1/c0)`.
pub fn vorticity_of_gamma(big_gamma: f64, gc: &GammaConstants) -> Result<f64> {
    let y = gc.gap_of(big_gamma);
    if !(y > 0.0 && y < gc.width()) {
        return Err(WaveError::Bracket(format!(
            "Gamma = {big_gamma} outside ({}, {})",
            gc.lower(),
            gc.upper()
        )));
    }
    Ok(gc.gamma_of_gap(y))
}

/// RK4 solution of the `Gamma` equation on a uniform `p` grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaProfile {
    pub p: Vec<f64>,
    #[serde(rename = "Gamma")]
    pub big_gamma: Vec<f64>,
    /// `gamma = Gamma'`.
    pub gamma: Vec<f64>,
    /// `y = -Gamma - c3/c2`.
    pub gap: Vec<f64>,
    #[serde(skip)]
    interp: Hermite,
    #[serde(skip)]
    constants: GammaConstants,
}

/// Interpolated state of a [`GammaProfile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaPoint {
    pub big_gamma: f64,
    pub gamma: f64,
    pub gap: f64,
}

impl GammaProfile {
    /// Hermite interpolation between grid points; `None` off the grid.
    pub fn at(&self, p: f64) -> Option<GammaPoint> {
        let (gap, _) = self.interp.eval(p)?;
        Some(GammaPoint {
            big_gamma: self.constants.upper() - gap,
            gamma: self.constants.gamma_of_gap(gap),
            gap,
        })
    }

    pub fn constants(&self) -> &GammaConstants {
        &self.constants
    }

    /// Step count of the uniform grid.
    pub fn steps(&self) -> usize {
        self.p.len() - 1
    }
}

/// `ceil(STEPS_PER_UNIT |p_end - p_start| / p_scale)`, at least one.
pub fn default_steps(p_start: f64, p_end: f64, p_scale: f64) -> usize {
    ((STEPS_PER_UNIT * (p_end - p_start).abs() / p_scale).ceil() as usize).max(1)
}

/// Integrates from `Gamma(p_start) = gamma0` to `p_end` in `steps` RK4
/// steps. `gamma0 = -c3/c2` is the constant solution.
pub fn integrate_gamma(
    gamma0: f64,
    p_start: f64,
    p_end: f64,
    steps: usize,
    gc: &GammaConstants,
) -> Result<GammaProfile> {
    let width = gc.width();
    let y0 = gc.gap_of(gamma0);
    if !(y0 >= 0.0 && y0 < width) {
        return Err(WaveError::Domain(format!(
            "initial Gamma {gamma0} outside the bracket ({}, {}]",
            gc.lower(),
            gc.upper()
        )));
    }
    if steps == 0 || !(p_end != p_start) {
        return Err(WaveError::Domain("integration needs a nonempty range and at least one step".into()));
    }
    let h = (p_end - p_start) / steps as f64;
    let rhs = |y: f64| -gc.gamma_of_gap(y);
    let check = |y: f64, p: f64| -> Result<f64> {
        if y.is_finite() && (0.0..width).contains(&y) {
            Ok(y)
        } else {
            let hint = if gc.slope > 0.0 {
                "; with A > 0 Gamma is unbounded at depth"
            } else {
                ""
            };
            Err(WaveError::BlowUp {
                p,
                reason: format!("solution left the bracket (gap {y:e}, width {width:e}){hint}"),
            })
        }
    };

    let mut p = Vec::with_capacity(steps + 1);
    let mut gap = Vec::with_capacity(steps + 1);
    let mut y = y0;
    p.push(p_start);
    gap.push(y);
    for i in 0..steps {
        let pi = p_start + i as f64 * h;
        let k1 = rhs(y);
        let k2 = rhs(check(y + 0.5 * h * k1, pi)?);
        let k3 = rhs(check(y + 0.5 * h * k2, pi)?);
        let k4 = rhs(check(y + h * k3, pi)?);
        let next = pi + h;
        y = check(y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), next)?;
        p.push(if i + 1 == steps { p_end } else { next });
        gap.push(y);
    }
    let gamma: Vec<f64> = gap.iter().map(|&y| gc.gamma_of_gap(y)).collect();
    let big_gamma: Vec<f64> = gap.iter().map(|&y| gc.upper() - y).collect();
    let dgap: Vec<f64> = gamma.iter().map(|g| -g).collect();
    let interp = Hermite::new(p.clone(), gap.clone(), dgap)?;
    Ok(GammaProfile {
        p,
        big_gamma,
        gamma,
        gap,
        interp,
        constants: *gc,
    })
}

/// Outcome of [`refine_gamma`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinedGamma {
    pub profile: GammaProfile,
    /// Step counts tried, coarsest first.
    pub steps: Vec<usize>,
    /// Richardson estimate `max |y_n - y_2n| / 15` of the error left in
    /// the finer solution of each pair (m^2/s^2).
    pub error_estimates: Vec<f64>,
    pub converged: bool,
}

/// Maximum number of step doublings in [`refine_gamma`].
pub const MAX_DOUBLINGS: usize = 4;

/// Integrates at `steps`, then doubles the resolution until the Richardson
/// error estimate of the gap drops below `tol` (m^2/s^2), at most
/// [`MAX_DOUBLINGS`] times. Returns the finest solution computed.
pub fn refine_gamma(
    gamma0: f64,
    p_start: f64,
    p_end: f64,
    steps: usize,
    gc: &GammaConstants,
    tol: f64,
) -> Result<RefinedGamma> {
    let mut coarse = integrate_gamma(gamma0, p_start, p_end, steps, gc)?;
    let mut tried = vec![steps];
    let mut estimates = Vec::new();
    for _ in 0..MAX_DOUBLINGS {
        let n = 2 * coarse.steps();
        let fine = integrate_gamma(gamma0, p_start, p_end, n, gc)?;
        let estimate = coarse
            .gap
            .iter()
            .enumerate()
            .map(|(i, y)| (y - fine.gap[2 * i]).abs())
            .fold(0.0, f64::max)
            / 15.0;
        tried.push(n);
        estimates.push(estimate);
        coarse = fine;
        if estimate <= tol {
            return Ok(RefinedGamma {
                profile: coarse,
                steps: tried,
                error_estimates: estimates,
                converged: true,
            });
        }
    }
    Ok(RefinedGamma {
        profile: coarse,
        steps: tried,
        error_estimates: estimates,
        converged: false,
    })
}

/// Deviation of `Gamma + (alpha^2/A^2) ln(-Gamma - c3/c2) + 2 A p` from
/// its value `C1` at the first grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImplicitResidual {
    pub c1: f64,
    pub max_abs: f64,
    /// `max_abs / (alpha/A)^2`.
    pub max_nondim: f64,
}

pub fn implicit_residual(profile: &GammaProfile, gc: &GammaConstants) -> Result<ImplicitResidual> {
    if let Some(i) = profile.gap.iter().position(|&y| !(y > 0.0)) {
        return Err(WaveError::Bracket(format!(
            "log of non-positive argument {:e} at p = {}",
            profile.gap[i], profile.p[i]
        )));
    }
    let w = gc.width();
    let a = gc.slope;
    let (p0, y0) = (profile.p[0], profile.gap[0]);
    let c1 = (gc.upper() - y0) + w * y0.ln() + 2.0 * a * p0;
    let max_abs = profile
        .p
        .iter()
        .zip(&profile.gap)
        .map(|(&p, &y)| (-(y - y0) + w * (y / y0).ln() + 2.0 * a * (p - p0)).abs())
        .fold(0.0, f64::max);
    Ok(ImplicitResidual {
        c1,
        max_abs,
        max_nondim: max_abs / w,
    })
}

/// Orbit radius `K(p)` and label map `T(p)` on the profile grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitMap {
    pub p: Vec<f64>,
    /// `K = -(1/A) sqrt(-Gamma - c3/c2)` (m).
    #[serde(rename = "K")]
    pub radius: Vec<f64>,
    /// `T = ln(k K) / k` with `k = A^2 / alpha` (m).
    #[serde(rename = "T")]
    pub label: Vec<f64>,
    /// `T' = -(alpha / 2 A^4) gamma / K^2`.
    #[serde(rename = "T_prime")]
    pub dlabel: Vec<f64>,
    #[serde(skip)]
    interp: Hermite,
}

impl OrbitMap {
    /// `T(p)` by Hermite interpolation; `None` off the grid.
    pub fn label_at(&self, p: f64) -> Option<f64> {
        self.interp.eval(p).map(|v| v.0)
    }
}

pub fn k_and_t(profile: &GammaProfile, gc: &GammaConstants) -> Result<OrbitMap> {
    let a = gc.slope;
    if !(a < 0.0) {
        return Err(WaveError::Domain(format!("orbit radius needs A < 0, got {a}")));
    }
    let k = gc.wavenumber();
    let mut radius = Vec::with_capacity(profile.p.len());
    let mut label = Vec::with_capacity(profile.p.len());
    let mut dlabel = Vec::with_capacity(profile.p.len());
    for (i, &y) in profile.gap.iter().enumerate() {
        let kk = -y.sqrt() / a;
        if !(kk > 0.0) {
            return Err(WaveError::Degenerate(format!(
                "orbit radius vanishes at p = {}",
                profile.p[i]
            )));
        }
        radius.push(kk);
        label.push((k * kk).ln() / k);
        dlabel.push(-gc.alpha / (2.0 * a.powi(4)) * profile.gamma[i] / (kk * kk));
    }
    let interp = Hermite::new(profile.p.clone(), label.clone(), dlabel.clone())?;
    Ok(OrbitMap {
        p: profile.p.clone(),
        radius,
        label,
        dlabel,
        interp,
    })
}

/// `beta(p)` from both closed forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaProfile {
    pub p: Vec<f64>,
    /// `(A / 2 alpha) Gamma + (A^2 / alpha) p + C0`.
    pub linear: Vec<f64>,
    /// `-(alpha / 2A) ln(A^2 K^2) + A C1 / (2 alpha) + C0`.
    pub log_form: Vec<f64>,
}

impl BetaProfile {
    pub fn max_disagreement(&self) -> f64 {
        self.linear
            .iter()
            .zip(&self.log_form)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn beta_of_p(profile: &GammaProfile, gc: &GammaConstants, c1: f64) -> BetaProfile {
    let (a, alpha) = (gc.slope, gc.alpha);
    let linear = profile
        .p
        .iter()
        .zip(&profile.big_gamma)
        .map(|(&p, &g)| a / (2.0 * alpha) * g + a * a / alpha * p + gc.c0)
        .collect();
    // A^2 K^2 is the gap y itself
    let log_form = profile
        .gap
        .iter()
        .map(|&y| -alpha / (2.0 * a) * y.ln() + a * c1 / (2.0 * alpha) + gc.c0)
        .collect();
    BetaProfile {
        p: profile.p.clone(),
        linear,
        log_form,
    }
}

/// `d beta / d T` at interior grid points by three-point differences on
/// the non-uniform label grid.
pub fn beta_label_slope(label: &[f64], beta: &[f64]) -> Vec<f64> {
    (1..label.len().saturating_sub(1))
        .map(|i| {
            let (h0, h1) = (label[i] - label[i - 1], label[i + 1] - label[i]);
            let (d0, d1) = ((beta[i] - beta[i - 1]) / h0, (beta[i + 1] - beta[i]) / h1);
            (h1 * d0 + h0 * d1) / (h0 + h1)
        })
        .collect()
}
