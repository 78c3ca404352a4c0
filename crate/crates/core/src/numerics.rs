//! Small numerical kernels shared by the constructions and checks.

use crate::error::{Result, WaveError};

/// Composite Simpson rule with `n` (even) subintervals.
pub fn simpson<F>(mut f: F, a: f64, b: f64, n: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = if n % 2 == 1 { n + 1 } else { n.max(2) };
    let h = (b - a) / n as f64;
    let mut sum = f(a)? + f(b)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h)?;
    }
    Ok(sum * h / 3.0)
}

/// Composite Simpson with the number of subintervals doubled until two
/// successive estimates differ by less than `tol`.
///
/// Function values are reused between levels.
pub fn simpson_halving<F>(mut f: F, a: f64, b: f64, tol: f64, n0: usize, max_n: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let mut n = n0.max(2);
    if n % 2 == 1 {
        n += 1;
    }
    let h0 = (b - a) / n as f64;
    // ends: f(a)+f(b); odd: sum over odd nodes; even: sum over interior even nodes
    let ends = f(a)? + f(b)?;
    let mut even = 0.0;
    let mut odd = 0.0;
    for i in 1..n {
        let v = f(a + i as f64 * h0)?;
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    let mut estimate = (ends + 4.0 * odd + 2.0 * even) * h0 / 3.0;
    let mut change = f64::INFINITY;
    while n < max_n {
        let h = (b - a) / (2 * n) as f64;
        even += odd;
        odd = 0.0;
        for i in 0..n {
            odd += f(a + (2 * i + 1) as f64 * h)?;
        }
        n *= 2;
        let next = (ends + 4.0 * odd + 2.0 * even) * h / 3.0;
        change = (next - estimate).abs();
        estimate = next;
        if change < tol {
            return Ok(estimate);
        }
    }
    Err(WaveError::Accuracy { tol, change })
}

/// Root of a scalar function on a sign-changing bracket, Newton steps
/// safeguarded by bisection.
///
/// `f` returns the value and the derivative.
pub fn newton_bracketed<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let (flo, _) = f(lo)?;
    let (fhi, _) = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(WaveError::Domain(format!(
            "no sign change on [{lo}, {hi}] ({flo:e}, {fhi:e})"
        )));
    }
    let increasing = fhi > flo;
    let mut x = 0.5 * (lo + hi);
    let mut last = f64::INFINITY;
    for _ in 0..max_iter {
        let (fx, dfx) = f(x)?;
        last = fx.abs();
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx > 0.0) == increasing {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= tol || hi - lo <= tol {
            return Ok(x);
        }
    }
    Err(WaveError::Convergence {
        iterations: max_iter,
        residual: last,
    })
}

/// First derivative from values at offsets `-2..=2`, fourth order.
pub fn d1_five(v: [f64; 5], h: f64) -> f64 {
    (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h)
}

/// Second derivative from values at offsets `-2..=2`, fourth order.
pub fn d2_five(v: [f64; 5], h: f64) -> f64 {
    (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h)
}

/// Ratios `e[i] / e[i+1]` of successive error magnitudes.
pub fn successive_ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}

/// Least-squares line `y = slope x + intercept` and its worst residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(WaveError::InsufficientData(format!(
            "line fit needs at least two matching samples, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(WaveError::Degenerate("line fit over coincident abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Ok(LineFit {
        slope,
        intercept,
        max_residual,
    })
}

/// Cubic Hermite interpolation on a sorted (ascending or descending) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermite {
    xs: Vec<f64>,
    ys: Vec<f64>,
    dys: Vec<f64>,
}

impl Hermite {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, dys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() || xs.len() != dys.len() {
            return Err(WaveError::InsufficientData("Hermite grid needs matching samples".into()));
        }
        let ascending = xs[1] > xs[0];
        if !xs.windows(2).all(|w| if ascending { w[1] > w[0] } else { w[1] < w[0] }) {
            return Err(WaveError::Validation("Hermite grid must be strictly monotone".into()));
        }
        Ok(Self { xs, ys, dys })
    }

    pub fn contains(&self, x: f64) -> bool {
        let (a, b) = (self.xs[0], *self.xs.last().unwrap());
        x >= a.min(b) && x <= a.max(b)
    }

    fn segment(&self, x: f64) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let ascending = self.xs[1] > self.xs[0];
        let idx = self.xs.partition_point(|&v| if ascending { v <= x } else { v >= x });
        Some(idx.clamp(1, self.xs.len() - 1) - 1)
    }

    /// Value and derivative at `x`, or `None` outside the grid.
    pub fn eval(&self, x: f64) -> Option<(f64, f64)> {
        let i = self.segment(x)?;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.dys[i] * h, self.dys[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let slope = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        Some((value, slope))
    }
}

/// Natural cubic spline through `(x_i, y_i)` with ascending knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    m: Vec<f64>,
    cumulative: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || n != ys.len() {
            return Err(WaveError::InsufficientData(
                "spline needs at least two matching samples".into(),
            ));
        }
        if !xs.windows(2).all(|w| w[1] > w[0]) {
            return Err(WaveError::Validation("spline knots must be strictly ascending".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(WaveError::Validation("spline samples must be finite".into()));
        }
        // second derivatives: tridiagonal solve with m_0 = m_{n-1} = 0
        let mut m = vec![0.0; n];
        if n > 2 {
            let mut diag = vec![0.0; n];
            let mut rhs = vec![0.0; n];
            let mut upper = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
                if i > 1 {
                    let w = h0 / diag[i - 1];
                    diag[i] -= w * upper[i - 1];
                    rhs[i] -= w * rhs[i - 1];
                }
            }
            for i in (1..n - 1).rev() {
                let next = if i + 1 < n - 1 { upper[i] * m[i + 1] } else { 0.0 };
                m[i] = (rhs[i] - next) / diag[i];
            }
        }
        let mut spline = Self {
            xs,
            ys,
            m,
            cumulative: Vec::new(),
        };
        let mut cumulative = vec![0.0; n];
        for i in 1..n {
            let (a, b) = (spline.xs[i - 1], spline.xs[i]);
            // Simpson is exact on each cubic piece
            let mid = spline.eval_in(i - 1, 0.5 * (a + b)).0;
            cumulative[i] =
                cumulative[i - 1] + (b - a) / 6.0 * (spline.ys[i - 1] + 4.0 * mid + spline.ys[i]);
        }
        spline.cumulative = cumulative;
        Ok(spline)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    fn segment(&self, x: f64) -> usize {
        let idx = self.xs.partition_point(|&v| v <= x);
        idx.clamp(1, self.xs.len() - 1) - 1
    }

    fn eval_in(&self, i: usize, x: f64) -> (f64, f64) {
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let value = a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0;
        let slope = (self.ys[i + 1] - self.ys[i]) / h
            + (-(3.0 * a * a - 1.0) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0;
        (value, slope)
    }

    /// Value at `x` (cubic extrapolation of the end pieces outside the knots).
    pub fn value(&self, x: f64) -> f64 {
        self.eval_in(self.segment(x), x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.eval_in(self.segment(x), x).1
    }

    /// Integral from the first knot to `x`.
    pub fn integral_from_start(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let a = self.xs[i];
        let mid = self.eval_in(i, 0.5 * (a + x)).0;
        self.cumulative[i] + (x - a) / 6.0 * (self.ys[i] + 4.0 * mid + self.eval_in(i, x).0)
    }

    /// Integral over `[lo, hi]`.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        self.integral_from_start(hi) - self.integral_from_start(lo)
    }

    /// Largest value over the knot span, checked on a fine sampling of
    /// each piece.
    pub fn sup(&self) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for i in 0..self.xs.len() - 1 {
            for j in 0..=32 {
                let x = self.xs[i] + (self.xs[i + 1] - self.xs[i]) * j as f64 / 32.0;
                best = best.max(self.eval_in(i, x).0);
            }
        }
        best
    }
}
