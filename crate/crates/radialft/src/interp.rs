//! Interpolation support: natural cubic splines on uniform grids (read-only
//! kernel caches) and monotonicity-preserving cubic Hermite interpolation
//! (tabulated profiles, where overshoot would corrupt variation estimates).

use crate::error::{Error, Result};

/// Natural cubic spline over a uniform grid.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    d2: Vec<f64>,
}

impl CubicSpline {
    pub fn fit_uniform(x0: f64, x1: f64, y: Vec<f64>) -> Result<Self> {
        let n = y.len();
        if n < 4 || !(x1 > x0) {
            return Err(Error::Domain("spline needs >= 4 points and x1 > x0".into()));
        }
        let h = (x1 - x0) / (n - 1) as f64;
        // Natural spline: tridiagonal system for interior second derivatives.
        let mut d2 = vec![0.0f64; n];
        let m = n - 2;
        let mut diag = vec![4.0f64; m];
        let mut rhs = vec![0.0f64; m];
        for i in 0..m {
            rhs[i] = 6.0 * (y[i] - 2.0 * y[i + 1] + y[i + 2]) / (h * h);
        }
        for i in 1..m {
            let w = 1.0 / diag[i - 1];
            diag[i] -= w;
            rhs[i] -= w * rhs[i - 1];
        }
        if m > 0 {
            d2[m] = rhs[m - 1] / diag[m - 1];
            for i in (0..m - 1).rev() {
                d2[i + 1] = (rhs[i] - d2[i + 2]) / diag[i];
            }
        }
        Ok(CubicSpline { x0, h, y, d2 })
    }

    pub fn lo(&self) -> f64 {
        self.x0
    }

    pub fn hi(&self) -> f64 {
        self.x0 + self.h * (self.y.len() - 1) as f64
    }

    /// Spline value; arguments are clamped to the fit range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let t = ((x - self.x0) / self.h).clamp(0.0, (n - 1) as f64);
        let i = (t as usize).min(n - 2);
        let u = t - i as f64;
        let v = 1.0 - u;
        v * self.y[i]
            + u * self.y[i + 1]
            + self.h * self.h / 6.0
                * ((v * v * v - v) * self.d2[i] + (u * u * u - u) * self.d2[i + 1])
    }
}

/// Fritsch-Carlson monotone cubic interpolant over strictly increasing knots.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Domain("need at least 2 knots".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Domain("knot abscissae must strictly increase".into()));
            }
        }
        let n = knots.len();
        let x: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let y: Vec<f64> = knots.iter().map(|k| k.1).collect();
        let mut secant = vec![0.0f64; n - 1];
        for i in 0..n - 1 {
            secant[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        }
        let mut slope = vec![0.0f64; n];
        slope[0] = secant[0];
        slope[n - 1] = secant[n - 2];
        for i in 1..n - 1 {
            slope[i] = if secant[i - 1] * secant[i] <= 0.0 {
                0.0
            } else {
                0.5 * (secant[i - 1] + secant[i])
            };
        }
        for i in 0..n - 1 {
            if secant[i] == 0.0 {
                slope[i] = 0.0;
                slope[i + 1] = 0.0;
                continue;
            }
            let a = slope[i] / secant[i];
            let b = slope[i + 1] / secant[i];
            let s = a * a + b * b;
            if s > 9.0 {
                let tau = 3.0 / s.sqrt();
                slope[i] = tau * a * secant[i];
                slope[i + 1] = tau * b * secant[i];
            }
        }
        Ok(MonotoneCubic { x, y, slope })
    }

    pub fn lo(&self) -> f64 {
        self.x[0]
    }

    pub fn hi(&self) -> f64 {
        *self.x.last().unwrap()
    }

    /// Hermite evaluation; clamps to the knot range.
    pub fn eval(&self, xq: f64) -> f64 {
        let n = self.x.len();
        if xq <= self.x[0] {
            return self.y[0];
        }
        if xq >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = match self.x.partition_point(|&v| v <= xq) {
            0 => 0,
            p => p - 1,
        }
        .min(n - 2);
        let h = self.x[i + 1] - self.x[i];
        let u = (xq - self.x[i]) / h;
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        h00 * self.y[i] + h10 * h * self.slope[i] + h01 * self.y[i + 1] + h11 * h * self.slope[i + 1]
    }
}
