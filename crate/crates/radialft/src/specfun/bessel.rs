//! Bessel functions of the first kind for real order `nu >= -1` and `x >= 0`.
//!
//! Three evaluation regimes are stitched together:
//!
//! * ascending power series — small arguments, and any `x <= nu` where the
//!   series has no destructive cancellation;
//! * Hankel large-argument expansion with adaptive truncation — accepted only
//!   when the smallest retained term certifies ~1e-13 absolute accuracy (the
//!   expansion terminates exactly for half-integer orders);
//! * backward recurrence in the order, seeded by the series above the
//!   turning point — covers the intermediate zone where neither of the other
//!   two regimes reaches full precision.
//!
//! The regimes agree to better than 1e-11 at every seam; unit tests pin this
//! down against integer-order `libm` values and elementary half-integer
//! closed forms.

use super::dd::{two_prod, two_sum, Dd};
use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Largest argument handled by the ascending series for orders below `x`.
const SERIES_X_MAX: f64 = 16.0;
/// Acceptance threshold for the truncated Hankel expansion (absolute).
const ASYMPTOTIC_MIN_TERM: f64 = 3e-14;

/// Bessel function order; must be finite and at least -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < -1.0 {
            return Err(Error::Domain(format!(
                "Bessel order must be finite and >= -1, got {nu}"
            )));
        }
        Ok(BesselOrder(nu))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// J_nu(x) for `nu >= -1`, `x >= 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    let order = BesselOrder::new(nu)?;
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "Bessel argument must be finite and >= 0, got {x}"
        )));
    }
    Ok(bessel_j_checked(order, x))
}

/// J_nu(x) with the domain already validated.
pub fn bessel_j_checked(order: BesselOrder, x: f64) -> f64 {
    let nu = order.get();
    if nu == -1.0 {
        return -eval(1.0, x);
    }
    eval(nu, x)
}

fn eval(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu < 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
    }
    if x <= SERIES_X_MAX || nu >= x {
        return series(nu, x);
    }
    if let Some(v) = hankel(nu, x) {
        return v;
    }
    backward_recurrence(nu, x)
}

/// Ascending series sum_k (-1)^k (x/2)^(nu+2k) / (k! Gamma(nu+k+1)),
/// accumulated in double-double so alternating cancellation (which can reach
/// fifteen digits when the series seeds the backward recurrence) costs no
/// accuracy. The overall scale factor is applied in plain f64 at the end.
fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let ln_t0 = nu * half.ln() - ln_gamma(nu + 1.0);
    let t0 = ln_t0.exp();
    if t0 == 0.0 {
        return 0.0;
    }
    let q = two_prod(half, half);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    let mut scale = 1.0f64;
    for k in 1..900 {
        let kf = k as f64;
        term = term.mul(q).div_f64(kf).div(two_sum(nu, kf)).neg();
        sum = sum.add(term);
        let a = term.hi.abs();
        if a > scale {
            scale = a;
        }
        if a < 1e-34 * scale && kf > half {
            break;
        }
    }
    t0 * sum.value()
}

/// Hankel expansion J = sqrt(2/(pi x)) (P cos chi - Q sin chi),
/// chi = x - nu pi/2 - pi/4, truncated at the smallest term.
///
/// Returns `None` when the smallest achievable term is too large to certify
/// the accuracy target at this (nu, x).
fn hankel(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let inv8x = 1.0 / (8.0 * x);
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0f64; // a_0
    let mut prev_abs = f64::MAX;
    let mut converged = false;
    for k in 0..64u32 {
        let abs_a = a.abs();
        if abs_a >= prev_abs {
            // Divergent tail of the asymptotic series: stop before it.
            break;
        }
        // sign (-1)^(k/2 rounded): P takes even k, Q odd k.
        let j = k / 2;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if abs_a < 1e-17 {
            converged = true;
            break;
        }
        prev_abs = abs_a;
        let odd = (2 * k + 1) as f64;
        a *= (mu - odd * odd) * inv8x / (k as f64 + 1.0);
    }
    if !converged && prev_abs > ASYMPTOTIC_MIN_TERM {
        return None;
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    Some((2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin()))
}

/// Backward recurrence in the order, seeded by the benign series above the
/// turning point. Stable because J is the solution that grows as the order
/// decreases through nu ~ x.
fn backward_recurrence(nu: f64, x: f64) -> f64 {
    let m = ((x - nu).ceil() as i64 + 14).max(2) as usize;
    let nu0 = nu + m as f64;
    let mut above = series(nu0 + 1.0, x); // J_{nu0+1}
    let mut here = series(nu0, x); // J_{nu0}
    let mut order = nu0;
    for _ in 0..m {
        let below = (2.0 * order / x) * here - above;
        above = here;
        here = below;
        order -= 1.0;
    }
    here
}

/// d/dx J_nu(x) via J'_nu = (nu/x) J_nu - J_{nu+1}; x > 0.
pub fn bessel_j_derivative(nu: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain("derivative requires x > 0".into()));
    }
    Ok((nu / x) * bessel_j(nu, x)? - bessel_j(nu + 1.0, x)?)
}

/// k-th positive zero of J_nu (k >= 1), nu > -1.
///
/// McMahon's expansion seeds a few Newton steps. Intended for oscillation
/// bracketing; accuracy is far better than the half-period panel widths that
/// consume it.
pub fn bessel_zero(nu: f64, k: usize) -> Result<f64> {
    if nu <= -0.99 {
        return Err(Error::Domain("zeros need nu > -0.99".into()));
    }
    if k == 0 {
        return Err(Error::Domain("zero index starts at 1".into()));
    }
    let mu = 4.0 * nu * nu;
    let beta = (k as f64 + 0.5 * nu - 0.25) * PI;
    let mut z = if beta > nu.max(1.0) {
        let b8 = 8.0 * beta;
        beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
    } else {
        beta
    };
    // Low zeros of moderately large orders start below the turning point;
    // pull the guess up to the Airy estimate of the first zero.
    if k == 1 && nu > 1.0 {
        let first = nu + 1.8557571 * nu.powf(1.0 / 3.0) + 1.033150 * nu.powf(-1.0 / 3.0).min(1.0);
        if z < first {
            z = first;
        }
    }
    for _ in 0..3 {
        let f = bessel_j(nu, z)?;
        let d = bessel_j_derivative(nu, z)?;
        if d.abs() < 1e-300 {
            break;
        }
        let step = f / d;
        // Newton step capped to half the asymptotic zero spacing.
        z -= step.clamp(-1.5, 1.5);
        if z <= 0.0 {
            z = 0.5 * beta.max(1.0);
        }
    }
    Ok(z)
}
