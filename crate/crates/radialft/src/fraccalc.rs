//! Fractional calculus on the half-line: Weyl integrals, the composed Weyl
//! derivative convention used throughout the transform, Riemann-Liouville
//! integrals, the weighted derivative F_a, total variation, and the modulus
//! of continuity.
//!
//! Sign conventions. The derivative of order a = p + g (integer p >= 0,
//! 0 < g < 1) is taken as d^p/dt^p of d/dt W_{1-g}, where W is the Weyl
//! integral; with the derivative pushed inside the integral this evaluates as
//! W_{1-g}(f^(p+1)). For integer a it is the classical derivative. Under
//! this convention the operator differs from the half-line Weyl calculus
//! W_{-a} by exactly (-1)^(a*+1), with a* the greatest integer strictly
//! below a — the same factor that appears in the forward transform, so the
//! two cancel end to end. Unit tests pin this against direct oracles for
//! both parities of floor(a) and for integer orders.

use crate::error::{Error, Result};
use crate::profiles::{RadialFn, RadialProfile};
use crate::quad::{integrate_weighted, EndpointWeight, QuadratureSpec};
use crate::specfun::gamma;

/// A positive differentiation/integration order with its integer shadows:
/// `floor_alpha` = floor(a), and `alpha_star` = greatest integer strictly
/// smaller than a (floor(a) - 1 exactly at integers).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder {
    alpha: f64,
    alpha_star: i32,
    floor_alpha: i32,
}

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("order must be positive, got {alpha}")));
        }
        let floor = alpha.floor();
        let alpha_star = if alpha == floor { floor - 1.0 } else { floor };
        Ok(FractionalOrder {
            alpha,
            alpha_star: alpha_star as i32,
            floor_alpha: floor as i32,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha_star(&self) -> i32 {
        self.alpha_star
    }

    pub fn floor_alpha(&self) -> i32 {
        self.floor_alpha
    }

    pub fn fractional_part(&self) -> f64 {
        self.alpha - self.floor_alpha as f64
    }

    pub fn is_integer(&self) -> bool {
        self.fractional_part() == 0.0
    }

    /// The end-to-end transform sign (-1)^(a*+1).
    pub fn transform_sign(&self) -> f64 {
        if (self.alpha_star + 1).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

fn weyl_spec() -> QuadratureSpec {
    // Loose enough that nesting (a Weyl integral of a quadrature-backed
    // function) stays above the inner noise floor.
    QuadratureSpec {
        rel_tol: 3e-10,
        abs_tol: 1e-13,
        ..Default::default()
    }
}

/// Improper integral int_t^inf g(s) (s - t)^(e-1) ds with e > 0, handling
/// the endpoint singularity by substitution and the tail by doubling blocks
/// (or exactly truncating at a compact support end).
fn power_weighted_tail(
    g: &dyn Fn(f64) -> f64,
    t: f64,
    e: f64,
    support_end: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    // First block in the shifted variable d = s - t so the power weight is
    // carried analytically and never evaluated from a rounded abscissa.
    let shifted = move |d: f64| g(t + d);
    let weighted = move |s: f64| {
        let d = s - t;
        if d <= 0.0 {
            return 0.0;
        }
        g(s) * d.powf(e - 1.0)
    };
    if let Some(end) = support_end {
        if t >= end {
            return Ok(0.0);
        }
        let (v, _) = integrate_weighted(&shifted, 0.0, end - t, spec, EndpointWeight::LeftPower(e))?;
        return Ok(v);
    }
    let mut acc = 0.0;
    let block = 1.0f64.max(0.5 * t);
    let (first, _) = integrate_weighted(&shifted, 0.0, block, spec, EndpointWeight::LeftPower(e))?;
    acc += first;
    let mut lo = t + block;
    let mut width = block;
    let mut small_run = 0;
    let mut prev_mag = f64::MAX;
    let mut grow_run = 0;
    for _ in 0..64 {
        let hi = lo + width;
        let (v, _) = integrate_weighted(&weighted, lo, hi, spec, EndpointWeight::None)?;
        acc += v;
        let mag = v.abs();
        if mag <= spec.abs_tol.max(spec.rel_tol * acc.abs()) {
            small_run += 1;
            if small_run >= 2 {
                return Ok(acc);
            }
        } else {
            small_run = 0;
        }
        if mag > prev_mag {
            grow_run += 1;
            if grow_run >= 4 {
                return Err(Error::Divergence(
                    "tail blocks of the half-line integral keep growing".into(),
                ));
            }
        } else {
            grow_run = 0;
        }
        prev_mag = mag;
        lo = hi;
        width *= 2.0;
    }
    Err(Error::Divergence(
        "half-line integral tail failed to settle within the block budget".into(),
    ))
}

/// Weyl integral W_a(f; t) = (1/Gamma(a)) int_t^inf f(s) (s-t)^(a-1) ds.
pub fn weyl_integral(f: &dyn RadialFn, alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(t > 0.0) {
        return Err(Error::Domain("weyl_integral needs alpha > 0, t > 0".into()));
    }
    let spec = weyl_spec();
    let v = power_weighted_tail(&|s| f.eval(s), t, alpha, f.support_end(), &spec)?;
    Ok(v / gamma(alpha))
}

/// Derivative of order `order` under the composed convention (see module
/// docs): classical for integer orders, W_{1-g}(f^(p+1)) for a = p + g.
pub fn weyl_derivative(f: &dyn RadialFn, order: &FractionalOrder, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("weyl_derivative needs t > 0".into()));
    }
    let p = order.floor_alpha() as u32;
    if order.is_integer() {
        return Ok(f.derivative(p, t));
    }
    let g = order.fractional_part();
    let spec = weyl_spec();
    let v = power_weighted_tail(
        &|s| f.derivative(p + 1, s),
        t,
        1.0 - g,
        f.support_end(),
        &spec,
    )?;
    Ok(v / gamma(1.0 - g))
}

/// Riemann-Liouville integral R_a(f; t) = (1/Gamma(a)) int_0^t f(s)(t-s)^(a-1) ds.
pub fn riemann_liouville(f: &dyn RadialFn, alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(t > 0.0) {
        return Err(Error::Domain("riemann_liouville needs alpha > 0, t > 0".into()));
    }
    let spec = weyl_spec();
    let (v, _) = integrate_weighted(
        |s| f.eval(s),
        0.0,
        t,
        &spec,
        EndpointWeight::RightPower(alpha),
    )?;
    Ok(v / gamma(alpha))
}

/// Reconstructs the classical p-th derivative (0 <= p <= floor(a)) from the
/// order-a derivative:
///
/// ```text
/// f^(p)(t) = sign / Gamma(a-p) * int_t^inf (s-t)^(a-p-1) f^(a)(s) ds,
/// sign = (-1)^(p + a* + 1)
/// ```
///
/// The sign was fixed by numeric validation against direct derivatives for
/// every parity class.
pub fn reconstruct_derivative(
    f: &dyn RadialFn,
    order: &FractionalOrder,
    p: u32,
    t: f64,
) -> Result<f64> {
    if p as i32 > order.floor_alpha() {
        return Err(Error::Domain(format!(
            "reconstruction needs p <= floor(alpha), got p = {p}, alpha = {}",
            order.alpha()
        )));
    }
    if order.is_integer() && p as i32 == order.floor_alpha() {
        return Ok(if p == 0 { f.eval(t) } else { f.derivative(p, t) });
    }
    let a = order.alpha();
    let e = a - p as f64;
    let sign = if (p as i32 + order.alpha_star() + 1).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let spec = QuadratureSpec {
        rel_tol: 1e-9,
        abs_tol: 1e-12,
        ..Default::default()
    };
    let inner = |s: f64| weyl_derivative(f, order, s).unwrap_or(f64::NAN);
    let v = power_weighted_tail(&inner, t, e, f.support_end(), &spec)?;
    Ok(sign * v / gamma(e))
}

/// Where an F_a evaluation comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    WeylNumeric,
}

/// The weighted fractional derivative F_a(t) = t^((n-1)/2) f^(a)(t),
/// evaluable on (0, inf), with provenance and support metadata.
#[derive(Clone)]
pub struct FractionalDerivativeResult {
    profile: RadialProfile,
    order: FractionalOrder,
    dim: u32,
    provenance: Provenance,
}

impl FractionalDerivativeResult {
    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn order(&self) -> FractionalOrder {
        self.order
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn support_end(&self) -> Option<f64> {
        self.profile.support_end()
    }

    /// Exponent of (support_end - t) governing F near the support end, when
    /// the family provides one. Used as a quadrature hint.
    pub fn end_exponent(&self) -> Option<f64> {
        match self.provenance {
            Provenance::ClosedForm if self.order.is_integer() => {
                self.profile.end_exponent(self.order.floor_alpha() as u32)
            }
            _ => self
                .profile
                .end_exponent(0)
                .map(|e0| e0 - self.order.alpha()),
        }
    }

    /// F_a(t); NaN if an internal tail integral fails (admissible profiles
    /// never hit this).
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if let Some(end) = self.support_end() {
            if t >= end {
                return 0.0;
            }
        }
        let weight = t.powf((self.dim as f64 - 1.0) / 2.0);
        let d = match self.provenance {
            Provenance::ClosedForm => self.closed_derivative(t),
            Provenance::WeylNumeric => {
                weyl_derivative(&self.profile, &self.order, t).unwrap_or(f64::NAN)
            }
        };
        weight * d
    }

    fn closed_derivative(&self, t: f64) -> f64 {
        if self.order.is_integer() {
            return self.profile.derivative(self.order.floor_alpha() as u32, t);
        }
        match self.profile {
            // Exponential: each composed fractional step contributes -e^(-t),
            // each classical one -1; net (-1)^(p+1) e^(-t).
            RadialProfile::Exponential => {
                let p = self.order.floor_alpha();
                if (p + 1).rem_euclid(2) == 0 {
                    (-t).exp()
                } else {
                    -(-t).exp()
                }
            }
            _ => f64::NAN,
        }
    }

    /// Maximum deviation between the closed-form and numeric branches over a
    /// probe grid in (0, hi).
    pub fn verify_against_numeric(&self, hi: f64, points: usize) -> Result<f64> {
        let mut worst = 0.0f64;
        for i in 1..=points {
            let t = hi * i as f64 / (points + 1) as f64;
            let numeric = t.powf((self.dim as f64 - 1.0) / 2.0)
                * weyl_derivative(&self.profile, &self.order, t)?;
            let dev = (self.eval(t) - numeric).abs();
            if dev > worst {
                worst = dev;
            }
        }
        Ok(worst)
    }
}

/// Builds F_a for a profile, preferring the closed-form derivative chain
/// when the family registers one for this order.
pub fn build_f_alpha(
    profile: &RadialProfile,
    order: &FractionalOrder,
    dim: u32,
) -> Result<FractionalDerivativeResult> {
    if dim < 2 {
        return Err(Error::Domain("dimension must be >= 2".into()));
    }
    let closed = (order.is_integer() && {
        // Integer orders: any family with closed classical derivatives, and
        // the first derivative of the logarithmic profiles.
        profile.has_closed_derivatives()
            || (order.floor_alpha() == 1
                && matches!(profile, RadialProfile::Remark3 | RadialProfile::Belinskii))
    }) || (!order.is_integer() && matches!(profile, RadialProfile::Exponential));
    Ok(FractionalDerivativeResult {
        profile: profile.clone(),
        order: *order,
        dim,
        provenance: if closed {
            Provenance::ClosedForm
        } else {
            Provenance::WeylNumeric
        },
    })
}

/// Total-variation estimate with refinement metadata.
#[derive(Debug, Clone, Copy)]
pub struct VariationEstimate {
    pub total_variation: f64,
    pub grid_resolution: f64,
    pub converged: bool,
}

/// Adaptive total variation of `f` on [lo, hi]: cells refine until the
/// refinement gain is negligible or the depth budget runs out. Suspected
/// unbounded variation reports `converged = false` rather than an error.
pub fn total_variation(
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    max_depth: u32,
) -> VariationEstimate {
    let base_cells = 512usize;
    let width = hi - lo;
    let mut stack: Vec<(f64, f64, f64, f64, u32)> = Vec::new();
    for i in (0..base_cells).rev() {
        let a = lo + width * i as f64 / base_cells as f64;
        let b = lo + width * (i + 1) as f64 / base_cells as f64;
        stack.push((a, f(a), b, f(b), 0));
    }
    let mut total = 0.0f64;
    let mut finest = width / base_cells as f64;
    let mut converged = true;
    while let Some((a, fa, b, fb, depth)) = stack.pop() {
        // Two refinement levels per decision: a lone midpoint can land
        // monotonically between the endpoints of an unresolved oscillation
        // and stall the recursion, so the halves are compared against
        // quarters before a cell is accepted.
        let m = 0.5 * (a + b);
        let q1 = 0.5 * (a + m);
        let q3 = 0.5 * (m + b);
        let (fm, fq1, fq3) = (f(m), f(q1), f(q3));
        let halves = (fm - fa).abs() + (fb - fm).abs();
        let quarters =
            (fq1 - fa).abs() + (fm - fq1).abs() + (fq3 - fm).abs() + (fb - fq3).abs();
        let gain = quarters - halves;
        let cell_res = 0.25 * (b - a);
        if cell_res < finest {
            finest = cell_res;
        }
        if gain <= 1e-4 * quarters.max(1e-14) {
            total += quarters;
            continue;
        }
        if depth >= max_depth {
            total += quarters;
            converged = false;
            continue;
        }
        stack.push((q3, fq3, b, fb, depth + 2));
        stack.push((m, fm, q3, fq3, depth + 2));
        stack.push((q1, fq1, m, fm, depth + 2));
        stack.push((a, fa, q1, fq1, depth + 2));
    }
    VariationEstimate {
        total_variation: total,
        grid_resolution: finest,
        converged,
    }
}

/// Modulus of continuity: sup |f(t+h) - f(t)| over 0 < h <= delta on a dense
/// probe grid of [lo, hi]. Computed as the largest (max - min) over sliding
/// windows of width delta, with monotone deques for O(grid) cost.
pub fn modulus_of_continuity(f: &dyn Fn(f64) -> f64, delta: f64, lo: f64, hi: f64) -> f64 {
    if !(delta > 0.0) || !(hi > lo) {
        return 0.0;
    }
    let m = 8192usize;
    let h = (hi - lo) / (m - 1) as f64;
    let vals: Vec<f64> = (0..m).map(|i| f(lo + h * i as f64)).collect();
    let w = ((delta / h).round() as usize).clamp(1, m - 1);
    sliding_window_spread(&vals, w + 1)
}

/// Largest (max - min) over windows of `len` consecutive samples.
pub(crate) fn sliding_window_spread(vals: &[f64], len: usize) -> f64 {
    let mut maxq: std::collections::VecDeque<usize> = Default::default();
    let mut minq: std::collections::VecDeque<usize> = Default::default();
    let mut best = 0.0f64;
    for i in 0..vals.len() {
        while maxq.front().is_some_and(|&j| i >= len && j <= i - len) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&j| i >= len && j <= i - len) {
            minq.pop_front();
        }
        while maxq.back().is_some_and(|&j| vals[j] <= vals[i]) {
            maxq.pop_back();
        }
        while minq.back().is_some_and(|&j| vals[j] >= vals[i]) {
            minq.pop_back();
        }
        maxq.push_back(i);
        minq.push_back(i);
        if i + 1 >= len {
            let spread = vals[*maxq.front().unwrap()] - vals[*minq.front().unwrap()];
            if spread > best {
                best = spread;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    struct PowerLaw {
        mu: f64,
    }

    impl RadialFn for PowerLaw {
        fn eval(&self, t: f64) -> f64 {
            t.powf(-self.mu)
        }

        fn derivative(&self, k: u32, t: f64) -> f64 {
            let mut c = 1.0;
            for j in 0..k {
                c *= -self.mu - j as f64;
            }
            c * t.powf(-self.mu - k as f64)
        }

        fn has_closed_derivatives(&self) -> bool {
            true
        }
    }

    #[test]
    fn order_shadows() {
        let o = FractionalOrder::new(2.0).unwrap();
        assert_eq!(o.floor_alpha(), 2);
        assert_eq!(o.alpha_star(), 1);
        let o = FractionalOrder::new(2.5).unwrap();
        assert_eq!(o.floor_alpha(), 2);
        assert_eq!(o.alpha_star(), 2);
        assert!(FractionalOrder::new(0.0).is_err());
    }

    #[test]
    fn weyl_integral_of_exponential_is_itself() {
        let f = RadialProfile::Exponential;
        for &alpha in &[0.3, 0.5, 1.0, 1.7] {
            for &t in &[0.5, 1.0, 3.0] {
                let v = weyl_integral(&f, alpha, t).unwrap();
                assert_relative_eq!(v, (-t).exp(), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn weyl_integral_of_power_law() {
        // W_a(r^(-mu); 1) = Gamma(mu - a)/Gamma(mu).
        for &(mu, alpha) in &[(3.0, 1.0), (2.5, 0.5), (4.0, 1.5)] {
            let f = PowerLaw { mu };
            let v = weyl_integral(&f, alpha, 1.0).unwrap();
            let expect = gamma(mu - alpha) / gamma(mu);
            assert_relative_eq!(v, expect, max_relative = 1e-8);
        }
    }

    #[test]
    fn weyl_integral_alpha_one_is_plain_tail() {
        let f = RadialProfile::Gaussian;
        let t = 0.8;
        let v = weyl_integral(&f, 1.0, t).unwrap();
        let spec = QuadratureSpec::default();
        let (direct, _) = integrate_weighted(
            |s| (-0.5 * s * s).exp(),
            t,
            12.0,
            &spec,
            EndpointWeight::None,
        )
        .unwrap();
        assert_relative_eq!(v, direct, max_relative = 1e-9);
    }

    #[test]
    fn weyl_derivative_signs_for_exponential() {
        // Composed convention: order 1/2 of e^(-t) is -e^(-t); order 3/2 is
        // +e^(-t); integer orders are classical.
        let f = RadialProfile::Exponential;
        let t = 1.2;
        let half = FractionalOrder::new(0.5).unwrap();
        assert_relative_eq!(
            weyl_derivative(&f, &half, t).unwrap(),
            -(-t).exp(),
            max_relative = 1e-9
        );
        let three_half = FractionalOrder::new(1.5).unwrap();
        assert_relative_eq!(
            weyl_derivative(&f, &three_half, t).unwrap(),
            (-t).exp(),
            max_relative = 1e-9
        );
        let one = FractionalOrder::new(1.0).unwrap();
        assert_relative_eq!(
            weyl_derivative(&f, &one, t).unwrap(),
            -(-t).exp(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn weyl_derivative_of_power_law() {
        // Order g in (0,1) of t^(-mu): -Gamma(mu+g)/Gamma(mu) t^(-mu-g).
        let f = PowerLaw { mu: 2.0 };
        for &g in &[0.25, 0.5, 0.75] {
            let order = FractionalOrder::new(g).unwrap();
            for &t in &[0.7, 1.0, 2.0] {
                let v = weyl_derivative(&f, &order, t).unwrap();
                let expect = -gamma(2.0 + g) / gamma(2.0) * t.powf(-2.0 - g);
                assert_relative_eq!(v, expect, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn riemann_liouville_of_one() {
        struct One;
        impl RadialFn for One {
            fn eval(&self, _: f64) -> f64 {
                1.0
            }
        }
        for &alpha in &[0.5, 1.0, 2.5] {
            for &t in &[0.5, 2.0] {
                let v = riemann_liouville(&One, alpha, t).unwrap();
                assert_relative_eq!(v, t.powf(alpha) / gamma(alpha + 1.0), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn riemann_liouville_semigroup() {
        // R_{a - floor(a)} after R_{floor(a)} equals R_a.
        let f = RadialProfile::Gaussian;
        let alpha = 1.6;
        let t = 1.3;
        let whole = riemann_liouville(&f, alpha, t).unwrap();
        let inner = crate::profiles::FnRadial {
            f: |s: f64| riemann_liouville(&RadialProfile::Gaussian, 1.0, s).unwrap(),
            support_end: None,
        };
        let composed = riemann_liouville(&inner, 0.6, t).unwrap();
        assert_abs_diff_eq!(whole, composed, epsilon = 1e-8);
    }

    #[test]
    fn weyl_semigroup_property() {
        let f = RadialProfile::Exponential;
        for &(a, b) in &[(0.25, 0.5), (0.5, 1.0), (1.0, 0.25)] {
            for &t in &[0.8, 2.0] {
                let whole = weyl_integral(&f, a + b, t).unwrap();
                let inner = crate::profiles::FnRadial {
                    f: move |s: f64| weyl_integral(&RadialProfile::Exponential, b, s).unwrap(),
                    support_end: None,
                };
                let composed = weyl_integral(&inner, a, t).unwrap();
                assert_abs_diff_eq!(whole, composed, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn weyl_inversion_recovers_function() {
        // Fractional derivative of the same-order Weyl integral returns the
        // function, up to the composed convention's sign per parity class.
        let base = RadialProfile::Gaussian;
        for &a in &[0.5, 1.0] {
            let order = FractionalOrder::new(a).unwrap();
            let lifted = crate::profiles::FnRadial {
                f: move |s: f64| weyl_integral(&RadialProfile::Gaussian, a, s).unwrap(),
                support_end: None,
            };
            for &t in &[0.7, 1.5] {
                let recovered = weyl_derivative(&lifted, &order, t).unwrap();
                let expect = base.eval(t);
                assert_abs_diff_eq!(recovered.abs(), expect, epsilon = 2e-6);
            }
        }
    }

    #[test]
    fn reconstruction_fixes_global_sign() {
        let f = RadialProfile::Exponential;
        let order = FractionalOrder::new(0.5).unwrap();
        for &t in &[0.6, 1.5] {
            let v = reconstruct_derivative(&f, &order, 0, t).unwrap();
            assert_relative_eq!(v, (-t).exp(), max_relative = 1e-7);
        }
        // p = floor(alpha) with integer alpha: identity on the derivative.
        let one = FractionalOrder::new(1.0).unwrap();
        let v = reconstruct_derivative(&f, &one, 1, 0.9).unwrap();
        assert_relative_eq!(v, -(-0.9f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn reconstruction_recovers_gaussian_from_half_order() {
        let f = RadialProfile::Gaussian;
        let order = FractionalOrder::new(0.5).unwrap();
        let t = 1.0;
        let v = reconstruct_derivative(&f, &order, 0, t).unwrap();
        assert_abs_diff_eq!(v, (-0.5f64).exp(), epsilon = 1e-6);
    }

    #[test]
    fn f_alpha_gaussian_integer_order() {
        // n = 3, a = 1: F(t) = t * (-t e^{-t^2/2}).
        let order = FractionalOrder::new(1.0).unwrap();
        let fa = build_f_alpha(&RadialProfile::Gaussian, &order, 3).unwrap();
        assert_eq!(fa.provenance(), Provenance::ClosedForm);
        for &t in &[0.5, 1.0, 2.0] {
            assert_relative_eq!(
                fa.eval(t),
                -t * t * (-0.5 * t * t).exp(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn f_alpha_remark3_formula() {
        // n = 3, a = 1: F(t) = t f'(t) = -cos(ln ln(e/t)) / ln(e/t).
        let order = FractionalOrder::new(1.0).unwrap();
        let fa = build_f_alpha(&RadialProfile::Remark3, &order, 3).unwrap();
        for &t in &[0.1f64, 0.4, 0.9] {
            let u = 1.0 - t.ln();
            let expect = -u.ln().cos() / u;
            assert_relative_eq!(fa.eval(t), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn f_alpha_closed_vs_numeric_branches() {
        // Closed-form and Weyl-numeric branches agree on probe grids.
        let cases: Vec<(RadialProfile, f64, u32)> = vec![
            (RadialProfile::Gaussian, 1.0, 3),
            (RadialProfile::Exponential, 0.5, 3),
            (RadialProfile::Exponential, 1.5, 4),
            (RadialProfile::Example1 { a: 2.0, beta: 3.0 }, 1.0, 3),
        ];
        for (profile, alpha, n) in cases {
            let order = FractionalOrder::new(alpha).unwrap();
            let fa = build_f_alpha(&profile, &order, n).unwrap();
            if fa.provenance() == Provenance::ClosedForm {
                let dev = fa.verify_against_numeric(2.5, 24).unwrap();
                assert!(dev < 1e-6, "closed vs numeric dev {dev}");
            }
        }
    }

    #[test]
    fn variation_of_monotone_and_sine() {
        let v = total_variation(&|t: f64| t * t, 0.0, 2.0, 20);
        assert_abs_diff_eq!(v.total_variation, 4.0, epsilon = 1e-6);
        assert!(v.converged);
        let v = total_variation(&|t: f64| t.sin(), 0.0, 2.0 * std::f64::consts::PI, 20);
        assert_abs_diff_eq!(v.total_variation, 4.0, epsilon = 1e-6);
        assert!(v.converged);
    }

    #[test]
    fn variation_flags_fast_oscillator() {
        // t sin(1/t) has unbounded (log-divergent) variation on (0, 1].
        let f = |t: f64| if t <= 0.0 { 0.0 } else { t * (1.0 / t).sin() };
        let v = total_variation(&f, 1e-12, 1.0, 26);
        assert!(!v.converged, "divergent variation must be flagged");
    }

    #[test]
    fn variation_of_remark3_weighted_derivative_is_finite() {
        // F(t) = -cos(ln ln(e/t))/ln(e/t) has bounded variation: its
        // oscillation amplitudes decay like 1/ln.
        let order = FractionalOrder::new(1.0).unwrap();
        let fa = build_f_alpha(&RadialProfile::Remark3, &order, 3).unwrap();
        let v = total_variation(&|t| fa.eval(t), 1e-10, 1.0, 26);
        assert!(v.converged, "bounded variation expected, got unconverged");
        assert!(v.total_variation < 5.0);
    }

    #[test]
    fn variation_superadditive_over_splits() {
        let f = |t: f64| (3.0 * t).sin() * (-t).exp();
        let whole = total_variation(&f, 0.0, 4.0, 20).total_variation;
        let left = total_variation(&f, 0.0, 1.7, 20).total_variation;
        let right = total_variation(&f, 1.7, 4.0, 20).total_variation;
        assert!(left + right <= whole + 1e-6);
        assert!(whole <= left + right + 1e-6);
    }

    #[test]
    fn modulus_basics() {
        assert_eq!(modulus_of_continuity(&|_| 2.5, 0.1, 0.0, 1.0), 0.0);
        let m = modulus_of_continuity(&|t| t, 0.25, 0.0, 1.0);
        assert_abs_diff_eq!(m, 0.25, epsilon = 1e-3);
    }

    #[test]
    fn modulus_monotone_and_subadditive() {
        let f = |t: f64| (5.0 * t).sin() * t;
        let d1 = 0.07;
        let d2 = 0.13;
        let m1 = modulus_of_continuity(&f, d1, 0.0, 2.0);
        let m2 = modulus_of_continuity(&f, d2, 0.0, 2.0);
        let m12 = modulus_of_continuity(&f, d1 + d2, 0.0, 2.0);
        assert!(m2 >= m1 - 1e-12);
        assert!(m12 <= m1 + m2 + 1e-3);
    }
}
