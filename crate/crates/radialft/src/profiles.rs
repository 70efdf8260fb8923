//! Radial profiles f_0 (the radial part of f(x) = f_0(|x|)): built-in
//! analytic families with closed-form derivative chains, plus user-supplied
//! tabulated profiles.
//!
//! The algebraic families (powers of 1 - t^a) keep their derivatives inside
//! the closed term family c * t^p * (1 - t^a)^q, so every classical
//! derivative needed by the fractional calculus is exact. The logarithmic
//! counterexample profiles register their first derivative in closed form
//! and fall back to finite differences beyond that.

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;

/// Log-log clamp: the counterexample profiles are evaluated at
/// t >= this to avoid the nested-logarithm singularity at 0. Integrals at
/// the crate's tolerances are insensitive to the clamp.
const LOG_CLAMP: f64 = 1e-12;

/// Behavior shared by everything the fractional calculus can consume.
///
/// Implementations must be safe for concurrent evaluation; profiles are
/// immutable after construction.
pub trait RadialFn: Sync {
    fn eval(&self, t: f64) -> f64;

    /// k-th classical derivative (k >= 1) at an interior point. The default
    /// uses central finite differences and degrades in accuracy with k
    /// (roughly 1e-12 at k = 1 down to 1e-7 at k = 5).
    fn derivative(&self, k: u32, t: f64) -> f64 {
        finite_difference(&|u| self.eval(u), k, t, self.support_end())
    }

    /// End of the support when compact; evaluation is exactly zero beyond.
    fn support_end(&self) -> Option<f64> {
        None
    }

    /// Whether `derivative` is closed-form (rather than finite differences).
    fn has_closed_derivatives(&self) -> bool {
        false
    }

    /// Exponent e such that the k-th derivative behaves like
    /// (support_end - t)^e at the support end, when known. Quadrature hint.
    fn end_exponent(&self, _k: u32) -> Option<f64> {
        None
    }
}

/// Central finite differences of order 4 (order 2 for k >= 5), with the
/// step shrunk near a support endpoint so the stencil stays interior.
pub fn finite_difference(
    f: &dyn Fn(f64) -> f64,
    k: u32,
    t: f64,
    support_end: Option<f64>,
) -> f64 {
    let (stencil, scale_pow): (&[(f64, f64)], i32) = match k {
        1 => (
            &[(-2.0, 1.0 / 12.0), (-1.0, -2.0 / 3.0), (1.0, 2.0 / 3.0), (2.0, -1.0 / 12.0)],
            1,
        ),
        2 => (
            &[
                (-2.0, -1.0 / 12.0),
                (-1.0, 4.0 / 3.0),
                (0.0, -5.0 / 2.0),
                (1.0, 4.0 / 3.0),
                (2.0, -1.0 / 12.0),
            ],
            2,
        ),
        3 => (
            &[
                (-3.0, 1.0 / 8.0),
                (-2.0, -1.0),
                (-1.0, 13.0 / 8.0),
                (1.0, -13.0 / 8.0),
                (2.0, 1.0),
                (3.0, -1.0 / 8.0),
            ],
            3,
        ),
        4 => (
            &[
                (-3.0, -1.0 / 6.0),
                (-2.0, 2.0),
                (-1.0, -13.0 / 2.0),
                (0.0, 28.0 / 3.0),
                (1.0, -13.0 / 2.0),
                (2.0, 2.0),
                (3.0, -1.0 / 6.0),
            ],
            4,
        ),
        5 => (
            &[
                (-3.0, -0.5),
                (-2.0, 2.0),
                (-1.0, -2.5),
                (1.0, 2.5),
                (2.0, -2.0),
                (3.0, 0.5),
            ],
            5,
        ),
        6 => (
            &[
                (-3.0, 1.0),
                (-2.0, -6.0),
                (-1.0, 15.0),
                (0.0, -20.0),
                (1.0, 15.0),
                (2.0, -6.0),
                (3.0, 1.0),
            ],
            6,
        ),
        _ => return f64::NAN,
    };
    let mut h = 5e-3 * t.abs().max(0.1) * (1.0 + k as f64 * 0.5);
    if let Some(end) = support_end {
        if t < end {
            h = h.min((end - t) / 4.0);
        }
    }
    h = h.min(t / 4.0).max(1e-8);
    let mut acc = 0.0;
    for &(off, w) in stencil {
        acc += w * f(t + off * h);
    }
    acc / h.powi(scale_pow)
}

/// One closed family of terms c * t^p * (1 - t^a)^q, stable under d/dt.
#[derive(Debug, Clone, PartialEq)]
struct PowerChain {
    a: f64,
    terms: Vec<(f64, f64, f64)>, // (coeff, p, q)
}

impl PowerChain {
    fn single(a: f64, coeff: f64, p: f64, q: f64) -> Self {
        PowerChain {
            a,
            terms: vec![(coeff, p, q)],
        }
    }

    fn eval(&self, t: f64) -> f64 {
        let w = 1.0 - t.powf(self.a);
        let mut acc = 0.0;
        for &(c, p, q) in &self.terms {
            let tp = if p == 0.0 { 1.0 } else { t.powf(p) };
            let wq = if q == 0.0 { 1.0 } else { w.powf(q) };
            acc += c * tp * wq;
        }
        acc
    }

    fn differentiate(&self) -> Self {
        let mut terms: Vec<(f64, f64, f64)> = Vec::with_capacity(self.terms.len() * 2);
        let mut push = |c: f64, p: f64, q: f64| {
            if c == 0.0 {
                return;
            }
            for entry in terms.iter_mut() {
                if entry.1 == p && entry.2 == q {
                    entry.0 += c;
                    return;
                }
            }
            terms.push((c, p, q));
        };
        for &(c, p, q) in &self.terms {
            push(c * p, p - 1.0, q);
            push(-c * self.a * q, p + self.a - 1.0, q - 1.0);
        }
        PowerChain { a: self.a, terms }
    }

    fn derivative_chain(&self, k: u32) -> Self {
        let mut d = self.clone();
        for _ in 0..k {
            d = d.differentiate();
        }
        d
    }
}

/// Built-in and user-supplied radial profiles.
#[derive(Debug, Clone)]
pub enum RadialProfile {
    /// exp(-t^2 / 2)
    Gaussian,
    /// exp(-t)
    Exponential,
    /// (1 - t^2)_+^delta
    BochnerRiesz { delta: f64 },
    /// (1 - t^a)_+^beta
    Example1 { a: f64, beta: f64 },
    /// (1 - (1 - t^a)_+^beta) / t^rho, defined on all of [0, inf)
    Example2 { a: f64, beta: f64, rho: f64 },
    /// sin(ln ln(e/t)) on [0, 1], 0 beyond
    Remark3,
    /// sin(ln ln(e/t)) / ln ln(e/t) on [0, 1], 0 beyond
    Belinskii,
    /// Monotone-cubic interpolant of user knots; zero beyond the last knot.
    Tabulated { interp: MonotoneCubic, source: String },
}

fn log_chain(t: f64) -> (f64, f64) {
    // u = ln(e/t), g = ln u, with the small-t clamp.
    let tc = t.max(LOG_CLAMP);
    let u = 1.0 - tc.ln();
    (u, u.ln())
}

fn sinc_like(g: f64) -> f64 {
    if g.abs() < 1e-6 {
        1.0 - g * g / 6.0
    } else {
        g.sin() / g
    }
}

impl RadialProfile {
    fn power_chain(&self) -> Option<PowerChain> {
        match *self {
            RadialProfile::BochnerRiesz { delta } => Some(PowerChain::single(2.0, 1.0, 0.0, delta)),
            RadialProfile::Example1 { a, beta } => Some(PowerChain::single(a, 1.0, 0.0, beta)),
            RadialProfile::Example2 { a, beta, rho } => Some(PowerChain {
                a,
                terms: vec![(1.0, -rho, 0.0), (-1.0, -rho, beta)],
            }),
            _ => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            RadialProfile::Gaussian => "gaussian",
            RadialProfile::Exponential => "exponential",
            RadialProfile::BochnerRiesz { .. } => "bochner_riesz",
            RadialProfile::Example1 { .. } => "example1",
            RadialProfile::Example2 { .. } => "example2",
            RadialProfile::Remark3 => "remark3",
            RadialProfile::Belinskii => "belinskii",
            RadialProfile::Tabulated { .. } => "tabulated",
        }
    }

    /// Local absolute continuity on (0, inf) is known for the analytic
    /// families; undetermined for tabulated data.
    pub fn known_locally_ac(&self) -> Option<bool> {
        match self {
            RadialProfile::Tabulated { .. } => None,
            _ => Some(true),
        }
    }

    /// Integrability-related caveats that depend on the ambient dimension.
    pub fn integrability_warnings(&self, n: u32) -> Vec<String> {
        let cap = (n as f64 - 1.0) / 2.0;
        let mut w = Vec::new();
        match *self {
            RadialProfile::Example1 { beta, .. } | RadialProfile::Example2 { beta, .. } => {
                if beta <= cap {
                    w.push(format!(
                        "beta = {beta} <= (n-1)/2 = {cap}: integrability claims void"
                    ));
                }
            }
            _ => {}
        }
        w
    }
}

impl RadialFn for RadialProfile {
    fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match *self {
            RadialProfile::Gaussian => (-0.5 * t * t).exp(),
            RadialProfile::Exponential => (-t).exp(),
            RadialProfile::BochnerRiesz { delta } => {
                if t >= 1.0 {
                    0.0
                } else {
                    (1.0 - t * t).powf(delta)
                }
            }
            RadialProfile::Example1 { a, beta } => {
                if t >= 1.0 {
                    0.0
                } else {
                    (1.0 - t.powf(a)).powf(beta)
                }
            }
            RadialProfile::Example2 { a, beta, rho } => {
                if t == 0.0 {
                    // 1 - (1-t^a)^beta ~ beta t^a, and a > rho.
                    return 0.0;
                }
                let core = if t >= 1.0 {
                    1.0
                } else {
                    1.0 - (1.0 - t.powf(a)).powf(beta)
                };
                core / t.powf(rho)
            }
            RadialProfile::Remark3 => {
                if t > 1.0 {
                    0.0
                } else {
                    let (_, g) = log_chain(t);
                    g.sin()
                }
            }
            RadialProfile::Belinskii => {
                if t > 1.0 {
                    0.0
                } else {
                    let (_, g) = log_chain(t);
                    sinc_like(g)
                }
            }
            RadialProfile::Tabulated { ref interp, .. } => {
                if t > interp.hi() {
                    0.0
                } else {
                    interp.eval(t)
                }
            }
        }
    }

    fn derivative(&self, k: u32, t: f64) -> f64 {
        match *self {
            RadialProfile::Gaussian => {
                // d^k/dt^k exp(-t^2/2) = (-1)^k He_k(t) exp(-t^2/2).
                let mut hkm1 = 1.0f64;
                let mut hk = t;
                if k == 0 {
                    return self.eval(t);
                }
                for j in 1..k {
                    let next = t * hk - j as f64 * hkm1;
                    hkm1 = hk;
                    hk = next;
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * hk * (-0.5 * t * t).exp()
            }
            RadialProfile::Exponential => {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * (-t).exp()
            }
            RadialProfile::BochnerRiesz { .. }
            | RadialProfile::Example1 { .. }
            | RadialProfile::Example2 { .. } => {
                if let Some(end) = self.support_end() {
                    if t >= end {
                        return 0.0;
                    }
                }
                if matches!(self, RadialProfile::Example2 { .. }) && t >= 1.0 {
                    // Beyond the unit ball only the power tail t^(-rho) remains.
                    let RadialProfile::Example2 { rho, .. } = *self else {
                        unreachable!()
                    };
                    let mut c = 1.0;
                    for j in 0..k {
                        c *= -rho - j as f64;
                    }
                    return c * t.powf(-rho - k as f64);
                }
                self.power_chain()
                    .expect("algebraic family")
                    .derivative_chain(k)
                    .eval(t)
            }
            RadialProfile::Remark3 => {
                if t > 1.0 {
                    return 0.0;
                }
                if k == 1 {
                    let tc = t.max(LOG_CLAMP);
                    let (u, g) = log_chain(t);
                    -g.cos() / (tc * u)
                } else {
                    finite_difference(&|s| self.eval(s), k, t, self.support_end())
                }
            }
            RadialProfile::Belinskii => {
                if t > 1.0 {
                    return 0.0;
                }
                if k == 1 {
                    let tc = t.max(LOG_CLAMP);
                    let (u, g) = log_chain(t);
                    // d/dg [sin g / g] = (g cos g - sin g)/g^2, times
                    // dg/dt = -1/(t u).
                    let dsinc = if g.abs() < 1e-6 {
                        -g / 3.0
                    } else {
                        (g * g.cos() - g.sin()) / (g * g)
                    };
                    -dsinc / (tc * u)
                } else {
                    finite_difference(&|s| self.eval(s), k, t, self.support_end())
                }
            }
            RadialProfile::Tabulated { .. } => {
                finite_difference(&|s| self.eval(s), k, t, self.support_end())
            }
        }
    }

    fn support_end(&self) -> Option<f64> {
        match *self {
            RadialProfile::Gaussian | RadialProfile::Exponential | RadialProfile::Example2 { .. } => {
                None
            }
            RadialProfile::BochnerRiesz { .. }
            | RadialProfile::Example1 { .. }
            | RadialProfile::Remark3
            | RadialProfile::Belinskii => Some(1.0),
            RadialProfile::Tabulated { ref interp, .. } => Some(interp.hi()),
        }
    }

    fn has_closed_derivatives(&self) -> bool {
        matches!(
            self,
            RadialProfile::Gaussian
                | RadialProfile::Exponential
                | RadialProfile::BochnerRiesz { .. }
                | RadialProfile::Example1 { .. }
                | RadialProfile::Example2 { .. }
        )
    }

    fn end_exponent(&self, k: u32) -> Option<f64> {
        match *self {
            RadialProfile::BochnerRiesz { delta } => Some(delta - k as f64),
            RadialProfile::Example1 { beta, .. } => Some(beta - k as f64),
            _ => None,
        }
    }
}

/// Wraps a plain evaluator (plus optional support end) as a [`RadialFn`]
/// with finite-difference derivatives.
pub struct FnRadial<F: Fn(f64) -> f64 + Sync> {
    pub f: F,
    pub support_end: Option<f64>,
}

impl<F: Fn(f64) -> f64 + Sync> RadialFn for FnRadial<F> {
    fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    fn support_end(&self) -> Option<f64> {
        self.support_end
    }
}

/// Parses the line- or space-separated `key=value` profile grammar.
///
/// Keys: `family` (required), `alpha`, `beta`, `r`, `delta`, `file`.
pub fn parse_profile(spec: &str) -> Result<RadialProfile> {
    let mut family = None;
    let mut params: std::collections::BTreeMap<&str, String> = Default::default();
    for token in spec.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{token}'")))?;
        match key {
            "family" => family = Some(value.to_string()),
            "alpha" | "beta" | "r" | "delta" | "file" => {
                params.insert(
                    match key {
                        "alpha" => "alpha",
                        "beta" => "beta",
                        "r" => "r",
                        "delta" => "delta",
                        _ => "file",
                    },
                    value.to_string(),
                );
            }
            _ => return Err(Error::Parse(format!("unknown key '{key}'"))),
        }
    }
    let family = family.ok_or_else(|| Error::Parse("missing 'family=' key".into()))?;
    let num = |key: &str| -> Result<f64> {
        params
            .get(key)
            .ok_or_else(|| Error::Parse(format!("family '{family}' requires '{key}='")))?
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad numeric value for '{key}': {e}")))
    };
    match family.as_str() {
        "gaussian" => Ok(RadialProfile::Gaussian),
        "exponential" => Ok(RadialProfile::Exponential),
        "bochner_riesz" => {
            let delta = num("delta")?;
            if !(delta > 0.0) {
                return Err(Error::Parse(format!("need delta > 0, got {delta}")));
            }
            Ok(RadialProfile::BochnerRiesz { delta })
        }
        "example1" => {
            let a = num("alpha")?;
            let beta = num("beta")?;
            if !(a > 0.0) {
                return Err(Error::Parse(format!("need alpha > 0, got {a}")));
            }
            if !(beta > 0.0) {
                return Err(Error::Parse(format!("need beta > 0, got {beta}")));
            }
            Ok(RadialProfile::Example1 { a, beta })
        }
        "example2" => {
            let a = num("alpha")?;
            let beta = num("beta")?;
            let rho = num("r")?;
            if !(a > rho) {
                return Err(Error::Parse(format!(
                    "example2 requires alpha > r, got alpha = {a}, r = {rho}"
                )));
            }
            if !(beta > 0.0) || !(rho > 0.0) {
                return Err(Error::Parse("need beta > 0 and r > 0".into()));
            }
            Ok(RadialProfile::Example2 { a, beta, rho })
        }
        "remark3" => Ok(RadialProfile::Remark3),
        "belinskii" => Ok(RadialProfile::Belinskii),
        "tabulated" => {
            let path = params
                .get("file")
                .ok_or_else(|| Error::Parse("tabulated requires 'file='".into()))?;
            let body = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read '{path}': {e}")))?;
            parse_tabulated(&body, path)
        }
        other => Err(Error::Parse(format!("unknown family '{other}'"))),
    }
}

fn parse_tabulated(body: &str, source: &str) -> Result<RadialProfile> {
    let mut lines = body.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty tabulated file".into()))?;
    if header.trim() != "t,f0" {
        return Err(Error::Parse(format!(
            "tabulated header must be 't,f0', got '{header}'"
        )));
    }
    let mut knots = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected 't,f0'", i + 2)))?;
        let t: f64 = a
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", i + 2)))?;
        let v: f64 = b
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", i + 2)))?;
        knots.push((t, v));
    }
    for w in knots.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::Parse("tabulated t column must strictly increase".into()));
        }
    }
    let interp = MonotoneCubic::new(&knots)?;
    Ok(RadialProfile::Tabulated {
        interp,
        source: source.to_string(),
    })
}

/// Renders a profile back into the grammar; `parse_profile(render(p))`
/// reproduces `p` for every built-in family.
pub fn render_profile(p: &RadialProfile) -> String {
    match *p {
        RadialProfile::Gaussian => "family=gaussian".into(),
        RadialProfile::Exponential => "family=exponential".into(),
        RadialProfile::BochnerRiesz { delta } => format!("family=bochner_riesz delta={delta}"),
        RadialProfile::Example1 { a, beta } => format!("family=example1 alpha={a} beta={beta}"),
        RadialProfile::Example2 { a, beta, rho } => {
            format!("family=example2 alpha={a} beta={beta} r={rho}")
        }
        RadialProfile::Remark3 => "family=remark3".into(),
        RadialProfile::Belinskii => "family=belinskii".into(),
        RadialProfile::Tabulated { ref source, .. } => format!("family=tabulated file={source}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn eval_basics() {
        assert_eq!(RadialProfile::Gaussian.eval(0.0), 1.0);
        let e1 = RadialProfile::Example1 { a: 2.0, beta: 2.0 };
        assert_eq!(e1.eval(1.0), 0.0);
        assert_eq!(e1.eval(2.0), 0.0);
        // sin(ln ln e) = sin(0) = 0 at the support end.
        assert_abs_diff_eq!(RadialProfile::Remark3.eval(1.0), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_derivative_chain() {
        let g = RadialProfile::Gaussian;
        for &t in &[0.3, 1.0, 2.5] {
            assert_relative_eq!(
                g.derivative(1, t),
                -t * (-0.5 * t * t).exp(),
                max_relative = 1e-12
            );
            assert_relative_eq!(
                g.derivative(2, t),
                (t * t - 1.0) * (-0.5 * t * t).exp(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn remark3_derivative_formula() {
        let p = RadialProfile::Remark3;
        for &t in &[0.05, 0.3, 0.8] {
            let fd = finite_difference(&|s| p.eval(s), 1, t, Some(1.0));
            assert_abs_diff_eq!(p.derivative(1, t), fd, epsilon = 1e-6 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn closed_derivatives_match_finite_differences() {
        let profiles: Vec<RadialProfile> = vec![
            RadialProfile::Gaussian,
            RadialProfile::Exponential,
            RadialProfile::BochnerRiesz { delta: 2.0 },
            RadialProfile::Example1 { a: 2.0, beta: 3.0 },
            RadialProfile::Example2 {
                a: 2.0,
                beta: 3.0,
                rho: 1.0,
            },
        ];
        for p in &profiles {
            for k in 1..=3u32 {
                for &t in &[0.2, 0.5, 0.73] {
                    let closed = p.derivative(k, t);
                    let fd = finite_difference(&|s| p.eval(s), k, t, p.support_end());
                    assert_abs_diff_eq!(closed, fd, epsilon = 1e-5 * (1.0 + closed.abs()));
                }
            }
        }
    }

    #[test]
    fn example1_derivative_at_half() {
        // (1 - t^2)^2: f' = -4t(1 - t^2), f'(1/2) = -1.5.
        let p = RadialProfile::Example1 { a: 2.0, beta: 2.0 };
        assert_relative_eq!(p.derivative(1, 0.5), -1.5, max_relative = 1e-13);
    }

    #[test]
    fn parse_and_render_round_trip() {
        let specs = [
            "family=gaussian",
            "family=exponential",
            "family=bochner_riesz delta=2",
            "family=example1 alpha=2 beta=3",
            "family=example2 alpha=2 beta=3 r=0.5",
            "family=remark3",
            "family=belinskii",
        ];
        for s in specs {
            let p = parse_profile(s).unwrap();
            let r = render_profile(&p);
            let p2 = parse_profile(&r).unwrap();
            assert_eq!(render_profile(&p2), r);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(parse_profile("family=unknown").is_err());
        assert!(parse_profile("alpha=2").is_err());
        assert!(parse_profile("family=example1 alpha=2").is_err());
        assert!(parse_profile("family=example2 alpha=1 beta=3 r=2").is_err());
        assert!(parse_profile("family=example1 alpha=-1 beta=2").is_err());
    }

    #[test]
    fn tabulated_round_trip_through_file() {
        let dir = std::env::temp_dir().join("radialft-test-profiles");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("prof.csv");
        std::fs::write(&path, "t,f0\n0.0,1.0\n0.5,0.8\n1.0,0.5\n2.0,0.0\n").unwrap();
        let spec = format!("family=tabulated file={}", path.display());
        let p = parse_profile(&spec).unwrap();
        assert_relative_eq!(p.eval(0.5), 0.8, max_relative = 1e-14);
        assert_eq!(p.eval(2.5), 0.0);
        assert_eq!(p.support_end(), Some(2.0));
    }

    #[test]
    fn integrability_warning_for_small_beta() {
        let p = RadialProfile::Example1 { a: 2.0, beta: 0.5 };
        assert!(!p.integrability_warnings(3).is_empty());
        let p = RadialProfile::Example1 { a: 2.0, beta: 3.0 };
        assert!(p.integrability_warnings(3).is_empty());
    }
}
