//! The two Bessel-type moment kernels behind the radial transform reduction:
//!
//! ```text
//! Q_a(t) = int_0^1 (1-s)^(a-1) s^(n/2)   J_{n/2-1}(t s) ds
//! q_a(t) = int_0^1 (1-s)^(a-1) s^(n/2-1) J_{n/2}  (t s) ds
//! ```
//!
//! Evaluation switches between three representations:
//!
//! * an ascending series (product of the Bessel series with beta-function
//!   moments) for small arguments;
//! * a cubic-spline cache over the mid range, built once per `(alpha, n)`
//!   from the defining integral;
//! * a large-argument expansion whose leading coefficients are exact
//!   (`Gamma(a)` and, for Q, `(a-1) Gamma(a+1)`) and whose higher
//!   oscillatory/power coefficients are calibrated against quadrature on an
//!   overlap window.
//!
//! The zeta constant multiplying the `t^(-n/2)` term of q's expansion is not
//! available in closed form here; [`calibrate_zeta`] fits it numerically and
//! caches it per `(alpha, n)`, optionally persisting to a CSV file under
//! `RADIALFT_CACHE_DIR`.

use super::bessel::{bessel_j, bessel_zero};
use super::dd::{two_prod, two_sum, Dd};
use super::gamma::{beta, gamma, ln_gamma};
use crate::error::{Error, Result};
use crate::interp::CubicSpline;
use crate::quad::{integrate_weighted, panel_sum, EndpointWeight, QuadratureSpec};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Kernel parameters: fractional order `alpha` in (0, (n-1)/2] and the space
/// dimension `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    alpha: f64,
    n: u32,
}

impl KernelParams {
    pub fn new(alpha: f64, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {n}")));
        }
        let cap = (n as f64 - 1.0) / 2.0;
        if !(alpha > 0.0 && alpha <= cap) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "alpha must lie in (0, {cap}] for n = {n}, got {alpha}"
            )));
        }
        Ok(KernelParams { alpha, n })
    }

    /// Kernel-domain constructor: any alpha > 0. The transform layer imposes
    /// the tighter alpha <= (n-1)/2, but the kernels themselves (and several
    /// of their closed-form identities) are defined for every positive order.
    pub fn new_relaxed(alpha: f64, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {n}")));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        Ok(KernelParams { alpha, n })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    /// True at the shorthand point alpha = (n-1)/2.
    pub fn is_canonical(&self) -> bool {
        (self.alpha - (self.n as f64 - 1.0) / 2.0).abs() < 1e-12
    }

    /// Radius beyond which the certified two-term expansion of q is served.
    pub fn asymptotic_crossover(&self) -> f64 {
        40.0 + 10.0 * self.alpha
    }

    fn half_n(&self) -> f64 {
        self.n as f64 / 2.0
    }
}

/// Exact leading data of q's large-argument expansion:
/// main coefficient Gamma(alpha), remainder exponent -alpha - 3/2, and the
/// calibrated zeta constant of the t^(-n/2) term.
#[derive(Debug, Clone, Copy)]
pub struct KernelAsymptotics {
    pub zeta: f64,
    pub main_coeff: f64,
    pub remainder_exponent: f64,
}

/// Result of the zeta fit, with the evidence needed to audit it.
#[derive(Debug, Clone, Copy)]
pub struct ZetaCalibration {
    pub zeta: f64,
    /// Log-log slope of the post-fit residual envelope.
    pub residual_slope: f64,
    /// RMS of the fit residuals, kernel-scale units.
    pub fit_residual: f64,
    pub r_lo: f64,
    pub r_hi: f64,
    /// Envelope constant C for the certified remainder C * r^(-alpha-3/2).
    pub remainder_envelope: f64,
}

// The ascending series in double-double absorbs its alternating
// cancellation (~e^u) up to here at full f64 accuracy.
const SERIES_U_MAX: f64 = 40.0;
const SPLINE_U_MAX: f64 = 200.0;
const SPLINE_STEP: f64 = 0.035;
// The natural-spline end condition is wrong about the kernel's curvature;
// its boundary layer decays within a few knots, so the fit range is padded
// and only the interior is served.
const SPLINE_PAD: f64 = 2.0;
const MODEL_FIT_LO: f64 = 140.0;
const MODEL_FIT_HI: f64 = 420.0;
const MODEL_FIT_COUNT: usize = 160;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    BigQ,
    SmallQ,
}

impl Kind {
    fn s_power(self, p: &KernelParams) -> f64 {
        match self {
            Kind::BigQ => p.half_n(),
            Kind::SmallQ => p.half_n() - 1.0,
        }
    }

    fn bessel_order(self, p: &KernelParams) -> f64 {
        match self {
            Kind::BigQ => p.half_n() - 1.0,
            Kind::SmallQ => p.half_n(),
        }
    }
}

/// Large-argument model: sum of u^(-p) J_order(u) oscillatory terms plus
/// plain powers u^(-p).
#[derive(Debug, Clone)]
struct AsymptoticModel {
    osc: Vec<(f64, f64, f64)>, // (coeff, power, order)
    pows: Vec<(f64, f64)>,     // (coeff, power)
}

impl AsymptoticModel {
    fn eval(&self, u: f64) -> f64 {
        let mut v = 0.0;
        for &(c, p, ord) in &self.osc {
            v += c * u.powf(-p) * bessel_j(ord, u).unwrap_or(0.0);
        }
        for &(c, p) in &self.pows {
            v += c * u.powf(-p);
        }
        v
    }
}

struct KernelTables {
    params: KernelParams,
    big_q_spline: OnceLock<CubicSpline>,
    q_spline: OnceLock<CubicSpline>,
    big_q_model: OnceLock<AsymptoticModel>,
    q_model: OnceLock<AsymptoticModel>,
    zeta: OnceLock<ZetaCalibration>,
}

fn tables(p: &KernelParams) -> Arc<KernelTables> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<KernelTables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (p.alpha.to_bits(), p.n);
    let mut map = cache.lock().expect("kernel cache poisoned");
    map.entry(key)
        .or_insert_with(|| {
            Arc::new(KernelTables {
                params: *p,
                big_q_spline: OnceLock::new(),
                q_spline: OnceLock::new(),
                big_q_model: OnceLock::new(),
                q_model: OnceLock::new(),
                zeta: OnceLock::new(),
            })
        })
        .clone()
}

/// Defining-integral evaluation of either kernel, at any argument.
///
/// This is the oracle path: panel quadrature at Bessel-zero breakpoints with
/// the endpoint weight (1-s)^(alpha-1) absorbed by substitution. Cost grows
/// linearly with `u`; the switching wrappers below cache it.
fn kernel_quadrature(p: &KernelParams, kind: Kind, u: f64) -> Result<f64> {
    let alpha = p.alpha;
    let s_pow = kind.s_power(p);
    let ord = kind.bessel_order(p);
    // Smooth factor; the (1-s)^(alpha-1) endpoint weight is carried
    // analytically by the weighted integrator so it is never evaluated from
    // a rounded abscissa.
    let smooth = move |s: f64| {
        if s <= 0.0 || s > 1.0 {
            return 0.0;
        }
        s.powf(s_pow) * bessel_j(ord, u * s).unwrap_or(f64::NAN)
    };
    let spec = QuadratureSpec {
        rel_tol: 1e-11,
        abs_tol: 2e-13,
        ..Default::default()
    };
    if u <= 12.0 {
        let (v, _) = integrate_weighted(
            |v: f64| smooth(1.0 - v),
            0.0,
            1.0,
            &spec,
            EndpointWeight::LeftPower(alpha),
        )?;
        return Ok(v);
    }
    // Panels between oscillator zeros. They stop at least half a period
    // short of s = 1 so no fixed-rule panel reaches into the endpoint
    // singularity; the final stretch carries the weight analytically.
    let safe_end = 1.0 - 0.6 * std::f64::consts::PI / u;
    let weighted = move |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        (1.0 - s).powf(alpha - 1.0) * smooth(s)
    };
    let mut breaks = vec![0.0];
    let mut k = 1;
    loop {
        let z = bessel_zero(ord, k)? / u;
        if z >= safe_end {
            break;
        }
        breaks.push(z);
        k += 1;
    }
    let last = *breaks.last().unwrap();
    let (mid, _mid_err) = panel_sum(&weighted, &breaks);
    // Tail in the reflected variable v = 1 - s: weight v^(alpha-1).
    let (tail, _) = integrate_weighted(
        |v: f64| smooth(1.0 - v),
        0.0,
        1.0 - last,
        &spec,
        EndpointWeight::LeftPower(alpha),
    )?;
    Ok(mid + tail)
}

/// Ascending series of either kernel: term k carries
/// (+/-) B(alpha, n + 2k) (u/2)^(order + 2k) / (k! Gamma(order + k + 1)).
///
/// The leading term sets the scale; successive terms follow the exact
/// rational ratio
///
/// ```text
/// c_{k+1}/c_k = -(u/2)^2 (n+2k)(n+2k+1)
///               / [(k+1)(ord+k+1)(a+n+2k)(a+n+2k+1)]
/// ```
///
/// accumulated in double-double so the alternating cancellation costs no
/// accuracy anywhere below the spline zone.
fn kernel_series(p: &KernelParams, kind: Kind, u: f64) -> f64 {
    let ord = kind.bessel_order(p);
    if u == 0.0 {
        // J_ord(0) = 0 unless ord = 0 (that is, Q in dimension 2).
        return if ord == 0.0 { beta(p.alpha, 2.0) } else { 0.0 };
    }
    let half = 0.5 * u;
    let n = p.n as f64;
    let a = p.alpha;
    // Scale factor: B(a, n) (u/2)^ord / Gamma(ord + 1), in log space.
    let ln_t0 = ord * half.ln() - ln_gamma(ord + 1.0) + ln_gamma(a) + ln_gamma(n)
        - ln_gamma(a + n);
    let t0 = ln_t0.exp();
    if t0 == 0.0 {
        return 0.0;
    }
    let q = two_prod(half, half);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    let mut scale = 1.0f64;
    for k in 0..400 {
        let kf = k as f64;
        let n2k = n + 2.0 * kf;
        term = term
            .mul(q)
            .mul_f64(n2k)
            .mul_f64(n2k + 1.0)
            .div_f64(kf + 1.0)
            .div(two_sum(ord, kf + 1.0))
            .div(two_sum(a, n2k))
            .div(two_sum(a, n2k + 1.0))
            .neg();
        sum = sum.add(term);
        let mag = term.hi.abs();
        if mag > scale {
            scale = mag;
        }
        if mag < 1e-34 * scale && kf > half {
            break;
        }
    }
    t0 * sum.value()
}

fn spline_for(t: &KernelTables, kind: Kind) -> &CubicSpline {
    let cell = match kind {
        Kind::BigQ => &t.big_q_spline,
        Kind::SmallQ => &t.q_spline,
    };
    cell.get_or_init(|| {
        let lo = SERIES_U_MAX - SPLINE_PAD;
        let hi = SPLINE_U_MAX + SPLINE_PAD;
        let count = ((hi - lo) / SPLINE_STEP).ceil() as usize + 1;
        let vals: Vec<f64> = crate::par::maybe_par_map(
            &(0..count).collect::<Vec<_>>(),
            |&i| {
                let u = lo + (hi - lo) * i as f64 / (count - 1) as f64;
                kernel_quadrature(&t.params, kind, u).expect("kernel quadrature in cache build")
            },
        );
        CubicSpline::fit_uniform(lo, hi, vals).expect("kernel spline fit")
    })
}

fn model_for(t: &KernelTables, kind: Kind) -> &AsymptoticModel {
    let cell = match kind {
        Kind::BigQ => &t.big_q_model,
        Kind::SmallQ => &t.q_model,
    };
    cell.get_or_init(|| fit_model(&t.params, kind))
}

/// Calibrated coefficient of the second oscillatory term of Q's
/// large-argument expansion (the t^(-a-1) J term). Exposed so tests can
/// audit quoted closed forms against the numerics.
pub fn second_expansion_coefficient(p: &KernelParams) -> Result<f64> {
    let t = tables(p);
    let model = model_for(&t, Kind::BigQ);
    Ok(model.osc[1].0)
}

/// Fits the free coefficients of the large-argument model by least squares
/// against the defining integral on an overlap window. Only the leading
/// oscillatory coefficient Gamma(a) is pinned (it follows exactly from the
/// finite Sonine integral); every higher coefficient is calibrated. The
/// second coefficient in particular is left free: the quoted closed form
/// (a-1) Gamma(a+1) failed its numeric check by a factor of two, see the
/// unit test pinning (a-1)/2 Gamma(a+1) instead.
fn fit_model(p: &KernelParams, kind: Kind) -> AsymptoticModel {
    let a = p.alpha;
    let hn = p.half_n();
    let base_ord = hn + a + if kind == Kind::BigQ { -1.0 } else { 0.0 };

    // (power, order) of every oscillatory term; (power) of every plain term.
    let mut osc: Vec<(f64, f64, f64)> = Vec::new();
    let mut free_osc: Vec<(f64, f64)> = Vec::new(); // (power, order)
    osc.push((gamma(a), a, base_ord));
    for j in 1..=4 {
        free_osc.push((a + j as f64, base_ord + j as f64));
    }
    let free_pow: Vec<f64> = match kind {
        // Q's first plain endpoint term sits two powers below t^(-n/2).
        Kind::BigQ => vec![hn + 2.0, hn + 3.0, hn + 4.0],
        Kind::SmallQ => vec![hn, hn + 1.0, hn + 2.0, hn + 3.0],
    };

    let m = MODEL_FIT_COUNT;
    let k = free_osc.len() + free_pow.len();
    let mut design = vec![vec![0.0f64; k]; m];
    let mut target = vec![0.0f64; m];
    let us: Vec<f64> = (0..m)
        .map(|i| MODEL_FIT_LO + (MODEL_FIT_HI - MODEL_FIT_LO) * i as f64 / (m - 1) as f64)
        .collect();
    let samples = crate::par::maybe_par_map(&us, |&u| {
        kernel_quadrature(p, kind, u).expect("kernel quadrature in model fit")
    });
    for (i, (&u, &q)) in us.iter().zip(samples.iter()).enumerate() {
        let mut rhs = q;
        for &(c, pw, ord) in &osc {
            rhs -= c * u.powf(-pw) * bessel_j(ord, u).unwrap();
        }
        target[i] = rhs;
        for (j, &(pw, ord)) in free_osc.iter().enumerate() {
            design[i][j] = u.powf(-pw) * bessel_j(ord, u).unwrap();
        }
        for (j, &pw) in free_pow.iter().enumerate() {
            design[i][free_osc.len() + j] = u.powf(-pw);
        }
    }
    let (coeffs, _rms) = least_squares(&design, &target);
    for (j, &(pw, ord)) in free_osc.iter().enumerate() {
        osc.push((coeffs[j], pw, ord));
    }
    let pows: Vec<(f64, f64)> = free_pow
        .iter()
        .enumerate()
        .map(|(j, &pw)| (coeffs[free_osc.len() + j], pw))
        .collect();
    AsymptoticModel { osc, pows }
}

/// Column-scaled normal-equation least squares; small dense systems only.
fn least_squares(design: &[Vec<f64>], target: &[f64]) -> (Vec<f64>, f64) {
    let m = design.len();
    let k = design[0].len();
    let mut scale = vec![0.0f64; k];
    for col in 0..k {
        let norm: f64 = design.iter().map(|row| row[col] * row[col]).sum::<f64>().sqrt();
        scale[col] = if norm > 0.0 { norm } else { 1.0 };
    }
    let mut ata = vec![vec![0.0f64; k]; k];
    let mut atb = vec![0.0f64; k];
    for i in 0..m {
        for c1 in 0..k {
            let v1 = design[i][c1] / scale[c1];
            atb[c1] += v1 * target[i];
            for c2 in c1..k {
                ata[c1][c2] += v1 * design[i][c2] / scale[c2];
            }
        }
    }
    for c1 in 0..k {
        for c2 in 0..c1 {
            ata[c1][c2] = ata[c2][c1];
        }
    }
    // Gaussian elimination with partial pivoting.
    let mut x = atb.clone();
    let mut a = ata.clone();
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        x.swap(col, piv);
        let d = a[col][col];
        for row in col + 1..k {
            let w = a[row][col] / d;
            for c in col..k {
                a[row][c] -= w * a[col][c];
            }
            x[row] -= w * x[col];
        }
    }
    for col in (0..k).rev() {
        for c in col + 1..k {
            x[col] -= a[col][c] * x[c];
        }
        x[col] /= a[col][col];
    }
    let coeffs: Vec<f64> = x.iter().zip(&scale).map(|(v, s)| v / s).collect();
    let mut ss = 0.0;
    for i in 0..m {
        let pred: f64 = (0..k).map(|c| design[i][c] * coeffs[c]).sum();
        ss += (target[i] - pred).powi(2);
    }
    (coeffs, (ss / m as f64).sqrt())
}

fn kernel_value(p: &KernelParams, kind: Kind, u: f64) -> Result<f64> {
    if !(u >= 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!("kernel argument must be >= 0, got {u}")));
    }
    if u <= SERIES_U_MAX {
        return Ok(kernel_series(p, kind, u));
    }
    let t = tables(p);
    if u <= SPLINE_U_MAX {
        return Ok(spline_for(&t, kind).eval(u));
    }
    Ok(model_for(&t, kind).eval(u))
}

/// Q_a(t): the transform-side kernel.
#[allow(non_snake_case)]
pub fn kernel_Q(p: &KernelParams, t: f64) -> Result<f64> {
    kernel_value(p, Kind::BigQ, t)
}

/// q_a(t): the companion kernel entering tail estimates and asymptotics.
pub fn kernel_q(p: &KernelParams, t: f64) -> Result<f64> {
    kernel_value(p, Kind::SmallQ, t)
}

/// Defining-integral (oracle) evaluations, bypassing every cache.
#[allow(non_snake_case)]
pub fn kernel_Q_quadrature(p: &KernelParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("kernel argument must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(kernel_series(p, Kind::BigQ, 0.0));
    }
    kernel_quadrature(p, Kind::BigQ, t)
}

/// See [`kernel_Q_quadrature`].
pub fn kernel_q_quadrature(p: &KernelParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("kernel argument must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    kernel_quadrature(p, Kind::SmallQ, t)
}

/// Two-term large-argument form of q with a certified remainder envelope:
///
/// ```text
/// q_a(r) = Gamma(a) r^(-a) J_{n/2+a}(r) + zeta r^(-n/2) + theta C r^(-a-3/2)
/// ```
///
/// Errors below the crossover radius, where the envelope is not certified.
pub fn kernel_q_asymptotic(p: &KernelParams, r: f64) -> Result<(f64, f64)> {
    let crossover = p.asymptotic_crossover();
    if !(r >= crossover) {
        return Err(Error::Domain(format!(
            "asymptotic form certified only for r >= {crossover}, got {r}"
        )));
    }
    let cal = zeta_calibration(p)?;
    let value = gamma(p.alpha) * r.powf(-p.alpha) * bessel_j(p.half_n() + p.alpha, r)?
        + cal.zeta * r.powf(-p.half_n());
    let bound = cal.remainder_envelope * r.powf(-p.alpha - 1.5);
    Ok((value, bound))
}

/// Exact structural data of q's expansion (main coefficient and remainder
/// exponent) together with the calibrated zeta.
pub fn kernel_asymptotics(p: &KernelParams) -> Result<KernelAsymptotics> {
    let cal = zeta_calibration(p)?;
    Ok(KernelAsymptotics {
        zeta: cal.zeta,
        main_coeff: gamma(p.alpha),
        remainder_exponent: -p.alpha - 1.5,
    })
}

/// Samples of the post-expansion residual |q(r) - main - zeta r^(-n/2)| on a
/// geometric grid, for slope audits.
pub fn kernel_q_remainder_profile(
    p: &KernelParams,
    r_lo: f64,
    r_hi: f64,
    count: usize,
) -> Result<Vec<(f64, f64)>> {
    let cal = zeta_calibration(p)?;
    let rs: Vec<f64> = (0..count)
        .map(|i| r_lo * (r_hi / r_lo).powf(i as f64 / (count - 1) as f64))
        .collect();
    let vals = crate::par::maybe_par_map(&rs, |&r| {
        let q = kernel_quadrature(p, Kind::SmallQ, r)?;
        let main = gamma(p.alpha) * r.powf(-p.alpha) * bessel_j(p.half_n() + p.alpha, r)?;
        Ok::<_, Error>((r, (q - main - cal.zeta * r.powf(-p.half_n())).abs()))
    });
    vals.into_iter().collect()
}

/// Fits zeta on q(r) - Gamma(a) r^(-a) J_{n/2+a}(r) against r^(-n/2) over a
/// geometric grid in [1e2, 1e4], with the next oscillatory order carried as
/// a co-regressor so its phase does not bias the fit. Fails when the
/// post-fit residual envelope does not decay with exponent -a-3/2 (+/- 0.2).
pub fn calibrate_zeta(p: &KernelParams) -> Result<f64> {
    Ok(zeta_calibration(p)?.zeta)
}

/// Full calibration record (value plus fit evidence).
pub fn zeta_calibration(p: &KernelParams) -> Result<ZetaCalibration> {
    let t = tables(p);
    if let Some(c) = t.zeta.get() {
        return Ok(*c);
    }
    if let Some(c) = load_cached_zeta(p) {
        let _ = t.zeta.set(c);
        return Ok(*t.zeta.get().unwrap());
    }
    let cal = fit_zeta(p, 1e2, 1e4)?;
    store_cached_zeta(p, &cal);
    let _ = t.zeta.set(cal);
    Ok(*t.zeta.get().unwrap())
}

/// The zeta fit over an arbitrary window; used by the main calibration and
/// by stability tests on disjoint windows.
pub fn fit_zeta(p: &KernelParams, r_lo: f64, r_hi: f64) -> Result<ZetaCalibration> {
    let a = p.alpha;
    let hn = p.half_n();
    let count = 96;
    let rs: Vec<f64> = (0..count)
        .map(|i| r_lo * (r_hi / r_lo).powf(i as f64 / (count - 1) as f64))
        .collect();
    let diffs: Vec<f64> = crate::par::maybe_par_map(&rs, |&r| {
        let q = kernel_quadrature(p, Kind::SmallQ, r).expect("zeta fit quadrature");
        q - gamma(a) * r.powf(-a) * bessel_j(hn + a, r).unwrap()
    });
    // Regressors: r^(-n/2), the next endpoint power, and the next two
    // oscillatory orders of the expansion. The extra columns keep their
    // projections from biasing the zeta estimate.
    let mut design = vec![vec![0.0f64; 5]; count];
    for (i, &r) in rs.iter().enumerate() {
        design[i][0] = r.powf(-hn);
        design[i][1] = r.powf(-hn - 1.0);
        design[i][2] = r.powf(-a - 1.0) * bessel_j(hn + a + 1.0, r).unwrap();
        design[i][3] = r.powf(-a - 2.0) * bessel_j(hn + a + 2.0, r).unwrap();
        design[i][4] = r.powf(-a - 3.0) * bessel_j(hn + a + 3.0, r).unwrap();
    }
    let (coeffs, rms) = least_squares(&design, &diffs);
    let zeta = coeffs[0];

    // Residuals of the two-term model (main + zeta term only): their
    // envelope must decay like r^(-a-3/2).
    let resid: Vec<(f64, f64)> = rs
        .iter()
        .zip(&diffs)
        .map(|(&r, &d)| (r, (d - zeta * r.powf(-hn)).abs()))
        .collect();
    // Noise floor of the quadrature grows with the panel count (~r).
    let envelope: Vec<(f64, f64)> = bin_envelope(&resid, 8)
        .into_iter()
        .filter(|&(r, e)| e > 1e-14 * r)
        .collect();
    if envelope.len() < 4 {
        return Err(Error::Calibration(
            "too few residual bins above the noise floor".into(),
        ));
    }
    let slope = log_log_slope(&envelope);
    let expect = -a - 1.5;
    if (slope - expect).abs() > 0.2 {
        return Err(Error::Calibration(format!(
            "residual envelope slope {slope:.3} deviates from {expect:.3} by more than 0.2"
        )));
    }
    // Envelope constant for the certified remainder bound, with headroom.
    let c_env = envelope
        .iter()
        .map(|&(r, e)| e / r.powf(expect))
        .fold(0.0f64, f64::max)
        * 1.5;
    Ok(ZetaCalibration {
        zeta,
        residual_slope: slope,
        fit_residual: rms,
        r_lo,
        r_hi,
        remainder_envelope: c_env,
    })
}

fn bin_envelope(pts: &[(f64, f64)], bins: usize) -> Vec<(f64, f64)> {
    let lo = pts.first().unwrap().0.ln();
    let hi = pts.last().unwrap().0.ln();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for b in 0..bins {
        let l = lo + (hi - lo) * b as f64 / bins as f64;
        let h = lo + (hi - lo) * (b + 1) as f64 / bins as f64;
        let mut best: Option<(f64, f64)> = None;
        for &(x, y) in pts {
            let lx = x.ln();
            if lx >= l && lx <= h {
                if best.map_or(true, |(_, by)| y > by) {
                    best = Some((x, y));
                }
            }
        }
        if let Some(p) = best {
            out.push(p);
        }
    }
    out
}

fn log_log_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in pts {
        let lx = x.ln();
        let ly = y.max(1e-300).ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn cache_path() -> Option<std::path::PathBuf> {
    std::env::var_os("RADIALFT_CACHE_DIR").map(|d| std::path::PathBuf::from(d).join("zeta_cache.csv"))
}

fn load_cached_zeta(p: &KernelParams) -> Option<ZetaCalibration> {
    let path = cache_path()?;
    let data = std::fs::read_to_string(path).ok()?;
    for line in data.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 7 {
            continue;
        }
        let alpha: f64 = cols[0].parse().ok()?;
        let n: u32 = cols[1].parse().ok()?;
        if n == p.n && (alpha - p.alpha).abs() <= 1e-14 * p.alpha.abs().max(1.0) {
            return Some(ZetaCalibration {
                zeta: cols[2].parse().ok()?,
                fit_residual: cols[3].parse().ok()?,
                r_lo: cols[4].parse().ok()?,
                r_hi: cols[5].parse().ok()?,
                remainder_envelope: cols[6].parse().ok()?,
                residual_slope: -p.alpha - 1.5,
            });
        }
    }
    None
}

fn store_cached_zeta(p: &KernelParams, cal: &ZetaCalibration) {
    let Some(path) = cache_path() else { return };
    let mut body = if path.exists() {
        std::fs::read_to_string(&path).unwrap_or_default()
    } else {
        String::new()
    };
    if body.is_empty() {
        body.push_str("alpha,n,zeta,fit_residual,r_lo,r_hi,remainder_envelope\n");
    }
    body.push_str(&format!(
        "{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
        p.alpha, p.n, cal.zeta, cal.fit_residual, cal.r_lo, cal.r_hi, cal.remainder_envelope
    ));
    if let Some(dir) = path.parent() {
        let _ = std::fs::create_dir_all(dir);
    }
    let _ = std::fs::write(path, body);
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn params_validate_range() {
        assert!(KernelParams::new(1.0, 3).is_ok());
        assert!(KernelParams::new(1.01, 3).is_err());
        assert!(KernelParams::new(0.0, 3).is_err());
        assert!(KernelParams::new(0.5, 1).is_err());
    }

    #[test]
    fn big_q_at_zero() {
        // J_{n/2-1}(0) = 0 for n > 2, so Q(0) = 0 there; in n = 2 the Bessel
        // factor is J_0(0) = 1 and Q(0) = B(alpha, 2).
        let p3 = KernelParams::new(1.0, 3).unwrap();
        assert_eq!(kernel_Q(&p3, 0.0).unwrap(), 0.0);
        let p2 = KernelParams::new(0.5, 2).unwrap();
        assert_relative_eq!(kernel_Q(&p2, 0.0).unwrap(), beta(0.5, 2.0), max_relative = 1e-12);
    }

    #[test]
    fn small_q_at_zero_vanishes() {
        for &(a, n) in &[(0.5f64, 2u32), (1.0, 3), (2.0, 5)] {
            let p = KernelParams::new(a, n).unwrap();
            assert_eq!(kernel_q(&p, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn big_q_n2_alpha1_is_j1_over_t() {
        // d/dt [t J_1(t)] = t J_0(t) collapses the defining integral.
        let p = KernelParams::new_relaxed(1.0, 2).unwrap();
        for &t in &[0.5, 1.0, 3.0, 7.5] {
            let expect = bessel_j(1.0, t).unwrap() / t;
            assert_abs_diff_eq!(kernel_Q(&p, t).unwrap(), expect, epsilon = 1e-11);
        }
        assert_abs_diff_eq!(
            kernel_Q(&p, 1.0).unwrap(),
            0.4400505857,
            epsilon = 1e-9
        );
    }

    #[test]
    fn series_quadrature_agreement() {
        for &(a, n) in &[(0.5f64, 2u32), (1.0, 3), (0.75, 4), (2.0, 5)] {
            let p = KernelParams::new(a, n).unwrap();
            for &u in &[0.3, 2.0, 5.0, 7.9] {
                let s = kernel_series(&p, Kind::BigQ, u);
                let q = kernel_quadrature(&p, Kind::BigQ, u).unwrap();
                assert_abs_diff_eq!(s, q, epsilon = 1e-11);
                let s = kernel_series(&p, Kind::SmallQ, u);
                let q = kernel_quadrature(&p, Kind::SmallQ, u).unwrap();
                assert_abs_diff_eq!(s, q, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn switching_is_stitched() {
        // Series -> spline and spline -> model seams agree to well below
        // the 1e-8 stitching budget.
        for &(a, n) in &[(1.0f64, 3u32), (0.5, 2)] {
            let p = KernelParams::new(a, n).unwrap();
            for kind in [Kind::BigQ, Kind::SmallQ] {
                for &u in &[
                    SERIES_U_MAX - 1e-6,
                    SERIES_U_MAX + 1e-6,
                    SPLINE_U_MAX - 1e-6,
                    SPLINE_U_MAX + 1e-6,
                    233.0,
                    350.0,
                ] {
                    let v = kernel_value(&p, kind, u).unwrap();
                    let oracle = kernel_quadrature(&p, kind, u).unwrap();
                    assert_abs_diff_eq!(v, oracle, epsilon = 2e-9);
                }
            }
        }
    }

    #[test]
    fn second_expansion_coefficient_is_half_the_quoted_form() {
        // The quoted (a-1) Gamma(a+1) fails by a factor of two; the
        // calibration pins (a-1) Gamma(a+1) / 2.
        for &(a, n) in &[(0.5f64, 2u32), (2.0, 5), (1.5, 4)] {
            let p = KernelParams::new(a, n).unwrap();
            let fitted = second_expansion_coefficient(&p).unwrap();
            let corrected = 0.5 * (a - 1.0) * gamma(a + 1.0);
            assert_abs_diff_eq!(fitted, corrected, epsilon = 2e-4 * (1.0 + corrected.abs()));
        }
    }

    #[test]
    fn q_small_n3_matches_sine_integral_form() {
        // For n = 3, alpha = 1 the kernel reduces to elementary functions:
        // q(t) = sqrt(2/(pi t)) (Si(t) - sin t)/t.
        let p = KernelParams::new(1.0, 3).unwrap();
        let spec = QuadratureSpec::with_tols(1e-12, 1e-15);
        for &t in &[2.0, 10.0, 50.0, 120.0] {
            let (si, _) = integrate_weighted(
                |x| if x == 0.0 { 1.0 } else { x.sin() / x },
                0.0,
                t,
                &spec,
                EndpointWeight::None,
            )
            .unwrap();
            let expect = (2.0 / (std::f64::consts::PI * t)).sqrt() * (si - t.sin()) / t;
            assert_abs_diff_eq!(kernel_q(&p, t).unwrap(), expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn zeta_calibration_stable_and_sane() {
        let p = KernelParams::new(1.0, 3).unwrap();
        let w1 = fit_zeta(&p, 1e2, 1e3).unwrap();
        let w2 = fit_zeta(&p, 1e3, 1e4).unwrap();
        assert_abs_diff_eq!(w1.zeta, w2.zeta, epsilon = 1e-4);
        // Elementary reduction for n = 3 gives zeta = sqrt(pi/2).
        let expect = (std::f64::consts::PI / 2.0).sqrt();
        assert_abs_diff_eq!(w1.zeta, expect, epsilon = 1e-6);
    }

    #[test]
    fn asymptotic_form_certified_and_guarded() {
        let p = KernelParams::new(1.0, 3).unwrap();
        assert!(kernel_q_asymptotic(&p, 10.0).is_err());
        for &r in &[60.0, 200.0, 900.0] {
            let (v, bound) = kernel_q_asymptotic(&p, r).unwrap();
            let oracle = kernel_q_quadrature(&p, r).unwrap();
            assert!(
                (v - oracle).abs() <= bound,
                "remainder bound violated at r = {r}: |{v} - {oracle}| > {bound}"
            );
        }
    }

    #[test]
    fn asymptotics_struct_invariants() {
        let p = KernelParams::new(0.5, 2).unwrap();
        let a = kernel_asymptotics(&p).unwrap();
        assert_relative_eq!(a.main_coeff, gamma(0.5), max_relative = 1e-15);
        assert_eq!(a.remainder_exponent, -2.0);
    }
}
