//! The acceptance suite: every criterion the artifact must satisfy, runnable
//! both from `cargo test` (the `acceptance` integration target) and from the
//! CLI `selftest` subcommand. Each check pins its tolerances in code and
//! reports one deterministic pass/fail line.

use crate::diagnostics::{
    check_condition14, check_conditions, cosine_transform_partial_growth, endpoint_integrability,
    l1_comparison, partial_l1_masses, tail_masses, Status,
};
use crate::fraccalc::FractionalOrder;
use crate::profiles::{RadialFn, RadialProfile};
use crate::specfun::{
    aux_integral, bessel_j, kernel_q_remainder_profile, weber_schafheitlin,
    weber_schafheitlin_closed_form, AuxIntegralParams, KernelParams,
};
use crate::transform::{
    calibrate_leading_constant, convex_asymptotic, default_a_schedule, forward_direct,
    inverse_eq5, transform_grid, TransformMethod, TransformRequest,
};
use std::f64::consts::PI;

/// One acceptance criterion's outcome.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(id: u32, name: &'static str, detail: String) -> Self {
        CheckOutcome {
            id,
            name,
            passed: true,
            detail,
        }
    }

    fn fail(id: u32, name: &'static str, detail: String) -> Self {
        CheckOutcome {
            id,
            name,
            passed: false,
            detail,
        }
    }
}

/// All criterion ids, in order.
pub fn all_ids() -> Vec<u32> {
    (1..=12).collect()
}

/// Runs one criterion by id (1-12).
pub fn run_check(id: u32) -> CheckOutcome {
    match id {
        1 => gaussian_oracle(),
        2 => poisson_oracle(),
        3 => summability_kernel_oracle(),
        4 => kernel_remainder_slopes(),
        5 => moment_recursion(),
        6 => convex_asymptotics(),
        7 => integrability_dichotomy(),
        8 => l1_comparison_boundedness(),
        9 => endpoint_counterexample(),
        10 => inversion_round_trip(),
        11 => discontinuous_integral(),
        12 => determinism(),
        other => CheckOutcome::fail(other, "unknown", "no such criterion".into()),
    }
}

/// Runs the selected criteria (all twelve when `ids` is empty).
pub fn run_selected(ids: &[u32]) -> Vec<CheckOutcome> {
    let ids: Vec<u32> = if ids.is_empty() { all_ids() } else { ids.to_vec() };
    ids.into_iter().map(run_check).collect()
}

/// Renders outcomes as the stable line format used by the CLI.
pub fn render_outcomes(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{tag} criterion {:2}: {} -- {}\n", o.id, o.name, o.detail));
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    s.push_str(&format!(
        "{} of {} criteria passed\n",
        outcomes.len() - failed,
        outcomes.len()
    ));
    s
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

fn grid_request(
    profile: RadialProfile,
    dim: u32,
    alpha: f64,
    radii: Vec<f64>,
) -> TransformRequest {
    TransformRequest::new(
        profile,
        dim,
        FractionalOrder::new(alpha).expect("valid order"),
        radii,
        TransformMethod::Eq6,
        false,
    )
}

/// Criterion 1: the reduction matches the closed-form transform of the
/// self-reciprocal profile for n in {2..5} and both admissible orders.
///
/// Error metric: |computed - oracle| <= 1e-6 (1 + |oracle|) on the whole
/// grid, plus strict relative error <= 1e-6 wherever |oracle| >= 1e-4
/// (beyond r ~ 6 the oracle underflows far below f64 quadrature resolution,
/// so a plain relative bound is unattainable there; see the numerics notes
/// in the README).
fn gaussian_oracle() -> CheckOutcome {
    let name = "self-reciprocal profile vs closed form";
    let radii = log_grid(0.5, 20.0, 20);
    let mut worst_scaled = 0.0f64;
    let mut worst_rel = 0.0f64;
    for n in 2u32..=5 {
        let nf = n as f64;
        for alpha in [(nf - 1.0) / 2.0, (nf - 1.0) / 4.0] {
            let req = grid_request(RadialProfile::Gaussian, n, alpha, radii.clone());
            let out = match transform_grid(&req) {
                Ok(o) => o,
                Err(e) => return CheckOutcome::fail(1, name, format!("n={n} alpha={alpha}: {e}")),
            };
            for t in &out {
                let oracle = (2.0 * PI).powf(nf / 2.0) * (-0.5 * t.r * t.r).exp();
                let err = (t.value - oracle).abs();
                worst_scaled = worst_scaled.max(err / (1.0 + oracle.abs()));
                if oracle.abs() >= 1e-4 {
                    worst_rel = worst_rel.max(err / oracle.abs());
                }
            }
        }
    }
    let ok = worst_scaled <= 1e-6 && worst_rel <= 1e-6;
    let detail = format!(
        "max scaled err {worst_scaled:.3e} (tol 1e-6), max strict rel err {worst_rel:.3e} where |oracle| >= 1e-4"
    );
    if ok {
        CheckOutcome::pass(1, name, detail)
    } else {
        CheckOutcome::fail(1, name, detail)
    }
}

/// Criterion 2: exponential profile in n = 3 against 8 pi / (1 + r^2)^2.
fn poisson_oracle() -> CheckOutcome {
    let name = "exponential profile vs closed form";
    let radii = log_grid(0.5, 20.0, 20);
    let req = grid_request(RadialProfile::Exponential, 3, 1.0, radii);
    let out = match transform_grid(&req) {
        Ok(o) => o,
        Err(e) => return CheckOutcome::fail(2, name, e.to_string()),
    };
    let mut worst = 0.0f64;
    for t in &out {
        let oracle = 8.0 * PI / (1.0 + t.r * t.r).powi(2);
        worst = worst.max((t.value - oracle).abs() / oracle.abs());
    }
    let detail = format!("max relative error {worst:.3e} (tol 1e-6)");
    if worst <= 1e-6 {
        CheckOutcome::pass(2, name, detail)
    } else {
        CheckOutcome::fail(2, name, detail)
    }
}

/// Criterion 3: summability-kernel profile (1 - t^2)_+^delta with
/// delta = (n+1)/2 against its Bessel closed form, n in {2, 3}.
fn summability_kernel_oracle() -> CheckOutcome {
    let name = "compact summability profile vs closed form";
    let mut worst = 0.0f64;
    for n in [2u32, 3] {
        let nf = n as f64;
        let delta = (nf + 1.0) / 2.0;
        let alpha = (nf - 1.0) / 2.0;
        // Nudge grid points off the oracle's Bessel zeros so the relative
        // error stays meaningful.
        let mut radii = Vec::new();
        for mut r in log_grid(1.0, 50.0, 20) {
            for _ in 0..8 {
                let j = bessel_j(nf / 2.0 + delta, r).unwrap();
                let envelope = (2.0 / (PI * r)).sqrt();
                if j.abs() >= 0.05 * envelope {
                    break;
                }
                r *= 1.02;
            }
            radii.push(r);
        }
        radii.dedup_by(|a, b| {
            if *a <= *b {
                *a = *b * 1.01;
            }
            false
        });
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let req = grid_request(RadialProfile::BochnerRiesz { delta }, n, alpha, radii);
        let out = match transform_grid(&req) {
            Ok(o) => o,
            Err(e) => return CheckOutcome::fail(3, name, format!("n={n}: {e}")),
        };
        for t in &out {
            let oracle = (2.0 * PI).powf(nf / 2.0)
                * 2f64.powf(delta)
                * crate::specfun::gamma(delta + 1.0)
                * t.r.powf(-nf / 2.0 - delta)
                * bessel_j(nf / 2.0 + delta, t.r).unwrap();
            worst = worst.max((t.value - oracle).abs() / oracle.abs());
        }
    }
    let detail = format!("max relative error {worst:.3e} (tol 1e-5)");
    if worst <= 1e-5 {
        CheckOutcome::pass(3, name, detail)
    } else {
        CheckOutcome::fail(3, name, detail)
    }
}

/// Criterion 4: the kernel expansion remainder decays with log-log slope
/// -alpha - 3/2 (+/- 0.15) over [50, 5000] for three (n, alpha) pairs.
fn kernel_remainder_slopes() -> CheckOutcome {
    let name = "kernel expansion remainder slopes";
    let mut details = Vec::new();
    let mut ok = true;
    for &(n, alpha) in &[(2u32, 0.5f64), (3, 1.0), (5, 2.0)] {
        let p = match KernelParams::new(alpha, n) {
            Ok(p) => p,
            Err(e) => return CheckOutcome::fail(4, name, e.to_string()),
        };
        let samples = match kernel_q_remainder_profile(&p, 50.0, 5000.0, 72) {
            Ok(s) => s,
            Err(e) => return CheckOutcome::fail(4, name, e.to_string()),
        };
        // Envelope over log bins, dropping bins near the quadrature noise
        // floor (which grows with the oscillation count ~ r).
        let bins = 9;
        let lo = 50f64.ln();
        let hi = 5000f64.ln();
        let mut env: Vec<(f64, f64)> = Vec::new();
        for b in 0..bins {
            let l = lo + (hi - lo) * b as f64 / bins as f64;
            let h = lo + (hi - lo) * (b + 1) as f64 / bins as f64;
            let best = samples
                .iter()
                .filter(|(r, _)| r.ln() >= l && r.ln() <= h + 1e-12)
                .fold(None::<(f64, f64)>, |acc, &p| match acc {
                    Some(a) if a.1 >= p.1 => Some(a),
                    _ => Some(p),
                });
            if let Some((r, e)) = best {
                if e > 30.0 * 1e-15 * r {
                    env.push((r, e));
                }
            }
        }
        if env.len() < 4 {
            ok = false;
            details.push(format!("(n={n},a={alpha}): too few usable bins"));
            continue;
        }
        let nn = env.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for &(x, y) in &env {
            let lx = x.ln();
            let ly = y.ln();
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        let slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        let expect = -alpha - 1.5;
        if (slope - expect).abs() > 0.15 {
            ok = false;
        }
        details.push(format!("(n={n},a={alpha}): slope {slope:.3} vs {expect:.2}"));
    }
    let detail = details.join("; ");
    if ok {
        CheckOutcome::pass(4, name, detail)
    } else {
        CheckOutcome::fail(4, name, detail)
    }
}

/// SplitMix64: tiny deterministic generator for reproducible random probes.
pub(crate) struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Criterion 5: the truncated-moment recursion holds to 1e-10 on a
/// thousand random admissible parameter triples.
fn moment_recursion() -> CheckOutcome {
    let name = "truncated Bessel moment recursion";
    let mut rng = SplitMix64(0x5EED_0001);
    let mut triples = Vec::new();
    while triples.len() < 1000 {
        let mu = -0.8 + 3.3 * rng.next_f64();
        let lambda = 3.0 * rng.next_f64();
        let r = 0.1 * (1000.0f64).powf(rng.next_f64());
        if mu + lambda > -0.8 {
            triples.push((mu, lambda, r));
        }
    }
    let residuals: Vec<f64> = crate::par::maybe_par_map(&triples, |&(mu, lambda, r)| {
        let outer = AuxIntegralParams::new(mu, lambda, r).and_then(|p| aux_integral(&p));
        let inner = AuxIntegralParams::new(mu - 1.0, lambda + 1.0, r).and_then(|p| aux_integral(&p));
        match (outer, inner, bessel_j(lambda + 1.0, r)) {
            (Ok(o), Ok(i), Ok(j)) => (o - j / r - (lambda + 1.0 - mu) / r * i).abs(),
            _ => f64::NAN,
        }
    });
    let worst = residuals.iter().fold(0.0f64, |m, &v| m.max(v));
    let detail = format!("max residual {worst:.3e} over 1000 triples (tol 1e-10)");
    if worst < 1e-10 {
        CheckOutcome::pass(5, name, detail)
    } else {
        CheckOutcome::fail(5, name, detail)
    }
}

/// Criterion 6: convex-profile asymptotics in n = 3. Peak ratios within 5%,
/// the calibrated base-2 exponent of the leading constant reported with
/// both hypotheses' residuals, and the remainder budget bounded.
fn convex_asymptotics() -> CheckOutcome {
    let name = "convex-profile asymptotics";
    let dim = 3u32;
    // The ratio check needs the near-sharp regime: for exponents well above
    // the continuity boundary the theorem's remainder is provably the same
    // order as its main term and the peak ratio settles away from one.
    let profile = RadialProfile::Example1 { a: 1.0, beta: 1.05 };
    // Ratio against the direct oracle at positive cosine peaks in
    // [100, 1000]: r = pi n/2 + 2k pi.
    let mut peaks = Vec::new();
    let mut r = PI * 1.5 + 2.0 * (((100.0 - PI * 1.5) / (2.0 * PI)).ceil()) * PI;
    while r <= 1000.0 {
        peaks.push(r);
        r += 4.0 * PI;
    }
    let ratios: Vec<f64> = crate::par::maybe_par_map(&peaks, |&r| {
        let asym = convex_asymptotic(&profile, dim, r);
        let direct = forward_direct(&profile, dim, r, &default_a_schedule());
        match (asym, direct) {
            (Ok(a), Ok(d)) => d.value / a.main_term,
            _ => f64::NAN,
        }
    });
    let mut worst_ratio_dev = 0.0f64;
    for v in &ratios {
        worst_ratio_dev = worst_ratio_dev.max((v - 1.0).abs());
    }
    let fit = match calibrate_leading_constant(dim) {
        Ok(f) => f,
        Err(e) => return CheckOutcome::fail(6, name, e.to_string()),
    };
    // Remainder budget: int_2^R r^(n-1) |fhat - main| dr stays bounded;
    // growth from R = 500 to R = 1000 below 5%.
    let order = FractionalOrder::new(1.0).unwrap();
    let profile = RadialProfile::Example1 { a: 1.0, beta: 1.05 };
    let step = PI / 7.0;
    let count = ((1000.0 - 2.0) / step) as usize + 1;
    let radii: Vec<f64> = (0..count).map(|i| 2.0 + step * i as f64).collect();
    let req = TransformRequest::new(
        profile.clone(),
        dim,
        order,
        radii.clone(),
        TransformMethod::Eq6,
        false,
    );
    let values = match transform_grid(&req) {
        Ok(v) => v,
        Err(e) => return CheckOutcome::fail(6, name, e.to_string()),
    };
    let mut budget_500 = 0.0f64;
    let mut budget_1000 = 0.0f64;
    let mut prev: Option<(f64, f64)> = None;
    for t in &values {
        let main = match convex_asymptotic(&profile, dim, t.r) {
            Ok(a) => a.main_term,
            Err(e) => return CheckOutcome::fail(6, name, e.to_string()),
        };
        let g = t.r * t.r * (t.value - main).abs();
        if let Some((pr, pg)) = prev {
            let inc = 0.5 * (g + pg) * (t.r - pr);
            if t.r <= 500.0 {
                budget_500 += inc;
            }
            budget_1000 += inc;
        }
        prev = Some((t.r, g));
    }
    let growth = (budget_1000 - budget_500) / budget_500.max(1e-300);
    let ok = worst_ratio_dev <= 0.05
        && (fit.fitted_log2 - 2.0).abs() <= 0.1
        && fit.resid_half < fit.resid_third
        && growth < 0.05;
    let detail = format!(
        "peak ratio dev {worst_ratio_dev:.3} (tol 0.05); fitted 2^e exponent {:.3} [resid (n+1)/2: {:.2e}, (n+1)/3: {:.2e}]; budget growth 500->1000 {:.3}%",
        fit.fitted_log2,
        fit.resid_half,
        fit.resid_third,
        growth * 100.0
    );
    if ok {
        CheckOutcome::pass(6, name, detail)
    } else {
        CheckOutcome::fail(6, name, detail)
    }
}

/// Criterion 7: the endpoint-integrability dichotomy in n = 3.
fn integrability_dichotomy() -> CheckOutcome {
    let name = "endpoint integrability dichotomy";
    let dim = 3u32;
    // Integrable side: beta = (n-1)/2 + 0.25; geometric tail-mass decay.
    let conv_profile = RadialProfile::Example1 { a: 1.0, beta: 1.25 };
    let windows = [25.0, 50.0, 100.0, 200.0];
    let masses = match tail_masses(&conv_profile, dim, &windows) {
        Ok(m) => m,
        Err(e) => return CheckOutcome::fail(7, name, e.to_string()),
    };
    let mut ratios = Vec::new();
    for w in masses.windows(2) {
        ratios.push(w[1] / w[0].max(1e-300));
    }
    let geometric = ratios.iter().all(|&q| q < 0.95 && q > 0.4);
    let verdict_conv = endpoint_integrability(&conv_profile, dim)
        .map(|v| v.status == Status::Pass)
        .unwrap_or(false);

    // Log-divergent side: beta = (n-1)/2; partial masses fit c log N.
    let div_profile = RadialProfile::Example1 { a: 1.0, beta: 1.0 };
    let n_values = [20.0, 60.0, 180.0, 540.0];
    let partials = match partial_l1_masses(&div_profile, dim, &n_values) {
        Ok(p) => p,
        Err(e) => return CheckOutcome::fail(7, name, e.to_string()),
    };
    // Successive increments over log-3 steps estimate the log coefficient.
    let mut coeffs = Vec::new();
    for w in partials.windows(2) {
        coeffs.push((w[1] - w[0]) / 3f64.ln());
    }
    let cbar = coeffs.iter().sum::<f64>() / coeffs.len() as f64;
    let log_fit = coeffs.iter().all(|&c| (c - cbar).abs() <= 0.2 * cbar.abs());
    let verdict_div = endpoint_integrability(&div_profile, dim)
        .map(|v| v.status == Status::Fail)
        .unwrap_or(false);

    let ok = geometric && log_fit && verdict_conv && verdict_div;
    let detail = format!(
        "tail-mass ratios {:?} (geometric), log-coefficient spread within 20% of {:.3e}; criterion verdicts: integrable={} divergent={}",
        ratios
            .iter()
            .map(|q| format!("{q:.3}"))
            .collect::<Vec<_>>(),
        cbar,
        verdict_conv,
        verdict_div
    );
    if ok {
        CheckOutcome::pass(7, name, detail)
    } else {
        CheckOutcome::fail(7, name, detail)
    }
}

/// Criterion 8: the n-to-1-dimensional comparison residual stays bounded
/// relative to V_F + int_0^1 |F|/t, stable under doubling the N grid.
fn l1_comparison_boundedness() -> CheckOutcome {
    let name = "dimension-reduction L1 comparison";
    let profile = RadialProfile::Example1 { a: 2.0, beta: 2.0 };
    let report1 = match l1_comparison(&profile, 3, &[10.0, 30.0, 100.0, 300.0]) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::fail(8, name, e.to_string()),
    };
    let report2 = match l1_comparison(&profile, 3, &[20.0, 60.0, 200.0, 600.0]) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::fail(8, name, e.to_string()),
    };
    let c1 = report1.theta.iter().fold(0.0f64, |m, &v| m.max(v));
    let c2 = report2.theta.iter().fold(0.0f64, |m, &v| m.max(v));
    let variation = (c2 - c1).abs() / c1.max(1e-300);
    let ok = c1.is_finite() && c2.is_finite() && variation <= 0.10;
    let detail = format!(
        "max |residual|/bound: {c1:.4} on the base grid, {c2:.4} doubled (variation {:.2}%, tol 10%)",
        variation * 100.0
    );
    if ok {
        CheckOutcome::pass(8, name, detail)
    } else {
        CheckOutcome::fail(8, name, detail)
    }
}

/// Criterion 9: the logarithmic counterexample passes the transform
/// hypotheses, fails the endpoint condition, and its one-dimensional
/// comparison integral grows without bound.
fn endpoint_counterexample() -> CheckOutcome {
    let name = "endpoint-condition counterexample";
    let profile = RadialProfile::Remark3;
    let order = FractionalOrder::new(1.0).unwrap();
    let verdicts = match check_conditions(&profile, 3, &order) {
        Ok(v) => v,
        Err(e) => return CheckOutcome::fail(9, name, e.to_string()),
    };
    let main_pass = verdicts.iter().all(|v| v.status == Status::Pass);
    let c14 = match check_condition14(&profile, 3) {
        Ok(v) => v,
        Err(e) => return CheckOutcome::fail(9, name, e.to_string()),
    };
    let growth = match cosine_transform_partial_growth(&profile, &[1e2, 1e3, 1e4]) {
        Ok(g) => g,
        Err(e) => return CheckOutcome::fail(9, name, e.to_string()),
    };
    let increasing = growth[1].1 > growth[0].1 * 1.02 && growth[2].1 > growth[1].1 * 1.02;
    let ok = main_pass && c14.status == Status::Fail && increasing;
    let detail = format!(
        "hypotheses pass={main_pass}, endpoint condition={:?}, partial comparison values {:.4} -> {:.4} -> {:.4}",
        c14.status, growth[0].1, growth[1].1, growth[2].1
    );
    if ok {
        CheckOutcome::pass(9, name, detail)
    } else {
        CheckOutcome::fail(9, name, detail)
    }
}

/// Criterion 10: the summability inverse recovers the profile at interior
/// radii to 1e-3 with truncation schedule {50, 100, 200, 400}.
fn inversion_round_trip() -> CheckOutcome {
    let name = "inversion round trip";
    let dim = 3u32;
    let order = FractionalOrder::new(1.0).unwrap();
    let schedule = [50.0, 100.0, 200.0, 400.0];
    let mut worst = 0.0f64;

    // Profile 1: the self-reciprocal profile; its transform is sampled from
    // the forward reduction on a dense grid and spline-cached.
    for (profile, radii) in [
        (
            RadialProfile::Gaussian,
            vec![0.4, 0.8, 1.2, 1.6, 2.0],
        ),
        (
            RadialProfile::Example1 { a: 2.0, beta: 2.0 },
            vec![0.2, 0.35, 0.5, 0.65, 0.8],
        ),
    ] {
        let hat = match sampled_transform(&profile, dim, &order, 401.0) {
            Ok(h) => h,
            Err(e) => return CheckOutcome::fail(10, name, e.to_string()),
        };
        for &r in &radii {
            let recovered = match inverse_eq5(&|s| hat.eval(s), dim, &order, r, &schedule) {
                Ok(v) => v,
                Err(e) => return CheckOutcome::fail(10, name, e.to_string()),
            };
            let expect = profile.eval(r);
            worst = worst.max((recovered - expect).abs());
        }
    }
    let detail = format!("max recovery error {worst:.3e} (tol 1e-3)");
    if worst <= 1e-3 {
        CheckOutcome::pass(10, name, detail)
    } else {
        CheckOutcome::fail(10, name, detail)
    }
}

/// Dense spline cache of the forward transform on (0, s_max].
struct SampledHat {
    spline: crate::interp::CubicSpline,
    floor_after: f64,
}

impl SampledHat {
    fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 || s >= self.floor_after {
            return 0.0;
        }
        if s < self.spline.lo() {
            return self.spline.eval(self.spline.lo());
        }
        self.spline.eval(s)
    }
}

fn sampled_transform(
    profile: &RadialProfile,
    dim: u32,
    order: &FractionalOrder,
    s_max: f64,
) -> crate::error::Result<SampledHat> {
    let count = (s_max * 26.0 / PI).ceil() as usize;
    let lo = 0.02;
    let rs: Vec<f64> = (0..count)
        .map(|i| lo + (s_max - lo) * i as f64 / (count - 1) as f64)
        .collect();
    let req = TransformRequest::new(
        profile.clone(),
        dim,
        *order,
        rs.clone(),
        TransformMethod::Eq6,
        false,
    );
    let vals = transform_grid(&req)?;
    let spline = crate::interp::CubicSpline::fit_uniform(
        rs[0],
        rs[count - 1],
        vals.iter().map(|t| t.value).collect(),
    )?;
    Ok(SampledHat {
        spline,
        floor_after: s_max,
    })
}

/// Criterion 11: the discontinuous two-Bessel integral vanishes below the
/// jump and matches the verified closed form above it, both to 1e-4.
fn discontinuous_integral() -> CheckOutcome {
    let name = "discontinuous two-Bessel integral";
    let cases_below = [(0.0, 2.0, 2.0, 1.0), (0.5, 2.5, 3.0, 1.0)];
    let cases_above = [(0.0, 2.0, 1.0, 2.0), (0.5, 2.5, 1.0, 2.5)];
    let mut worst_below = 0.0f64;
    for &(mu, nu, a, b) in &cases_below {
        match weber_schafheitlin(mu, nu, a, b) {
            Ok(v) => worst_below = worst_below.max(v.abs()),
            Err(e) => return CheckOutcome::fail(11, name, e.to_string()),
        }
    }
    let mut worst_above = 0.0f64;
    for &(mu, nu, a, b) in &cases_above {
        let v = match weber_schafheitlin(mu, nu, a, b) {
            Ok(v) => v,
            Err(e) => return CheckOutcome::fail(11, name, e.to_string()),
        };
        let cf = weber_schafheitlin_closed_form(mu, nu, a, b).unwrap();
        worst_above = worst_above.max((v - cf).abs());
    }
    let ok = worst_below < 1e-4 && worst_above <= 1e-4;
    let detail = format!(
        "max |value| below the jump {worst_below:.3e}; max closed-form deviation above {worst_above:.3e} (tol 1e-4)"
    );
    if ok {
        CheckOutcome::pass(11, name, detail)
    } else {
        CheckOutcome::fail(11, name, detail)
    }
}

/// Criterion 12: determinism. A representative subset of the suite renders
/// byte-identically across two in-process runs (the CLI test repeats this
/// across two process invocations).
fn determinism() -> CheckOutcome {
    let name = "byte-identical reruns";
    let subset = [2u32, 5, 11];
    let first = render_outcomes(&run_selected(&subset));
    let second = render_outcomes(&run_selected(&subset));
    // Also pin a transform grid and a diagnostics report.
    let order = FractionalOrder::new(1.0).unwrap();
    let req = TransformRequest::new(
        RadialProfile::Exponential,
        3,
        order,
        log_grid(0.5, 10.0, 8),
        TransformMethod::Eq6,
        false,
    );
    let render_grid = |out: &[crate::transform::TransformResult]| -> String {
        out.iter()
            .map(|t| format!("{:.16e},{:.16e}", t.r, t.value))
            .collect::<Vec<_>>()
            .join(";")
    };
    let g1 = transform_grid(&req).map(|o| render_grid(&o));
    let g2 = transform_grid(&req).map(|o| render_grid(&o));
    let d1 = crate::diagnostics::full_report(&RadialProfile::Remark3, 3, &order)
        .map(|v| crate::diagnostics::verdicts_to_json(&v));
    let d2 = crate::diagnostics::full_report(&RadialProfile::Remark3, 3, &order)
        .map(|v| crate::diagnostics::verdicts_to_json(&v));
    let ok = first == second
        && matches!((&g1, &g2), (Ok(a), Ok(b)) if a == b)
        && matches!((&d1, &d2), (Ok(a), Ok(b)) if a == b);
    let detail = if ok {
        format!(
            "criteria {subset:?}, one transform grid, and one diagnostics report rendered identically across reruns ({} bytes)",
            first.len()
        )
    } else {
        "reruns differed".to_string()
    };
    if ok {
        CheckOutcome::pass(12, name, detail)
    } else {
        CheckOutcome::fail(12, name, detail)
    }
}
