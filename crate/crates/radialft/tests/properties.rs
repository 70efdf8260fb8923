//! Property-based invariants over randomized inputs.

use proptest::prelude::*;
use radialft::fraccalc::modulus_of_continuity;
use radialft::profiles::{parse_profile, render_profile, RadialProfile};
use radialft::quad::wynn_epsilon;
use radialft::specfun::{aux_integral, bessel_j, sw_identity_check, AuxIntegralParams};

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    })]

    /// Descent recursion of the truncated Bessel moment, random admissible
    /// parameters.
    #[test]
    fn moment_recursion_identity(
        mu in -0.7f64..2.5,
        lambda in 0.0f64..3.0,
        r in 0.1f64..100.0,
    ) {
        prop_assume!(mu + lambda > -0.8);
        let outer = aux_integral(&AuxIntegralParams::new(mu, lambda, r).unwrap()).unwrap();
        let inner = aux_integral(&AuxIntegralParams::new(mu - 1.0, lambda + 1.0, r).unwrap()).unwrap();
        let rhs = bessel_j(lambda + 1.0, r).unwrap() / r
            + (lambda + 1.0 - mu) / r * inner;
        prop_assert!((outer - rhs).abs() < 1e-10, "residual {}", (outer - rhs).abs());
    }

    /// d/dt [t^nu J_nu(t)] = t^nu J_{nu-1}(t) via central differences.
    #[test]
    fn bessel_derivative_identity(
        nu in 0.5f64..3.0,
        t in 0.5f64..50.0,
    ) {
        let h = 1e-5;
        let g = |u: f64| u.powf(nu) * bessel_j(nu, u).unwrap();
        let fd = (g(t + h) - g(t - h)) / (2.0 * h);
        let rhs = t.powf(nu) * bessel_j(nu - 1.0, t).unwrap();
        prop_assert!((fd - rhs).abs() <= 1e-6 * (1.0 + rhs.abs()));
    }

    /// The finite Sonine integral equals its closed form.
    #[test]
    fn sonine_identity(
        beta in -0.4f64..2.0,
        mu in -0.8f64..2.0,
        r in 0.5f64..60.0,
    ) {
        let (lhs, rhs) = sw_identity_check(beta, mu, r).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9, "lhs {lhs} rhs {rhs}");
    }

    /// Modulus of continuity is nondecreasing in delta.
    #[test]
    fn modulus_monotone(
        freq in 0.5f64..8.0,
        d1 in 0.01f64..0.2,
        scale in 1.0f64..3.0,
    ) {
        let f = move |t: f64| (freq * t).sin() * scale + t;
        let d2 = d1 * 1.7;
        let m1 = modulus_of_continuity(&f, d1, 0.0, 2.0);
        let m2 = modulus_of_continuity(&f, d2, 0.0, 2.0);
        prop_assert!(m2 >= m1 - 1e-12);
    }

    /// Profile grammar round trip for randomized built-in parameters.
    #[test]
    fn profile_round_trip(
        a in 0.5f64..4.0,
        beta in 0.5f64..5.0,
        rho_frac in 0.05f64..0.95,
    ) {
        let profiles = vec![
            RadialProfile::Example1 { a, beta },
            RadialProfile::Example2 { a, beta, rho: a * rho_frac },
            RadialProfile::BochnerRiesz { delta: beta },
        ];
        for p in profiles {
            let text = render_profile(&p);
            let q = parse_profile(&text).unwrap();
            prop_assert_eq!(render_profile(&q), text);
        }
    }

    /// Epsilon acceleration recovers the limit of a geometric partial-sum
    /// sequence far more accurately than truncation alone.
    #[test]
    fn epsilon_accelerates_geometric_tails(
        ratio in -0.9f64..0.9,
        scale in 0.1f64..10.0,
    ) {
        prop_assume!(ratio.abs() > 0.05);
        let limit = scale / (1.0 - ratio);
        let partials: Vec<f64> = (0..12)
            .map(|k| {
                (0..=k).map(|j| scale * ratio.powi(j)).sum::<f64>()
            })
            .collect();
        let (est, _) = wynn_epsilon(&partials);
        let plain_err = (partials[11] - limit).abs();
        let accel_err = (est - limit).abs();
        prop_assert!(accel_err <= plain_err.max(1e-12));
        prop_assert!(accel_err < 1e-8 * (1.0 + limit.abs()), "accel err {accel_err}");
    }
}
