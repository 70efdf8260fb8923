//! Gamma-family helpers used throughout the kernel and fractional calculus.

/// Gamma function for real arguments (poles at non-positive integers).
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Natural log of |Gamma(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Euler beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b), a, b > 0.
///
/// Evaluated in log space so that large arguments (deep series terms) do not
/// overflow.
pub fn beta(a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(gamma(0.5), std::f64::consts::PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5), 0.5 * std::f64::consts::PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn beta_matches_gamma_ratio() {
        assert_relative_eq!(beta(1.0, 2.5), 0.4, max_relative = 1e-13);
        assert_relative_eq!(beta(2.0, 3.0), 1.0 / 12.0, max_relative = 1e-13);
        // B(a, b) symmetric
        assert_relative_eq!(beta(0.3, 4.2), beta(4.2, 0.3), max_relative = 1e-13);
    }
}
