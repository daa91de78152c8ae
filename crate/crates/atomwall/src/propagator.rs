//! The thermal photon propagator Q(u, s) and the covariance of the mode
//! oscillator process it normalizes.
//!
//! `Q(u, s) = (u/2) (e^{-u(1-s)} + e^{-u s}) / (1 - e^{-u})` for s in [0, 1],
//! extended periodically in s with period 1. The dimensionless argument is
//! u = lambda_ph k = beta eps_k.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PropagatorError {
    #[error("q_propagator requires u >= 0, got {0}")]
    NegativeU(f64),
    #[error("oscillator_covariance requires beta_eps > 0, got {0}")]
    NonPositiveBetaEps(f64),
    #[error("oscillator_covariance requires 0 <= s <= 1, got {0}")]
    SOutOfRange(f64),
}

/// Reduce s to [0, 1] by periodicity.
fn wrap_unit(s: f64) -> f64 {
    let r = s - s.floor();
    // s.floor() == s for integers gives r = 0, fine.
    if r < 0.0 {
        r + 1.0
    } else {
        r
    }
}

/// Thermal photon propagator Q(u, s). Stable for u up to at least 1e8: both
/// exponents are non-positive, and the u -> 0 limit is taken by series.
pub fn q_propagator(u: f64, s: f64) -> Result<f64, PropagatorError> {
    if u < 0.0 {
        return Err(PropagatorError::NegativeU(u));
    }
    let sb = wrap_unit(s);
    if u < 1e-4 {
        // Q is even in u; second-order series in u keeps full precision where
        // the closed form would lose digits to cancellation.
        let a = 1.0 - sb;
        let coef = (a * a + sb * sb) / 4.0 - 1.0 / 6.0;
        return Ok(1.0 + u * u * coef);
    }
    let denom = -(-u).exp_m1(); // 1 - e^{-u}, accurate for all u > 0
    Ok(0.5 * u * ((-u * (1.0 - sb)).exp() + (-u * sb).exp()) / denom)
}

/// Covariance of the mode oscillator process at inverse temperature scale
/// beta_eps = beta * eps: `(e^{-b(1-s)} + e^{-b s}) / (2 b (1 - e^{-b}))`.
/// Satisfies `beta_eps^2 * cov = Q(beta_eps, s)`.
pub fn oscillator_covariance(beta_eps: f64, s: f64) -> Result<f64, PropagatorError> {
    if !(beta_eps > 0.0) {
        return Err(PropagatorError::NonPositiveBetaEps(beta_eps));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(PropagatorError::SOutOfRange(s));
    }
    let denom = -(-beta_eps).exp_m1();
    Ok(((-beta_eps * (1.0 - s)).exp() + (-beta_eps * s).exp()) / (2.0 * beta_eps * denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{gl32, integrate_gl};
    use approx::assert_relative_eq;

    fn q(u: f64, s: f64) -> f64 {
        q_propagator(u, s).unwrap()
    }

    /// int_0^1 Q(u, s) ds by panels refined toward the endpoints, where Q
    /// concentrates at large u.
    fn q_norm(u: f64) -> f64 {
        // symmetry: 2 * int_0^{1/2}
        let mut edges = vec![0.0];
        let mut w = (1.0 / u.max(2.0)).min(0.25);
        while w < 0.5 {
            edges.push(w);
            w *= 2.0;
        }
        edges.push(0.5);
        let mut total = 0.0;
        for pair in edges.windows(2) {
            total += integrate_gl(gl32(), pair[0], pair[1], |s| q(u, s));
        }
        2.0 * total
    }

    #[test]
    fn normalization_holds_across_scales() {
        for u in [0.0, 0.01, 1.0, 100.0, 1e4] {
            assert!((q_norm(u) - 1.0).abs() < 1e-10, "u = {u}");
        }
    }

    #[test]
    fn zero_frequency_limit_is_one() {
        for s in [0.0, 0.3, 0.7, 1.0] {
            assert_relative_eq!(q(0.0, s), 1.0, max_relative = 1e-15);
            assert_relative_eq!(q(1e-9, s), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn series_branch_matches_closed_form_at_switch() {
        for s in [0.0, 0.2, 0.5] {
            let u = 1.001e-4; // just above the switch: closed form
            let closed = q(u, s);
            let series = {
                let a: f64 = 1.0 - s;
                1.0 + u * u * ((a * a + s * s) / 4.0 - 1.0 / 6.0)
            };
            assert_relative_eq!(closed, series, max_relative = 1e-10);
        }
    }

    #[test]
    fn symmetry_and_periodicity() {
        assert_relative_eq!(q(3.7, 0.2), q(3.7, 0.8), max_relative = 1e-14);
        assert_relative_eq!(q(3.7, 0.2), q(3.7, 1.2), max_relative = 1e-14);
        assert_relative_eq!(q(3.7, 0.2), q(3.7, -0.8), max_relative = 1e-14);
    }

    #[test]
    fn frozen_value_at_u2_s0() {
        // (1 + e^-2)/(1 - e^-2), evaluated independently to high precision
        assert_relative_eq!(q(2.0, 0.0), 1.313_035_285_499_331, max_relative = 1e-12);
    }

    #[test]
    fn second_derivative_identity() {
        // d2Q/ds2 = u^2 Q on 0 < s < 1, by central differences
        let (u, s, h) = (3.0, 0.4, 5e-4);
        let d2 = (q(u, s + h) - 2.0 * q(u, s) + q(u, s - h)) / (h * h);
        assert_relative_eq!(d2, u * u * q(u, s), max_relative = 1e-6);
    }

    #[test]
    fn large_u_no_overflow() {
        let v = q(1e8, 0.5);
        assert!(v.is_finite() && v >= 0.0);
        // at s = 0 the value is u/2 * coth(u/2) ~ u/2
        assert_relative_eq!(q(1e8, 0.0), 5e7, max_relative = 1e-12);
    }

    #[test]
    fn negative_u_rejected() {
        assert_eq!(
            q_propagator(-1.0, 0.1).unwrap_err(),
            PropagatorError::NegativeU(-1.0)
        );
    }

    #[test]
    fn covariance_periodic_endpoints_and_relation_to_q() {
        let b = 1.5;
        assert_relative_eq!(
            oscillator_covariance(b, 0.0).unwrap(),
            oscillator_covariance(b, 1.0).unwrap(),
            max_relative = 1e-15
        );
        let (b, s) = (2.0, 0.3);
        assert_relative_eq!(
            b * b * oscillator_covariance(b, s).unwrap(),
            q(b, s),
            max_relative = 1e-14
        );
    }

    #[test]
    fn covariance_frozen_value() {
        // (1 + e^-1)/(2 (1 - e^-1)) at beta_eps = 1, s = 0
        assert_relative_eq!(
            oscillator_covariance(1.0, 0.0).unwrap(),
            1.081_976_706_869_326_5,
            max_relative = 1e-12
        );
    }

    #[test]
    fn covariance_domain_errors() {
        assert!(oscillator_covariance(0.0, 0.5).is_err());
        assert!(oscillator_covariance(1.0, 1.5).is_err());
    }
}
