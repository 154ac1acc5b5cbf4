//! Equilibrium flux limiter and equilibrium indicators, plus the Van Leer
//! slope limiter shared by the second-order flux kernels.
//!
//! The equilibrium limiter blends an equilibrium-corrected flux
//! `F^um - phi(r) F^eq` between the underlying scheme (`phi = 0`, far from
//! equilibrium) and the residual equilibrium scheme (`phi = 1`, at
//! equilibrium), where `r` compares the current flux differences with those
//! of the equilibrium state.

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterConfig {
    pub alpha: f64,
    /// Relative threshold below which a flux difference counts as zero.
    pub epsilon: f64,
}

impl Default for LimiterConfig {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            epsilon: 1e-14,
        }
    }
}

impl LimiterConfig {
    pub fn new(alpha: f64, epsilon: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "must be greater than one",
            });
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter {
                name: "indicator_epsilon",
                reason: "must be positive",
            });
        }
        Ok(Self { alpha, epsilon })
    }
}

/// `phi(r) = r^alpha` on `(0, 1]`, `r^-alpha` above one, zero for `r <= 0`.
///
/// Satisfies `0 <= phi(r) <= min(1, r)` for every `alpha > 1`.
pub fn phi(r: f64, config: &LimiterConfig) -> f64 {
    if r.is_nan() || r <= 0.0 {
        0.0
    } else if r <= 1.0 {
        math::powf(r, config.alpha)
    } else if r.is_infinite() {
        0.0
    } else {
        math::powf(r, -config.alpha)
    }
}

/// `r = dU_num / dU_eq` with the degenerate cases resolved.
///
/// `scale` sets the magnitude below which a difference is treated as zero
/// (`epsilon * scale`). When both differences vanish the state is locally at
/// equilibrium and `r = 1`; when only `dU_eq` vanishes a large positive value
/// is returned so that `phi(r)` is close to zero.
pub fn indicator_scalar(du_num: f64, du_eq: f64, scale: f64, config: &LimiterConfig) -> f64 {
    let tiny = config.epsilon * scale;
    if du_num == du_eq {
        return 1.0;
    }
    if du_eq.abs() > tiny {
        du_num / du_eq
    } else if du_num.abs() <= tiny {
        1.0
    } else {
        du_num.abs() / tiny
    }
}

/// Vector indicator `|dF_num|_1 / (|dF_eq|_1 + epsilon * scale)`.
///
/// Bitwise-equal differences (in particular any cell of an exact discrete
/// equilibrium) give `r = 1` exactly.
pub fn indicator_system(df_num: [f64; 2], df_eq: [f64; 2], scale: f64, config: &LimiterConfig) -> f64 {
    if df_num == df_eq {
        return 1.0;
    }
    let tiny = config.epsilon * scale;
    let num = df_num[0].abs() + df_num[1].abs();
    let eq = df_eq[0].abs() + df_eq[1].abs();
    if num <= tiny && eq <= tiny {
        return 1.0;
    }
    num / (eq + tiny)
}

/// Van Leer limiter `psi(theta) = (theta + |theta|) / (1 + |theta|)`.
pub fn van_leer(theta: f64) -> f64 {
    if theta.is_infinite() {
        return if theta > 0.0 { 2.0 } else { 0.0 };
    }
    (theta + theta.abs()) / (1.0 + theta.abs())
}

/// Van Leer limited slope `psi(dm / dp) * dp`, written without the division
/// by `dp` so that flat neighbours need no special casing.
#[inline]
pub fn limited_slope(dm: f64, dp: f64) -> f64 {
    let denom = dm.abs() + dp.abs();
    if denom == 0.0 {
        0.0
    } else {
        (dm * dp.abs() + dm.abs() * dp) / denom
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn limiter_branches() {
        let c = LimiterConfig::default();
        assert_eq!(phi(1.0, &c), 1.0);
        assert_eq!(phi(0.0, &c), 0.0);
        assert_eq!(phi(-3.0, &c), 0.0);
        assert_eq!(phi(0.5, &c), 0.25);
        assert_eq!(phi(2.0, &c), 0.25);
        assert_eq!(phi(f64::INFINITY, &c), 0.0);
        assert!(phi(1e6, &c) <= 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(LimiterConfig::new(1.0, 1e-14).is_err());
        assert!(LimiterConfig::new(2.0, 0.0).is_err());
        assert!(LimiterConfig::new(1.5, 1e-10).is_ok());
    }

    #[test]
    fn limiter_bound_on_random_ratios() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for alpha in [1.01, 2.0, 3.7] {
            let c = LimiterConfig::new(alpha, 1e-14).unwrap();
            for _ in 0..10_000 {
                let r: f64 = rng.gen_range(0.0..100.0);
                let r = if r == 0.0 { 1e-300 } else { r };
                let p = phi(r, &c);
                assert!(p >= 0.0 && p <= 1.0_f64.min(r), "alpha {alpha} r {r} phi {p}");
                assert!(p / r <= 1.0);
            }
        }
    }

    #[test]
    fn limiter_is_unimodal() {
        let c = LimiterConfig::default();
        let mut prev = 0.0;
        for k in 1..=1000 {
            let p = phi(k as f64 / 1000.0, &c);
            assert!(p >= prev);
            prev = p;
        }
        for k in 0..1000 {
            let p = phi(1.0 + k as f64 / 10.0, &c);
            assert!(p <= prev);
            prev = p;
        }
    }

    #[test]
    fn scalar_indicator_cases() {
        let c = LimiterConfig::default();
        assert_eq!(indicator_scalar(0.0, 0.0, 1.0, &c), 1.0);
        assert_eq!(phi(indicator_scalar(0.0, 0.0, 1.0, &c), &c), 1.0);
        assert_eq!(indicator_scalar(0.3, 0.3, 1.0, &c), 1.0);
        assert_eq!(indicator_scalar(-0.6, 0.3, 1.0, &c), -2.0);
        let r = indicator_scalar(1.0, 1e-20, 1.0, &c);
        assert!(r >= 1e13);
        assert!(phi(r, &c) <= 1e-26);
        // both below the threshold
        assert_eq!(indicator_scalar(1e-16, -1e-17, 1.0, &c), 1.0);
    }

    #[test]
    fn system_indicator_cases() {
        let c = LimiterConfig::default();
        assert_eq!(indicator_system([0.0; 2], [0.0; 2], 1.0, &c), 1.0);
        let d = [0.25, -1.5];
        assert_eq!(indicator_system(d, d, 1.0, &c), 1.0);
        let r = indicator_system([0.5, -3.0], d, 1.0, &c);
        assert_relative_eq!(r, 2.0, max_relative = 1e-13);
        let r = indicator_system([0.25 + 1e-9, -1.5], d, 1.0, &c);
        assert_relative_eq!(r, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn van_leer_limits() {
        assert_eq!(van_leer(1.0), 1.0);
        assert_eq!(van_leer(-1.0), 0.0);
        assert_eq!(van_leer(0.0), 0.0);
        assert!((van_leer(1e12) - 2.0).abs() < 1e-11);
        assert_eq!(van_leer(f64::INFINITY), 2.0);
    }

    proptest::proptest! {
        #[test]
        fn slope_matches_ratio_form(dm in -10.0..10.0f64, dp in -10.0..10.0f64) {
            proptest::prop_assume!(dp.abs() > 1e-6);
            let s = limited_slope(dm, dp);
            proptest::prop_assert!((s - van_leer(dm / dp) * dp).abs() <= 1e-12 * (1.0 + dm.abs() + dp.abs()));
            // the slope never exceeds twice either one-sided difference
            proptest::prop_assert!(s.abs() <= 2.0 * dm.abs().min(dp.abs()) + 1e-12);
        }
    }
}
