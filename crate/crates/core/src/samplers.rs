//! Inverse-CDF samplers for the jump chain.
//!
//! Each sampler comes in two forms: a `*_from_uniform` quantile map that is
//! a pure function of the uniform (used by the substitute-back tests), and
//! a wrapper that draws the uniform from an [`RngStream`].
//!
//! Levels are updated multiplicatively: after a waiting time `t` from level
//! `h` the pre-jump level is `h · w` with `w = v^(2β1/(1-β1))`, and a jump
//! multiplies the level by `v^(-2β2/(1+β2))` (β2 > 0) or `u^(2|β2|/(1+β2))`
//! (β2 < 0). This keeps levels strictly positive and makes a run from gap
//! `c·x` exactly `c` times a run from `x` when `c` is a power of two.

use alloc::format;

use crate::config::SkewConfig;
use crate::error::{Error, Result};
use crate::math::{ln, powf};
use crate::rng::RngStream;
use crate::special;

/// Jump times landing within this fraction of `h` of the drift horizon
/// `h / β1` count as absorption.
pub const ABSORPTION_SLACK: f64 = 1e-15;

/// One step of the chain from a fixed level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpDraw {
    /// Local time elapsed before the jump (or before absorption).
    pub waiting_time: f64,
    /// Level just before the jump.
    pub pre_jump_level: f64,
    /// The excursion functional ℓ; the jump of Z is `β2 · ℓ`.
    pub ell: f64,
    /// Level right after the jump.
    pub post_jump_level: f64,
    /// Drift reached zero before any jump.
    pub absorbed: bool,
}

impl JumpDraw {
    pub fn jump_size(&self, beta2: f64) -> f64 {
        beta2 * self.ell
    }
}

/// Result of the waiting-time quantile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaitingTime {
    pub time: f64,
    /// Ratio of the pre-jump level to the starting level, `1 - β1 t / h`.
    pub level_ratio: f64,
    pub absorbed: bool,
}

fn check_level(op: &'static str, h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("level h = {h} must be positive")))
    }
}

/// Survival of the first jump time from level `h`:
/// `S(t) = (1 - β1 t / h)^((1-β1)/(2β1))` on `[0, h/β1]`.
pub fn jump_time_survival(h: f64, beta1: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let r = 1.0 - beta1 * t / h;
    if r <= 0.0 {
        0.0
    } else {
        powf(r, (1.0 - beta1) / (2.0 * beta1))
    }
}

/// Quantile of the first jump time at survival level `v ∈ (0, 1]`.
pub fn jump_time_from_uniform(h: f64, beta1: f64, v: f64) -> Result<WaitingTime> {
    check_level("sample_jump_time", h)?;
    if !(beta1 > 0.0 && beta1 < 1.0) {
        return Err(Error::domain(
            "sample_jump_time",
            format!("beta1 = {beta1} must be in (0, 1)"),
        ));
    }
    let horizon = h / beta1;
    let w = if v >= 1.0 {
        1.0
    } else if v <= 0.0 {
        0.0
    } else {
        powf(v, 2.0 * beta1 / (1.0 - beta1))
    };
    // horizon * w is the distance of t from the horizon.
    if horizon * w <= ABSORPTION_SLACK * h {
        return Ok(WaitingTime {
            time: horizon,
            level_ratio: 0.0,
            absorbed: true,
        });
    }
    Ok(WaitingTime {
        time: horizon * (1.0 - w),
        level_ratio: w,
        absorbed: false,
    })
}

pub fn sample_jump_time(h: f64, cfg: &SkewConfig, rng: &mut RngStream) -> Result<WaitingTime> {
    jump_time_from_uniform(h, cfg.beta1(), rng.uniform_open_closed())
}

/// Conditional tail of ℓ given a jump from level `h`, both signs of β2:
/// `(1 + β2 a / h)^(-(1+β2)/(2β2))`, zero beyond `h/|β2|` when β2 < 0.
pub fn jump_size_survival(h: f64, beta2: f64, a: f64) -> f64 {
    crate::analytic::localtime_survival(h, beta2, a)
}

/// Factor multiplying the level at a positive jump drawn at CDF level `u`.
fn pos_jump_factor(beta2: f64, u: f64) -> f64 {
    powf(1.0 - u, -2.0 * beta2 / (1.0 + beta2))
}

/// ℓ at CDF level `u ∈ [0, 1)` for `0 < β2 < 1`:
/// `ℓ = (h / β2) ((1 - u)^(-2β2/(1+β2)) - 1)`.
pub fn jump_size_pos_from_uniform(h: f64, beta2: f64, u: f64) -> Result<f64> {
    check_level("sample_jump_size_pos", h)?;
    if !(beta2 > 0.0 && beta2 < 1.0) {
        return Err(Error::domain(
            "sample_jump_size_pos",
            format!("beta2 = {beta2} must be in (0, 1)"),
        ));
    }
    Ok(h * (pos_jump_factor(beta2, u) - 1.0) / beta2)
}

pub fn sample_jump_size_pos(h: f64, cfg: &SkewConfig, rng: &mut RngStream) -> Result<f64> {
    jump_size_pos_from_uniform(h, cfg.beta2(), rng.uniform_closed_open())
}

/// Factor multiplying the level at a negative jump drawn at survival `u`.
fn neg_jump_factor(beta2: f64, u: f64) -> f64 {
    powf(u, 2.0 * beta2.abs() / (1.0 + beta2))
}

/// ℓ at survival level `u ∈ [0, 1]` for `-1 < β2 < 0`:
/// `ℓ = (h / |β2|) (1 - u^(2|β2|/(1+β2)))`, so the jump `β2 ℓ` lies in `[-h, 0]`.
pub fn jump_size_neg_from_uniform(h: f64, beta2: f64, u: f64) -> Result<f64> {
    check_level("sample_jump_size_neg", h)?;
    if !(beta2 < 0.0 && beta2 > -1.0) {
        return Err(Error::domain(
            "sample_jump_size_neg",
            format!("beta2 = {beta2} must be in (-1, 0)"),
        ));
    }
    Ok(h * (1.0 - neg_jump_factor(beta2, u)) / beta2.abs())
}

pub fn sample_jump_size_neg(h: f64, cfg: &SkewConfig, rng: &mut RngStream) -> Result<f64> {
    jump_size_neg_from_uniform(h, cfg.beta2(), rng.uniform_open_closed())
}

/// One waiting time and, unless absorbed, one jump from level `h`.
pub fn sample_jump(h: f64, cfg: &SkewConfig, rng: &mut RngStream) -> Result<JumpDraw> {
    let wait = sample_jump_time(h, cfg, rng)?;
    if wait.absorbed {
        return Ok(JumpDraw {
            waiting_time: wait.time,
            pre_jump_level: 0.0,
            ell: 0.0,
            post_jump_level: 0.0,
            absorbed: true,
        });
    }
    let pre = h * wait.level_ratio;
    let beta2 = cfg.beta2();
    let (ell, post) = if beta2 > 0.0 {
        let u = rng.uniform_closed_open();
        let factor = pos_jump_factor(beta2, u);
        (pre * (factor - 1.0) / beta2, pre * factor)
    } else {
        let u = rng.uniform_open_closed();
        let factor = neg_jump_factor(beta2, u);
        (pre * (1.0 - factor) / beta2.abs(), pre * factor)
    };
    Ok(JumpDraw {
        waiting_time: wait.time,
        pre_jump_level: pre,
        ell,
        post_jump_level: post,
        absorbed: false,
    })
}

/// Beta(a, b) draw by inversion of the regularized incomplete beta.
/// Consumes exactly one uniform, so streams stay aligned across parameters.
pub fn sample_beta(a: f64, b: f64, rng: &mut RngStream) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(
            "sample_beta",
            format!("parameters a = {a}, b = {b} must be positive"),
        ));
    }
    Ok(special::beta_quantile(a, b, rng.uniform_open()))
}

/// Exponent `(1 + |β1|) / (2|β1|)` of the local-time survival used by the
/// first stage of the NegNeg reduction.
pub fn initial_hit_exponent(beta1: f64) -> f64 {
    (1.0 + beta1.abs()) / (2.0 * beta1.abs())
}

/// `P(L > a) = (1 + |β1| a / x)^(-(1+|β1|)/(2|β1|))`: local time at 0
/// accumulated by the process started at 0 before the reflected process
/// started at `-x` reaches 0.
pub fn initial_hit_survival(cfg: &SkewConfig, a: f64) -> f64 {
    if a <= 0.0 {
        return 1.0;
    }
    let b1 = cfg.beta1().abs();
    powf(1.0 + b1 * a / cfg.x(), -initial_hit_exponent(b1))
}

/// Quantile of the first-stage local time at survival level `v ∈ (0, 1]`.
/// Returns `(L, B2)` with `B2 = (1 + |β1| L / x)^(-1) = v^(1/c)`.
pub fn initial_hit_from_uniform(cfg: &SkewConfig, v: f64) -> Result<(f64, f64)> {
    if !(cfg.beta1() < 0.0 && cfg.beta2() < 0.0) {
        return Err(Error::Regime {
            op: "sample_initial_hit_localtime",
            regime: cfg.regime().tag,
            reason: "only defined when both skewness parameters are negative",
        });
    }
    let b1 = cfg.beta1().abs();
    let c = initial_hit_exponent(b1);
    let b2 = powf(v, 1.0 / c);
    let l = cfg.x() / b1 * (1.0 / b2 - 1.0);
    Ok((l, b2))
}

pub fn sample_initial_hit_localtime(cfg: &SkewConfig, rng: &mut RngStream) -> Result<(f64, f64)> {
    initial_hit_from_uniform(cfg, rng.uniform_open_closed())
}

/// `E[ln(1 + β2 ℓ / h)]` conditional on a jump, `2β2 / (1+β2)`.
pub fn mean_log_jump(beta2: f64) -> f64 {
    2.0 * beta2 / (1.0 + beta2)
}

/// `E[β2 ℓ]` conditional on a jump from `h` (β2 > 0), `2 h β2 / (1-β2)`.
pub fn mean_jump(h: f64, beta2: f64) -> f64 {
    2.0 * h * beta2 / (1.0 - beta2)
}

#[allow(dead_code)]
fn log_jump(h: f64, beta2: f64, ell: f64) -> f64 {
    ln(1.0 + beta2 * ell / h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_to_infinity, Tolerance};
    use proptest::prelude::*;

    fn cfg(x: f64, b1: f64, b2: f64) -> SkewConfig {
        SkewConfig::new(x, b1, b2).unwrap()
    }

    #[test]
    fn jump_time_examples() {
        let w = jump_time_from_uniform(1.0, 0.5, 0.25).unwrap();
        assert!((w.time - 1.875).abs() < 1e-15);
        assert!((jump_time_survival(1.0, 0.5, w.time) - 0.25).abs() < 1e-15);
        let w = jump_time_from_uniform(1.0, 0.5, 1.0).unwrap();
        assert_eq!(w.time, 0.0);
        let w2 = jump_time_from_uniform(2.0, 0.5, 0.25).unwrap();
        assert_eq!(w2.time, 3.75);
    }

    #[test]
    fn jump_time_absorption_is_explicit() {
        let w = jump_time_from_uniform(1.0, 0.5, 0.0).unwrap();
        assert!(w.absorbed);
        assert_eq!(w.time, 2.0);
        // v so small that the jump lands within 1e-15 h of the horizon.
        let w = jump_time_from_uniform(1.0, 0.5, 1e-16).unwrap();
        assert!(w.absorbed);
        let w = jump_time_from_uniform(1.0, 0.5, 1e-6).unwrap();
        assert!(!w.absorbed && w.time < 2.0);
    }

    #[test]
    fn jump_time_domain_errors() {
        assert!(jump_time_from_uniform(0.0, 0.5, 0.5).is_err());
        assert!(jump_time_from_uniform(1.0, -0.5, 0.5).is_err());
    }

    #[test]
    fn positive_jump_examples() {
        let ell = jump_size_pos_from_uniform(1.0, 0.25, 0.5).unwrap();
        let ratio = 0.25 * ell;
        assert!((ratio - (0.5f64.powf(-0.4) - 1.0)).abs() < 1e-15);
        assert!((ratio - 0.319_507_910_772_894_3).abs() < 1e-12);
        assert!(((1.0 + ratio).powf(-2.5) - 0.5).abs() < 1e-14);
        assert_eq!(jump_size_pos_from_uniform(1.0, 0.25, 0.0).unwrap(), 0.0);
        assert!(jump_size_pos_from_uniform(1.0, -0.25, 0.5).is_err());
    }

    #[test]
    fn positive_jump_mean_by_quadrature() {
        // Oracle: mean of the jump a = β2 ℓ is ∫ P(a > s) ds over the
        // conditional tail (1 + s/h)^(1-γ).
        let (h, b2) = (1.0, 0.25);
        let gamma = (1.0 + 3.0 * b2) / (2.0 * b2);
        let mean = integrate_to_infinity(|s| (1.0 + s / h).powf(1.0 - gamma), 0.0, Tolerance::default())
            .unwrap()
            .value;
        assert!((mean - 2.0 / 3.0).abs() < 1e-10);
        assert!((mean_jump(h, b2) - mean).abs() < 1e-10);
    }

    #[test]
    fn negative_jump_examples() {
        assert_eq!(jump_size_neg_from_uniform(1.0, -0.5, 0.0).unwrap(), 2.0);
        assert_eq!(jump_size_neg_from_uniform(1.0, -0.5, 1.0).unwrap(), 0.0);
        let ell = jump_size_neg_from_uniform(1.0, -0.5, 0.5).unwrap();
        assert!((ell - 1.5).abs() < 1e-15);
        assert!((jump_size_survival(1.0, -0.5, ell) - 0.5).abs() < 1e-15);
        assert!(jump_size_neg_from_uniform(1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn initial_hit_examples() {
        let c = cfg(1.0, -0.5, -0.5);
        assert!((initial_hit_survival(&c, 2.0) - 2f64.powf(-1.5)).abs() < 1e-15);
        assert!((initial_hit_survival(&c, 2.0) - 0.353_553_390_593_273_8).abs() < 1e-15);
        assert_eq!(initial_hit_survival(&c, 0.0), 1.0);
        let (l, b2) = initial_hit_from_uniform(&c, 1.0).unwrap();
        assert_eq!((l, b2), (0.0, 1.0));
        assert!(initial_hit_from_uniform(&cfg(1.0, 0.5, -0.5), 0.5).is_err());
    }

    #[test]
    fn initial_hit_b2_mean() {
        // B2 ~ Beta(c, 1), E[B2] = c / (c + 1).
        let c = cfg(1.0, -0.25, -0.5);
        let expo = initial_hit_exponent(0.25);
        let mut rng = RngStream::new(3, 0);
        let n = 200_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let (_, b2) = sample_initial_hit_localtime(&c, &mut rng).unwrap();
            s += b2;
            s2 += b2 * b2;
        }
        let mean = s / n as f64;
        let sd = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        let want = expo / (expo + 1.0);
        assert!((mean - want).abs() < 4.0 * sd, "{mean} vs {want}");
    }

    #[test]
    fn beta_sampler_means() {
        let mut rng = RngStream::new(9, 0);
        for &(a, b) in &[(1.0, 1.0), (2.0, 0.5), (1.5, 0.5)] {
            let n = 100_000;
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let v = sample_beta(a, b, &mut rng).unwrap();
                assert!(v > 0.0 && v < 1.0);
                s += v;
                s2 += v * v;
            }
            let mean = s / n as f64;
            let sd = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
            assert!((mean - a / (a + b)).abs() < 4.0 * sd, "a={a} b={b}: {mean}");
        }
        assert!(sample_beta(0.0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn sample_jump_levels_are_consistent() {
        let c = cfg(1.0, 0.5, 0.25);
        let mut rng = RngStream::new(5, 1);
        for _ in 0..1000 {
            let d = sample_jump(1.0, &c, &mut rng).unwrap();
            assert!(!d.absorbed);
            assert!(d.waiting_time < 2.0);
            assert!((d.pre_jump_level - (1.0 - 0.5 * d.waiting_time)).abs() < 1e-14);
            assert!((d.post_jump_level - (d.pre_jump_level + 0.25 * d.ell)).abs() < 1e-12 * d.post_jump_level.max(1.0));
        }
        let c = cfg(1.0, 0.5, -0.5);
        for _ in 0..1000 {
            let d = sample_jump(1.0, &c, &mut rng).unwrap();
            assert!(d.post_jump_level > 0.0 && d.post_jump_level <= d.pre_jump_level);
            assert!(d.jump_size(-0.5) >= -d.pre_jump_level);
        }
    }

    proptest! {
        #[test]
        fn jump_time_substitutes_back(h in 1e-3f64..1e3, b1 in 0.02f64..0.98, v in 1e-6f64..1.0) {
            let w = jump_time_from_uniform(h, b1, v).unwrap();
            prop_assume!(!w.absorbed);
            // Below this the pre-jump level is lost to cancellation in t.
            prop_assume!(w.level_ratio > 1e-2);
            let s = jump_time_survival(h, b1, w.time);
            prop_assert!((s - v).abs() <= 1e-12 * v.max(1e-3), "{} vs {}", s, v);
        }

        #[test]
        fn pos_jump_substitutes_back(h in 1e-3f64..1e3, b2 in 0.02f64..0.98, u in 0.0f64..0.999) {
            let ell = jump_size_pos_from_uniform(h, b2, u).unwrap();
            let s = jump_size_survival(h, b2, ell);
            prop_assert!((s - (1.0 - u)).abs() <= 1e-12, "{} vs {}", s, 1.0 - u);
        }

        #[test]
        fn neg_jump_substitutes_back(h in 1e-3f64..1e3, b2 in -0.98f64..-0.02, u in 1e-6f64..1.0) {
            let ell = jump_size_neg_from_uniform(h, b2, u).unwrap();
            prop_assert!(ell >= 0.0 && ell <= h / b2.abs());
            prop_assume!(u.powf(2.0 * b2.abs() / (1.0 + b2)) > 1e-2);
            let s = jump_size_survival(h, b2, ell);
            prop_assert!((s - u).abs() <= 1e-12 * u.max(1e-3), "{} vs {}", s, u);
        }

        #[test]
        fn initial_hit_substitutes_back(x in 1e-2f64..1e2, b1 in -0.98f64..-0.02, b2 in -0.98f64..-0.02, v in 1e-6f64..1.0) {
            let c = cfg(x, b1, b2);
            let (l, _) = initial_hit_from_uniform(&c, v).unwrap();
            prop_assert!((initial_hit_survival(&c, l) - v).abs() <= 1e-12 * v.max(1e-3));
        }
    }
}
