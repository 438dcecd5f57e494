//! Exact event-driven simulation of the gap process on the local-time clock.
//!
//! From level `h` the gap drifts down at rate `β1` until either it reaches
//! zero (the processes meet) or a jump occurs; a jump moves the level by
//! `β2 · ℓ`. The local time at which the level reaches zero is `U⋆`.

use alloc::vec::Vec;

use crate::config::{RegimeTag, SkewConfig};
use crate::error::{Error, Result};
use crate::math::ln;
use crate::rng::RngStream;
use crate::samplers;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSettings {
    /// Levels below `eps` are finished deterministically with `h / β1`.
    pub eps: f64,
    /// Jump budget; hitting it marks the sample censored.
    pub max_jumps: u64,
    /// Keep the per-jump event list.
    pub record_events: bool,
}

impl Default for ChainSettings {
    fn default() -> Self {
        ChainSettings {
            eps: 1e-9,
            max_jumps: 100_000,
            record_events: false,
        }
    }
}

impl ChainSettings {
    pub fn new(eps: f64, max_jumps: u64) -> Self {
        ChainSettings {
            eps,
            max_jumps,
            record_events: false,
        }
    }

    pub fn recording(mut self) -> Self {
        self.record_events = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainEvent {
    /// Local time of the jump.
    pub local_time: f64,
    pub pre_jump_level: f64,
    pub ell: f64,
    pub post_jump_level: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HittingSample {
    pub u_star: f64,
    pub censored: bool,
    pub jump_count: u64,
    /// Local time at zero of the second process at the meeting time,
    /// `(β1 U⋆ - x) / β2`.
    pub second_local_time: f64,
    pub truncation_level: f64,
    /// Finished by the `eps` rule rather than by absorption.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainTrajectory {
    pub events: Vec<ChainEvent>,
    pub result: HittingSample,
    /// `Σ ℓ` over all jumps.
    pub ell_sum: f64,
    /// Level when the run stopped (0 if absorbed).
    pub final_level: f64,
}

impl ChainTrajectory {
    /// `x - β1 U⋆ + β2 Σℓ`, zero up to rounding for an uncensored run.
    pub fn balance(&self, cfg: &SkewConfig) -> f64 {
        cfg.x() - cfg.beta1() * self.result.u_star + cfg.beta2() * self.ell_sum
    }
}

fn check_settings(cfg: &SkewConfig, settings: &ChainSettings) -> Result<()> {
    if !(settings.eps > 0.0 && settings.eps.is_finite()) {
        return Err(Error::domain(
            "run_chain",
            alloc::format!("eps = {} must be positive", settings.eps),
        ));
    }
    if settings.eps >= cfg.x() {
        return Err(Error::domain(
            "run_chain",
            alloc::format!("eps = {} must be below x = {}", settings.eps, cfg.x()),
        ));
    }
    Ok(())
}

fn require_positive_drift(cfg: &SkewConfig, op: &'static str) -> Result<()> {
    if cfg.beta1() > 0.0 {
        return Ok(());
    }
    let tag = cfg.regime().tag;
    Err(Error::Regime {
        op,
        regime: tag,
        reason: if tag == RegimeTag::NegPos {
            "the processes never meet: T* is infinite almost surely"
        } else {
            "the jump chain needs beta1 > 0; use run_negneg for two negative parameters"
        },
    })
}

/// Run the chain from gap `x` until absorption, truncation or censoring.
pub fn run_chain(
    cfg: &SkewConfig,
    rng: &mut RngStream,
    settings: &ChainSettings,
) -> Result<ChainTrajectory> {
    require_positive_drift(cfg, "run_chain")?;
    check_settings(cfg, settings)?;
    let (x, beta1, beta2) = (cfg.x(), cfg.beta1(), cfg.beta2());
    let mut events = Vec::new();
    let mut h = x;
    let mut t = 0.0;
    let mut jumps = 0u64;
    let mut ell_sum = 0.0;
    let (u_star, censored, truncated, final_level) = loop {
        if h < settings.eps {
            break (t + h / beta1, false, true, h);
        }
        if jumps >= settings.max_jumps {
            break (t + h / beta1, true, false, h);
        }
        let d = samplers::sample_jump(h, cfg, rng)?;
        if d.absorbed {
            break (t + d.waiting_time, false, false, 0.0);
        }
        t += d.waiting_time;
        ell_sum += d.ell;
        jumps += 1;
        h = d.post_jump_level;
        if settings.record_events {
            events.push(ChainEvent {
                local_time: t,
                pre_jump_level: d.pre_jump_level,
                ell: d.ell,
                post_jump_level: h,
            });
        }
    };
    Ok(ChainTrajectory {
        events,
        result: HittingSample {
            u_star,
            censored,
            jump_count: jumps,
            second_local_time: (beta1 * u_star - x) / beta2,
            truncation_level: settings.eps,
            truncated,
        },
        ell_sum,
        final_level,
    })
}

/// One hitting sample on stream `(seed, index)`.
pub fn hitting_sample(
    cfg: &SkewConfig,
    settings: &ChainSettings,
    seed: u64,
    index: u64,
) -> Result<HittingSample> {
    let mut rng = RngStream::new(seed, index);
    let s = ChainSettings {
        record_events: false,
        ..*settings
    };
    Ok(run_chain(cfg, &mut rng, &s)?.result)
}

/// Two-stage sample for two negative skewness parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegNegSample {
    /// Run of the exchanged-parameter chain from gap `x + |β1| L0`.
    pub hitting: HittingSample,
    /// First-stage local time `L0`.
    pub initial_local_time: f64,
    /// Local time at zero of the process started at 0 when the two meet.
    pub local_time: f64,
    /// `(1 + |β1| L / x)^(-1)`, distributed as a product of two Betas.
    pub product: f64,
}

/// The parameters of the second stage: gap `x_start`, drift side `|β2|`,
/// jump side `|β1|`.
pub fn exchanged_config(cfg: &SkewConfig, x_start: f64) -> Result<SkewConfig> {
    SkewConfig::new(x_start, cfg.beta2().abs(), cfg.beta1().abs())
}

fn require_negneg(cfg: &SkewConfig) -> Result<()> {
    let regime = cfg.regime();
    if regime.tag != RegimeTag::NegNeg {
        return Err(Error::Regime {
            op: "run_negneg",
            regime: regime.tag,
            reason: "requires both skewness parameters negative",
        });
    }
    if !regime.coalescence_condition {
        return Err(Error::Regime {
            op: "run_negneg",
            regime: regime.tag,
            reason: "coalescence condition |beta2| > |beta1| / (1 + 2|beta1|) fails",
        });
    }
    Ok(())
}

/// Second stage from a given first-stage local time `l0`.
pub fn run_negneg_from(
    cfg: &SkewConfig,
    l0: f64,
    rng: &mut RngStream,
    settings: &ChainSettings,
) -> Result<NegNegSample> {
    require_negneg(cfg)?;
    if !(l0 >= 0.0 && l0.is_finite()) {
        return Err(Error::domain(
            "run_negneg",
            alloc::format!("first-stage local time {l0} must be finite and >= 0"),
        ));
    }
    let (x, b1, b2) = (cfg.x(), cfg.beta1().abs(), cfg.beta2().abs());
    let start = x + b1 * l0;
    let exchanged = exchanged_config(cfg, start)?;
    let traj = run_chain(&exchanged, rng, settings)?;
    let u = traj.result.u_star;
    Ok(NegNegSample {
        hitting: traj.result,
        initial_local_time: l0,
        local_time: (b2 * u - x) / b1,
        product: x / (b2 * u),
    })
}

pub fn run_negneg(
    cfg: &SkewConfig,
    rng: &mut RngStream,
    settings: &ChainSettings,
) -> Result<NegNegSample> {
    require_negneg(cfg)?;
    let (l0, _) = samplers::sample_initial_hit_localtime(cfg, rng)?;
    run_negneg_from(cfg, l0, rng, settings)
}

/// Log-level increment over a fixed additive-functional clock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDriftSample {
    /// `ln Z - ln x` at the stopping point.
    pub log_ratio: f64,
    /// Clock value reached; equals the target unless censored.
    pub clock: f64,
    pub censored: bool,
}

/// Run the chain until `∫ du / Z_u` reaches `clock`.
///
/// On a drift segment from `h` to `p` the clock advances by
/// `ln(h / p) / β1`, which is infinite at absorption, so every run that is
/// not censored stops exactly at the target.
pub fn log_drift_path(
    cfg: &SkewConfig,
    clock: f64,
    rng: &mut RngStream,
    max_jumps: u64,
) -> Result<LogDriftSample> {
    require_positive_drift(cfg, "log_drift_path")?;
    if !(clock > 0.0 && clock.is_finite()) {
        return Err(Error::domain(
            "log_drift_path",
            alloc::format!("clock {clock} must be positive"),
        ));
    }
    let beta1 = cfg.beta1();
    let h = 1.0;
    let mut log_level = 0.0;
    let mut used = 0.0;
    for _ in 0..max_jumps {
        let d = samplers::sample_jump(h, cfg, rng)?;
        let remaining = clock - used;
        let seg = if d.absorbed {
            f64::INFINITY
        } else {
            ln(h / d.pre_jump_level) / beta1
        };
        if seg >= remaining {
            return Ok(LogDriftSample {
                log_ratio: log_level - beta1 * remaining,
                clock,
                censored: false,
            });
        }
        used += seg;
        // The law is scale free, so the working level stays at 1 and only
        // the logarithm is carried.
        log_level += ln(d.post_jump_level / h);
    }
    Ok(LogDriftSample {
        log_ratio: log_level,
        clock: used,
        censored: true,
    })
}

/// Mean of `(ln Z - ln x) / clock` over uncensored samples; estimates θ.
pub fn log_drift_diagnostic(samples: &[LogDriftSample]) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for s in samples.iter().filter(|s| !s.censored) {
        sum += s.log_ratio / s.clock;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    Ok(sum / n as f64)
}
