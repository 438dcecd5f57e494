//! Mollified-drift Euler scheme for the coupled pair driven by one Brownian
//! path.
//!
//! A skew Brownian motion with parameter `β` is approximated by
//! `dX = c n φ(n X) dt + dW`, `c = ½ ln((1+β)/(1-β))`, with the triangular
//! bump `φ(y) = 4(½ - |y|)` on `[-½, ½]`. Local time at zero is estimated by
//! occupation of `[-bw, bw]` divided by `2 bw`.
//!
//! Accuracy is far below the exact chain; use it as a cross-check.

use alloc::vec::Vec;

use crate::config::SkewConfig;
use crate::error::{Error, Result};
use crate::math::{ln, sqrt};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerConfig {
    pub dt: f64,
    /// Mollifier scale `n`; the drift lives on `[-1/(2n), 1/(2n)]`.
    pub mollifier_scale: u32,
    pub horizon: f64,
    pub meeting_delta: f64,
    pub local_time_bandwidth: f64,
}

impl Default for EulerConfig {
    fn default() -> Self {
        EulerConfig::with_resolution(1e-4, 100, 100.0)
    }
}

impl EulerConfig {
    /// Step `dt`, scale `n`, and the dependent defaults: meeting tolerance
    /// `1/n` and bandwidth `5 sqrt(dt)`.
    pub fn with_resolution(dt: f64, n: u32, horizon: f64) -> Self {
        EulerConfig {
            dt,
            mollifier_scale: n,
            horizon,
            meeting_delta: 1.0 / n as f64,
            local_time_bandwidth: 5.0 * sqrt(dt),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.dt > 0.0
            && self.mollifier_scale > 0
            && self.horizon > 0.0
            && self.meeting_delta > 0.0
            && self.local_time_bandwidth > 0.0
            && self.horizon.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::domain("euler_config", alloc::format!("{self:?}")))
        }
    }

    /// `dt n² > 0.1`: the mollified drift is crossed in too few steps.
    pub fn stability_warning(&self) -> bool {
        let n = self.mollifier_scale as f64;
        self.dt * n * n > 0.1
    }

    pub fn steps(&self) -> u64 {
        libm::ceil(self.horizon / self.dt) as u64
    }
}

/// Drift coefficient `½ ln((1+β)/(1-β))`.
pub fn drift_coefficient(beta: f64) -> f64 {
    0.5 * ln((1.0 + beta) / (1.0 - beta))
}

#[inline]
fn mollified_drift(c: f64, n: f64, x: f64) -> f64 {
    let y = n * x;
    let a = if y < 0.0 { -y } else { y };
    if a >= 0.5 {
        0.0
    } else {
        c * n * 4.0 * (0.5 - a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEstimate {
    /// Meeting time, `None` when the horizon ran out.
    pub t_star: Option<f64>,
    /// Occupation estimate of the local time at 0 of the process started at
    /// 0, up to the meeting time (or the horizon).
    pub u_star_path: f64,
    /// The same local time read off the drift: `(X⁰ - W) / β1`.
    pub u_star_drift: f64,
    /// `u_star_drift` plus the residual gap over `β1`, which removes the
    /// meeting tolerance from the estimate.
    pub u_star_corrected: f64,
    /// `X^x - X⁰` when the run stopped.
    pub final_gap: f64,
    pub hit: bool,
}

/// State of one discretisation level of the pair.
struct PairLevel {
    c0: f64,
    c1: f64,
    n: f64,
    dt: f64,
    sqrt_ratio: f64,
    stride: u64,
    delta: f64,
    bw: f64,
    x0: f64,
    x1: f64,
    occupation: u64,
    drift_sum: f64,
    beta1: f64,
    steps: u64,
    max_steps: u64,
    done: Option<PathEstimate>,
    acc: f64,
}

impl PairLevel {
    fn new(cfg: &SkewConfig, e: &EulerConfig, stride: u64, fine_dt: f64) -> Self {
        PairLevel {
            c0: drift_coefficient(cfg.beta1()),
            c1: drift_coefficient(cfg.beta2()),
            n: e.mollifier_scale as f64,
            dt: e.dt,
            sqrt_ratio: sqrt(fine_dt),
            stride,
            delta: e.meeting_delta,
            bw: e.local_time_bandwidth,
            x0: 0.0,
            x1: cfg.x(),
            occupation: 0,
            drift_sum: 0.0,
            beta1: cfg.beta1(),
            steps: 0,
            max_steps: e.steps(),
            done: None,
            acc: 0.0,
        }
    }

    fn local_time(&self) -> f64 {
        self.dt * self.occupation as f64 / (2.0 * self.bw)
    }

    fn check_meeting(&mut self) {
        if self.x1 - self.x0 <= self.delta && self.x0.abs() <= self.delta {
            self.done = Some(PathEstimate {
                t_star: Some(self.steps as f64 * self.dt),
                u_star_path: self.local_time(),
                u_star_drift: self.drift_sum / self.beta1,
                u_star_corrected: (self.drift_sum + self.x1 - self.x0) / self.beta1,
                final_gap: self.x1 - self.x0,
                hit: true,
            });
        }
    }

    /// Feed one fine standard normal; steps when a block completes.
    fn feed(&mut self, z: f64, fine_index: u64) {
        self.acc += z;
        if !(fine_index + 1).is_multiple_of(self.stride) {
            return;
        }
        let dw = self.acc * self.sqrt_ratio;
        self.acc = 0.0;
        let d0 = mollified_drift(self.c0, self.n, self.x0);
        let d1 = mollified_drift(self.c1, self.n, self.x1);
        self.x0 += d0 * self.dt + dw;
        self.drift_sum += d0 * self.dt;
        self.x1 += d1 * self.dt + dw;
        self.steps += 1;
        if self.x0.abs() <= self.bw {
            self.occupation += 1;
        }
        self.check_meeting();
        if self.done.is_none() && self.steps >= self.max_steps {
            self.done = Some(PathEstimate {
                t_star: None,
                u_star_path: self.local_time(),
                u_star_drift: self.drift_sum / self.beta1,
                u_star_corrected: (self.drift_sum + self.x1 - self.x0) / self.beta1,
                final_gap: self.x1 - self.x0,
                hit: false,
            });
        }
    }
}

fn level_strides(levels: &[EulerConfig]) -> Result<(f64, Vec<u64>)> {
    let fine = levels
        .iter()
        .map(|e| e.dt)
        .fold(f64::INFINITY, f64::min);
    let mut strides = Vec::with_capacity(levels.len());
    for e in levels {
        e.validate()?;
        let r = e.dt / fine;
        let k = libm::round(r);
        if (r - k).abs() > 1e-9 * r {
            return Err(Error::domain(
                "simulate_pair_levels",
                alloc::format!("dt = {} is not a multiple of the finest step {fine}", e.dt),
            ));
        }
        strides.push(k as u64);
    }
    Ok((fine, strides))
}

/// Simulate the pair at several resolutions on one Brownian path: each
/// coarse increment is the sum of the fine increments it covers.
pub fn simulate_pair_levels(
    cfg: &SkewConfig,
    levels: &[EulerConfig],
    rng: &mut RngStream,
) -> Result<Vec<PathEstimate>> {
    let (fine, strides) = level_strides(levels)?;
    let mut state: Vec<PairLevel> = levels
        .iter()
        .zip(&strides)
        .map(|(e, &k)| PairLevel::new(cfg, e, k, fine))
        .collect();
    for s in state.iter_mut() {
        s.check_meeting();
    }
    let mut i = 0u64;
    while state.iter().any(|s| s.done.is_none()) {
        let z = rng.standard_normal();
        for s in state.iter_mut().filter(|s| s.done.is_none()) {
            s.feed(z, i);
        }
        i += 1;
    }
    Ok(state.into_iter().map(|s| s.done.unwrap()).collect())
}

pub fn simulate_pair(cfg: &SkewConfig, ecfg: &EulerConfig, rng: &mut RngStream) -> Result<PathEstimate> {
    Ok(simulate_pair_levels(cfg, core::slice::from_ref(ecfg), rng)?[0])
}

/// Refinement ladder ending at `finest`: each coarser level doubles `dt`
/// and halves `n`.
pub fn refinement_ladder(finest: &EulerConfig, levels: usize) -> Vec<EulerConfig> {
    let mut out = Vec::with_capacity(levels);
    for k in (0..levels).rev() {
        let f = (1u32 << k) as f64;
        out.push(EulerConfig::with_resolution(
            finest.dt * f,
            (finest.mollifier_scale >> k).max(1),
            finest.horizon,
        ));
    }
    out
}

/// One mollified skew path on given standard normals (increments are
/// `sqrt(dt) z`), started at `x`.
pub fn euler_path(x: f64, beta: f64, ecfg: &EulerConfig, normals: &[f64]) -> Vec<f64> {
    let c = drift_coefficient(beta);
    let n = ecfg.mollifier_scale as f64;
    let sd = sqrt(ecfg.dt);
    let mut out = Vec::with_capacity(normals.len() + 1);
    let mut v = x;
    out.push(v);
    for &z in normals {
        v += mollified_drift(c, n, v) * ecfg.dt + sd * z;
        out.push(v);
    }
    out
}

/// One path of the local-time survival experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalTimePath {
    /// Occupation estimate of the local time at 0 when the run stopped.
    pub local_time: f64,
    /// The driving Brownian motion reached `h`.
    pub reached: bool,
    /// Stopped because the local time exceeded `stop_above`.
    pub saturated: bool,
}

impl LocalTimePath {
    /// `Some(L > a)` when the path decides it, `None` if censored.
    pub fn exceeds(&self, a: f64) -> Option<bool> {
        if self.local_time > a {
            Some(true)
        } else if self.reached {
            Some(false)
        } else {
            None
        }
    }
}

/// Mollified skew-`β2` process from 0 driven by `W`, run until `W` reaches
/// `h`; the local time at 0 is the quantity whose survival is
/// `(1 + β2 a / h)^(-(1+β2)/(2β2))`. Runs stop early once the local time
/// passes `stop_above`, since larger values no longer change any query.
pub fn localtime_path(
    h: f64,
    beta2: f64,
    ecfg: &EulerConfig,
    stop_above: f64,
    rng: &mut RngStream,
) -> Result<LocalTimePath> {
    ecfg.validate()?;
    if !(h > 0.0) || !(beta2.abs() < 1.0) {
        return Err(Error::domain(
            "localtime_path",
            alloc::format!("h = {h}, beta2 = {beta2}"),
        ));
    }
    let c = drift_coefficient(beta2);
    let n = ecfg.mollifier_scale as f64;
    let sd = sqrt(ecfg.dt);
    let per_step = ecfg.dt / (2.0 * ecfg.local_time_bandwidth);
    let (mut x, mut w) = (0.0, 0.0);
    let mut occupation = 0u64;
    let max_steps = ecfg.steps();
    for _ in 0..max_steps {
        let dw = sd * rng.standard_normal();
        x += mollified_drift(c, n, x) * ecfg.dt + dw;
        w += dw;
        if x.abs() <= ecfg.local_time_bandwidth {
            occupation += 1;
        }
        let lt = per_step * occupation as f64;
        if w >= h {
            return Ok(LocalTimePath { local_time: lt, reached: true, saturated: false });
        }
        if lt > stop_above {
            return Ok(LocalTimePath { local_time: lt, reached: false, saturated: true });
        }
    }
    Ok(LocalTimePath {
        local_time: per_step * occupation as f64,
        reached: false,
        saturated: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalEstimate {
    pub queries: Vec<f64>,
    /// Fraction of decided paths with `L > a`, per query.
    pub survival: Vec<f64>,
    /// Paths left undecided by the horizon, per query.
    pub censored: Vec<usize>,
    pub paths: usize,
}

/// Empirical `P(L > a)` from simulated paths.
pub fn survival_from_paths(paths: &[LocalTimePath], queries: &[f64]) -> Result<SurvivalEstimate> {
    if paths.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut survival = Vec::with_capacity(queries.len());
    let mut censored = Vec::with_capacity(queries.len());
    for &a in queries {
        let (mut yes, mut decided, mut undecided) = (0usize, 0usize, 0usize);
        for p in paths {
            match p.exceeds(a) {
                Some(v) => {
                    decided += 1;
                    yes += usize::from(v);
                }
                None => undecided += 1,
            }
        }
        survival.push(if a <= 0.0 {
            1.0
        } else if decided == 0 {
            f64::NAN
        } else {
            yes as f64 / decided as f64
        });
        censored.push(undecided);
    }
    Ok(SurvivalEstimate {
        queries: queries.to_vec(),
        survival,
        censored,
        paths: paths.len(),
    })
}

/// Sequential version of the experiment on streams `0..n` of `seed`.
pub fn localtime_survival_empirical(
    h: f64,
    beta2: f64,
    ecfg: &EulerConfig,
    seed: u64,
    n: usize,
    queries: &[f64],
) -> Result<SurvivalEstimate> {
    let top = queries.iter().cloned().fold(0.0, f64::max);
    let paths = (0..n as u64)
        .map(|i| localtime_path(h, beta2, ecfg, top, &mut RngStream::new(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    survival_from_paths(&paths, queries)
}

/// Cumulative meeting fraction by each horizon and the conditional
/// meeting rate per unit time inside each window.
#[derive(Debug, Clone, PartialEq)]
pub struct HitProfile {
    pub horizons: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub hazard: Vec<f64>,
}

pub fn hit_profile(paths: &[PathEstimate], horizons: &[f64]) -> Result<HitProfile> {
    if paths.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = paths.len() as f64;
    let mut cumulative = Vec::with_capacity(horizons.len());
    let mut hazard = Vec::with_capacity(horizons.len());
    let (mut prev_h, mut prev_hits) = (0.0, 0usize);
    for &h in horizons {
        let hits = paths
            .iter()
            .filter(|p| p.t_star.is_some_and(|t| t <= h))
            .count();
        cumulative.push(hits as f64 / n);
        let at_risk = paths.len() - prev_hits;
        hazard.push(if at_risk == 0 || h <= prev_h {
            0.0
        } else {
            (hits - prev_hits) as f64 / (at_risk as f64 * (h - prev_h))
        });
        prev_h = h;
        prev_hits = hits;
    }
    Ok(HitProfile {
        horizons: horizons.to_vec(),
        cumulative,
        hazard,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(x: f64, b1: f64, b2: f64) -> SkewConfig {
        SkewConfig::new(x, b1, b2).unwrap()
    }

    #[test]
    fn defaults() {
        let e = EulerConfig::default();
        assert_eq!(e.mollifier_scale, 100);
        assert!((e.local_time_bandwidth - 0.05).abs() < 1e-15);
        assert!((e.meeting_delta - 0.01).abs() < 1e-15);
        assert!(e.stability_warning());
        assert!(!EulerConfig::with_resolution(1e-6, 100, 1.0).stability_warning());
        assert!(EulerConfig { dt: 0.0, ..e }.validate().is_err());
    }

    #[test]
    fn drift_coefficient_and_bump() {
        assert!((drift_coefficient(0.5) - 0.5 * 3f64.ln()).abs() < 1e-15);
        // Unit mass: ∫ n φ(n x) dx = 1.
        let n = 100.0;
        let m = 200_000;
        let h = 1.0 / (n * m as f64);
        let mass: f64 = (0..m)
            .map(|i| mollified_drift(1.0, n, -0.5 / n + (i as f64 + 0.5) * h) * h)
            .sum();
        assert!((mass - 1.0).abs() < 1e-8);
        assert_eq!(mollified_drift(1.0, n, 0.006), 0.0);
    }

    #[test]
    fn immediate_meeting() {
        let e = EulerConfig::default();
        let c = cfg(e.meeting_delta, 0.5, 0.25);
        let p = simulate_pair(&c, &e, &mut RngStream::new(1, 0)).unwrap();
        assert!(p.hit);
        assert_eq!(p.t_star, Some(0.0));
        assert_eq!(p.u_star_path, 0.0);
    }

    #[test]
    fn horizon_exhaustion_is_censored() {
        let e = EulerConfig::with_resolution(1e-3, 10, 0.01);
        let p = simulate_pair(&cfg(1.0, 0.5, 0.25), &e, &mut RngStream::new(1, 0)).unwrap();
        assert!(!p.hit && p.t_star.is_none());
        assert!(p.u_star_path >= 0.0);
    }

    #[test]
    fn comparison_property() {
        let e = EulerConfig::with_resolution(1e-4, 100, 2.0);
        for seed in 0..20 {
            let mut rng = RngStream::new(seed, 0);
            let z: Vec<f64> = (0..20_000).map(|_| rng.standard_normal()).collect();
            let lo = euler_path(0.3, -0.2, &e, &z);
            let hi = euler_path(0.3, 0.6, &e, &z);
            let slack = 3.0 * e.dt.sqrt();
            assert!(lo.iter().zip(&hi).all(|(a, b)| *b >= *a - slack));
        }
    }

    #[test]
    fn zero_skew_is_brownian() {
        let e = EulerConfig::with_resolution(1e-3, 100, 1.0);
        let n = 4000;
        let finals: Vec<f64> = (0..n)
            .map(|i| {
                let mut rng = RngStream::new(77, i);
                let z: Vec<f64> = (0..1000).map(|_| rng.standard_normal()).collect();
                *euler_path(0.0, 1e-12, &e, &z).last().unwrap()
            })
            .collect();
        let mean = finals.iter().sum::<f64>() / n as f64;
        let var = finals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 4.0 * (1.0 / n as f64).sqrt());
        // SE of the sample variance of N(0,1) is sqrt(2/(n-1)).
        assert!((var - 1.0).abs() < 4.0 * (2.0 / (n - 1) as f64).sqrt());
    }

    #[test]
    fn levels_share_noise() {
        let finest = EulerConfig::with_resolution(1e-4, 100, 0.5);
        let ladder = refinement_ladder(&finest, 3);
        assert_eq!(ladder[0].mollifier_scale, 25);
        assert!((ladder[0].dt - 4e-4).abs() < 1e-18);
        let c = cfg(1.0, 0.5, 0.25);
        let all = simulate_pair_levels(&c, &ladder, &mut RngStream::new(3, 9)).unwrap();
        let single = simulate_pair(&c, &ladder[2], &mut RngStream::new(3, 9)).unwrap();
        assert_eq!(all[2], single);
        let bad = [EulerConfig::with_resolution(1e-4, 10, 1.0), EulerConfig::with_resolution(1.5e-4, 10, 1.0)];
        assert!(simulate_pair_levels(&c, &bad, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn survival_bookkeeping() {
        let paths = [
            LocalTimePath { local_time: 3.0, reached: false, saturated: true },
            LocalTimePath { local_time: 0.5, reached: true, saturated: false },
            LocalTimePath { local_time: 0.7, reached: false, saturated: false },
        ];
        let s = survival_from_paths(&paths, &[0.0, 0.6, 1.0]).unwrap();
        assert_eq!(s.survival[0], 1.0);
        assert_eq!(s.survival[1], 2.0 / 3.0);
        assert_eq!(s.survival[2], 0.5);
        assert_eq!(s.censored, [0, 0, 1]);
        assert!(survival_from_paths(&[], &[1.0]).is_err());
    }

    #[test]
    fn localtime_negative_skew_support() {
        // L cannot exceed h/|β2| = 2 in the limit; the scheme gives a small
        // mass just below and almost nothing above.
        let e = EulerConfig::with_resolution(1e-4, 100, 50.0);
        let s = localtime_survival_empirical(1.0, -0.5, &e, 5, 300, &[0.0, 1.8, 2.4]).unwrap();
        assert_eq!(s.survival[0], 1.0);
        assert!(s.survival[1] < 0.3);
        assert!(s.survival[2] < 0.05);
    }

    #[test]
    fn hit_profile_counts() {
        let p = |t: Option<f64>| PathEstimate {
            t_star: t,
            u_star_path: 0.0,
            u_star_drift: 0.0,
            u_star_corrected: 0.0,
            final_gap: 0.0,
            hit: t.is_some(),
        };
        let paths = [p(Some(1.0)), p(Some(3.0)), p(None), p(None)];
        let prof = hit_profile(&paths, &[2.0, 4.0]).unwrap();
        assert_eq!(prof.cumulative, [0.25, 0.5]);
        assert!((prof.hazard[0] - 0.125).abs() < 1e-15);
        assert!((prof.hazard[1] - 1.0 / 6.0).abs() < 1e-15);
    }
}
