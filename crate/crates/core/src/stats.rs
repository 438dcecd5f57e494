//! Empirical distributions, Kolmogorov-Smirnov distances with DKW bounds,
//! and moment checks.
//!
//! Every reduction sorts first and then sums pairwise, so results do not
//! depend on sample order or on how shards were split.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{ln, sqrt};

/// Default allowance added to the DKW bound for ε-truncation bias.
pub const DEFAULT_BIAS_ALLOWANCE: f64 = 0.002;

/// `sqrt(ln(2/α) / (2n))`: with probability `1 - α` the KS distance of `n`
/// exact draws stays below this.
pub fn dkw_bound(n: usize, alpha: f64) -> f64 {
    sqrt(ln(2.0 / alpha) / (2.0 * n as f64))
}

pub fn dkw99(n: usize) -> f64 {
    dkw_bound(n, 0.01)
}

/// Pairwise (cascade) summation over a fixed split, so the result depends
/// only on the order of `v`.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        let mut s = 0.0;
        for &x in v {
            s += x;
        }
        return s;
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Exact one-sample KS statistic of sorted samples against `cdf`.
pub fn ks_sorted<F: FnMut(f64) -> f64>(sorted: &[f64], mut cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    d.clamp(0.0, 1.0)
}

pub fn ks_statistic<F: FnMut(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(ks_sorted(&sorted(samples), cdf))
}

/// KS distance between the Kaplan-Meier estimate and `cdf`, for
/// right-censored observations `(value, censored)`. A censored value is a
/// lower bound. The supremum is taken over the range where the estimate is
/// defined, that is up to the largest uncensored value.
pub fn ks_kaplan_meier<F: FnMut(f64) -> f64>(observations: &[(f64, bool)], mut cdf: F) -> Result<f64> {
    if !observations.iter().any(|o| !o.1) {
        return Err(Error::EmptySample);
    }
    let mut obs = observations.to_vec();
    // Events before censorings at equal values: a path censored at `t` was
    // still at risk at `t`.
    obs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut at_risk = obs.len() as f64;
    let mut surv = 1.0;
    let mut d: f64 = 0.0;
    for &(v, censored) in &obs {
        if !censored {
            let f = cdf(v);
            let before = 1.0 - surv;
            surv *= 1.0 - 1.0 / at_risk;
            let after = 1.0 - surv;
            d = d.max((f - before).abs()).max((after - f).abs());
        }
        at_risk -= 1.0;
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Raw moment estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub order: u32,
    pub mean: f64,
    pub std_error: f64,
}

fn moment_of_sorted(sorted: &[f64], k: u32) -> MomentEstimate {
    let n = sorted.len() as f64;
    let pw: Vec<f64> = sorted.iter().map(|&x| powi(x, k)).collect();
    let mean = pairwise_sum(&pw) / n;
    let sq: Vec<f64> = pw.iter().map(|&p| (p - mean) * (p - mean)).collect();
    let var = if sorted.len() > 1 {
        pairwise_sum(&sq) / (n - 1.0)
    } else {
        0.0
    };
    MomentEstimate {
        order: k,
        mean,
        std_error: sqrt(var / n),
    }
}

fn powi(x: f64, k: u32) -> f64 {
    let mut r = 1.0;
    for _ in 0..k {
        r *= x;
    }
    r
}

pub fn moment(samples: &[f64], k: u32) -> Result<MomentEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(moment_of_sorted(&sorted(samples), k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSummary {
    pub n: usize,
    pub sorted: Vec<f64>,
    pub ks: f64,
    pub dkw99: f64,
    pub bias_allowance: f64,
    pub pass: bool,
    pub moments: [MomentEstimate; 2],
    pub censored_fraction: f64,
}

/// KS comparison of uncensored samples against `cdf`; passes when
/// `ks <= dkw99 + bias_allowance`.
pub fn ks_against<F: FnMut(f64) -> f64>(
    cdf: F,
    samples: &[f64],
    censored: usize,
    bias_allowance: f64,
) -> Result<EmpiricalSummary> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let s = sorted(samples);
    let ks = ks_sorted(&s, cdf);
    let n = s.len();
    let dkw = dkw99(n);
    Ok(EmpiricalSummary {
        n,
        ks,
        dkw99: dkw,
        bias_allowance,
        pass: ks <= dkw + bias_allowance,
        moments: [moment_of_sorted(&s, 1), moment_of_sorted(&s, 2)],
        censored_fraction: censored as f64 / (n + censored) as f64,
        sorted: s,
    })
}

/// Samples from one worker, to be merged before any statistic is taken.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Shard {
    pub samples: Vec<f64>,
    pub censored: usize,
}

impl Shard {
    pub fn push(&mut self, value: f64, censored: bool) {
        if censored {
            self.censored += 1;
        } else {
            self.samples.push(value);
        }
    }

    pub fn merge(mut self, other: Shard) -> Shard {
        self.samples.extend(other.samples);
        self.censored += other.censored;
        self
    }

    pub fn summarize<F: FnMut(f64) -> f64>(&self, cdf: F, bias_allowance: f64) -> Result<EmpiricalSummary> {
        ks_against(cdf, &self.samples, self.censored, bias_allowance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub order: u32,
    pub empirical: f64,
    pub analytic: f64,
    pub std_error: f64,
    pub pass: bool,
}

/// `|empirical - analytic| <= 4 SE` for the moment of order `k` (1 or 2).
/// `analytic` is the result of a moment formula; an infinite-moment error is
/// passed through as the refusal.
pub fn moment_check(samples: &[f64], analytic: Result<f64>, k: u32) -> Result<MomentRow> {
    if !(1..=2).contains(&k) {
        return Err(Error::domain(
            "moment_check",
            alloc::format!("order {k} must be 1 or 2"),
        ));
    }
    let analytic = analytic?;
    let m = moment(samples, k)?;
    Ok(MomentRow {
        order: k,
        empirical: m.mean,
        analytic,
        std_error: m.std_error,
        pass: (m.mean - analytic).abs() <= 4.0 * m.std_error,
    })
}

/// Mean of `f` over samples with its standard error.
pub fn mean_with_error<F: Fn(f64) -> f64>(samples: &[f64], f: F) -> Result<MomentEstimate> {
    let mapped: Vec<f64> = samples.iter().map(|&x| f(x)).collect();
    moment(&mapped, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::localtime_survival;
    use crate::rng::RngStream;
    use crate::samplers::jump_size_pos_from_uniform;
    use proptest::prelude::*;

    #[test]
    fn dkw_values() {
        for &n in &[1_000usize, 10_000, 100_000] {
            let direct = ((2.0f64 / 0.01).ln() / (2.0 * n as f64)).sqrt();
            assert!((dkw99(n) - direct).abs() < 1e-16);
        }
        assert!((dkw99(100_000) - 0.005_146_6).abs() < 1e-6);
        assert!((dkw99(1000) / dkw99(100_000) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn exact_draws_pass_most_trials() {
        // ℓ from the positive jump law; its CDF is 1 - survival.
        let n = 100_000;
        let mut passes = 0;
        for trial in 0..100 {
            let mut rng = RngStream::new(3, trial);
            let s: Vec<f64> = (0..n)
                .map(|_| jump_size_pos_from_uniform(1.0, 0.25, rng.uniform_closed_open()).unwrap())
                .collect();
            let r = ks_against(|a| 1.0 - localtime_survival(1.0, 0.25, a), &s, 0, 0.0).unwrap();
            passes += usize::from(r.pass);
        }
        assert!(passes >= 98, "{passes}/100");
    }

    #[test]
    fn kaplan_meier_without_censoring_is_plain_ks() {
        let v = [0.1, 0.5, 0.35, 0.9, 0.72];
        let obs: Vec<(f64, bool)> = v.iter().map(|&x| (x, false)).collect();
        let cdf = |x: f64| x.clamp(0.0, 1.0);
        let km = ks_kaplan_meier(&obs, cdf).unwrap();
        assert!((km - ks_statistic(&v, cdf).unwrap()).abs() < 1e-15);
        assert!(ks_kaplan_meier(&[(1.0, true)], cdf).is_err());
    }

    #[test]
    fn kaplan_meier_recovers_censored_uniforms() {
        // Uniform values censored at an independent uniform time.
        let mut rng = RngStream::new(5, 0);
        let n = 20_000;
        let obs: Vec<(f64, bool)> = (0..n)
            .map(|_| {
                let (v, c) = (rng.uniform_open(), rng.uniform_open());
                if v <= c { (v, false) } else { (c, true) }
            })
            .collect();
        let cdf = |x: f64| x.clamp(0.0, 1.0);
        let km = ks_kaplan_meier(&obs, cdf).unwrap();
        let kept: Vec<f64> = obs.iter().filter(|o| !o.1).map(|o| o.0).collect();
        let naive = ks_statistic(&kept, cdf).unwrap();
        assert!(km < 0.03, "{km}");
        assert!(naive > 0.2, "{naive}");
    }

    #[test]
    fn constant_samples() {
        let cdf = |x: f64| x.clamp(0.0, 1.0);
        let ks = ks_statistic(&[0.3; 50], cdf).unwrap();
        assert!((ks - 0.7).abs() < 1e-15);
        let ks = ks_statistic(&[0.8; 50], cdf).unwrap();
        assert!((ks - 0.8).abs() < 1e-15);
    }

    #[test]
    fn shifted_samples_fail() {
        let cfg = crate::SkewConfig::new(1.0, 0.5, 0.25).unwrap();
        let law = crate::analytic::LawDescriptor::for_config(&cfg).unwrap();
        let mut rng = RngStream::new(2, 0);
        let shift = 0.1 * cfg.drift_horizon();
        let exact: Vec<f64> = (0..100_000).map(|_| law.sample(&mut rng).unwrap()).collect();
        let shifted: Vec<f64> = exact.iter().map(|u| u + shift).collect();
        let cdf = |u: f64| law.cdf(u).unwrap();
        assert!(ks_against(cdf, &exact, 0, DEFAULT_BIAS_ALLOWANCE).unwrap().pass);
        assert!(!ks_against(cdf, &shifted, 0, DEFAULT_BIAS_ALLOWANCE).unwrap().pass);
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(ks_statistic(&[], |x| x), Err(Error::EmptySample));
        assert!(ks_against(|x| x, &[], 3, 0.0).is_err());
        assert!(moment_check(&[], Ok(1.0), 1).is_err());
        assert!(moment_check(&[1.0], Ok(1.0), 3).is_err());
    }

    #[test]
    fn beta_second_moment() {
        let mut rng = RngStream::new(7, 0);
        let s: Vec<f64> = (0..100_000)
            .map(|_| crate::samplers::sample_beta(2.0, 0.5, &mut rng).unwrap())
            .collect();
        let row = moment_check(&s, Ok(2.0 * 3.0 / (2.5 * 3.5)), 2).unwrap();
        assert!(row.pass, "{row:?}");
        assert!((row.analytic - 0.6857).abs() < 1e-4);
        let refused = moment_check(
            &s,
            Err(Error::InfiniteMoment { order: 1, reason: "boundary".into() }),
            1,
        );
        assert!(matches!(refused, Err(Error::InfiniteMoment { .. })));
    }

    #[test]
    fn censored_fraction_reported() {
        let mut a = Shard::default();
        for i in 0..10 {
            a.push(i as f64 / 10.0, i % 5 == 0);
        }
        let r = a.summarize(|x| x.clamp(0.0, 1.0), 0.0).unwrap();
        assert_eq!(r.n, 8);
        assert!((r.censored_fraction - 0.2).abs() < 1e-15);
    }

    #[test]
    fn pairwise_sum_small_and_large() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
    }

    proptest! {
        #[test]
        fn permutation_and_shard_invariance(
            mut v in proptest::collection::vec(0.0f64..1.0, 1..300),
            split in 0usize..300,
            seed in 0u64..1000,
        ) {
            let cdf = |x: f64| x * x;
            let base = ks_against(cdf, &v, 0, 0.0).unwrap();
            let mut rng = RngStream::new(seed, 0);
            for i in (1..v.len()).rev() {
                let j = (rng.uniform_closed_open() * (i + 1) as f64) as usize;
                v.swap(i, j.min(i));
            }
            let k = split.min(v.len());
            let a = Shard { samples: v[..k].to_vec(), censored: 0 };
            let b = Shard { samples: v[k..].to_vec(), censored: 0 };
            let merged = b.merge(a).summarize(cdf, 0.0).unwrap();
            prop_assert_eq!(base.ks, merged.ks);
            prop_assert_eq!(base.moments, merged.moments);
            prop_assert!((0.0..=1.0).contains(&base.ks));
        }
    }
}
