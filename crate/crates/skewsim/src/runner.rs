//! Parallel drivers over per-index random streams.
//!
//! Item `i` always draws from `RngStream::new(seed, i)` and results come
//! back in index order, so every output is independent of the worker count.

use rayon::prelude::*;
use skewsim_core::chain::{self, ChainSettings, HittingSample, NegNegSample};
use skewsim_core::path_sim::{self, EulerConfig, LocalTimePath, PathEstimate};
use skewsim_core::{Result, RngStream, SkewConfig};

use crate::error::CliResult;

/// A pool with `threads` workers; 0 lets rayon pick.
pub fn pool(threads: usize) -> CliResult<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?)
}

/// `f(0), …, f(n-1)` evaluated on `threads` workers, in index order. The
/// first error (by index) wins.
pub fn par_indexed<T, F>(n: usize, threads: usize, f: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let pool = pool(threads)?;
    let all: Vec<Result<T>> = pool.install(|| (0..n as u64).into_par_iter().map(&f).collect());
    Ok(all.into_iter().collect::<Result<Vec<T>>>()?)
}

pub fn hitting_samples(
    cfg: &SkewConfig,
    settings: &ChainSettings,
    seed: u64,
    n: usize,
    threads: usize,
) -> CliResult<Vec<HittingSample>> {
    par_indexed(n, threads, |i| chain::hitting_sample(cfg, settings, seed, i))
}

pub fn negneg_samples(
    cfg: &SkewConfig,
    settings: &ChainSettings,
    seed: u64,
    n: usize,
    threads: usize,
) -> CliResult<Vec<NegNegSample>> {
    par_indexed(n, threads, |i| {
        chain::run_negneg(cfg, &mut RngStream::new(seed, i), settings)
    })
}

/// Every path simulated at all `levels` on one Brownian path; row `i` holds
/// the estimates for path `i`, one per level.
pub fn path_samples(
    cfg: &SkewConfig,
    levels: &[EulerConfig],
    seed: u64,
    n: usize,
    threads: usize,
) -> CliResult<Vec<Vec<PathEstimate>>> {
    par_indexed(n, threads, |i| {
        path_sim::simulate_pair_levels(cfg, levels, &mut RngStream::new(seed, i))
    })
}

pub fn localtime_paths(
    h: f64,
    beta2: f64,
    ecfg: &EulerConfig,
    stop_above: f64,
    seed: u64,
    n: usize,
    threads: usize,
) -> CliResult<Vec<LocalTimePath>> {
    par_indexed(n, threads, |i| {
        path_sim::localtime_path(h, beta2, ecfg, stop_above, &mut RngStream::new(seed, i))
    })
}
