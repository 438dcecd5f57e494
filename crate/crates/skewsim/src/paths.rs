//! Summaries of coupled-path runs: per-level KS against the analytic law,
//! refinement consistency and the meeting-time profile.

use serde::{Deserialize, Serialize};
use skewsim_core::analytic::LawDescriptor;
use skewsim_core::path_sim::{self, EulerConfig, PathEstimate};
use skewsim_core::stats;
use skewsim_core::SkewConfig;

use crate::error::CliResult;
use crate::report::EulerEcho;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelSummary {
    pub euler: EulerEcho,
    pub paths: usize,
    pub hits: usize,
    pub censored_fraction: f64,
    /// Kaplan-Meier KS of the occupation estimate `uStarPath`.
    pub ks_occupation: Option<f64>,
    /// Same for the drift estimate with the residual gap added back.
    pub ks_corrected: Option<f64>,
    pub dkw99: f64,
    /// Mean of `X^x - X⁰` when each run stopped.
    pub mean_final_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HitProfileReport {
    pub horizons: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub hazard: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PathsSummary {
    pub law: Option<String>,
    pub levels: Vec<LevelSummary>,
    /// Whether the occupation KS falls with refinement (at most one
    /// inversion, finest below coarsest). `None` for a single level or when
    /// no law is available.
    pub refinement_consistent: Option<bool>,
    /// Profile of the finest level.
    pub hit_profile: HitProfileReport,
}

/// KS sequence from coarse to fine: at most one step up, and the last
/// value below the first.
pub fn refinement_consistent(ks: &[f64]) -> bool {
    let ups = ks.windows(2).filter(|w| w[1] > w[0]).count();
    ups <= 1 && ks.last() < ks.first()
}

fn km_ks(law: &LawDescriptor, obs: &[(f64, bool)]) -> CliResult<Option<f64>> {
    if obs.iter().all(|o| o.1) {
        return Ok(None);
    }
    let mut err = None;
    let d = stats::ks_kaplan_meier(obs, |v| {
        law.cdf(v).unwrap_or_else(|e| {
            err.get_or_insert(e);
            f64::NAN
        })
    })?;
    match err {
        Some(e) => Err(e.into()),
        None => Ok(Some(d)),
    }
}

/// `rows[i][k]` is path `i` at level `k`.
pub fn summarize_paths(
    cfg: &SkewConfig,
    levels: &[EulerConfig],
    rows: &[Vec<PathEstimate>],
    horizons: &[f64],
) -> CliResult<PathsSummary> {
    let law = LawDescriptor::for_config(cfg).ok();
    let mut out = Vec::with_capacity(levels.len());
    for (k, e) in levels.iter().enumerate() {
        let level: Vec<PathEstimate> = rows.iter().map(|r| r[k]).collect();
        let hits = level.iter().filter(|p| p.hit).count();
        let (ks_occupation, ks_corrected) = match &law {
            Some(law) => {
                let occ: Vec<(f64, bool)> = level.iter().map(|p| (p.u_star_path, !p.hit)).collect();
                let cor: Vec<(f64, bool)> = level
                    .iter()
                    .map(|p| (if p.hit { p.u_star_corrected } else { p.u_star_drift }, !p.hit))
                    .collect();
                (km_ks(law, &occ)?, km_ks(law, &cor)?)
            }
            None => (None, None),
        };
        out.push(LevelSummary {
            euler: EulerEcho::from(e),
            paths: level.len(),
            hits,
            censored_fraction: if level.is_empty() {
                0.0
            } else {
                (level.len() - hits) as f64 / level.len() as f64
            },
            ks_occupation,
            ks_corrected,
            dkw99: stats::dkw99(level.len().max(1)),
            mean_final_gap: if level.is_empty() {
                0.0
            } else {
                let gaps: Vec<f64> = level.iter().map(|p| p.final_gap).collect();
                stats::pairwise_sum(&gaps) / gaps.len() as f64
            },
        });
    }
    let ks: Option<Vec<f64>> = out.iter().map(|l| l.ks_occupation).collect();
    let refinement = match ks {
        Some(ks) if ks.len() > 1 => Some(refinement_consistent(&ks)),
        _ => None,
    };
    let finest: Vec<PathEstimate> = rows.iter().filter_map(|r| r.last().copied()).collect();
    let profile = if finest.is_empty() {
        HitProfileReport { horizons: horizons.to_vec(), cumulative: vec![], hazard: vec![] }
    } else {
        let p = path_sim::hit_profile(&finest, horizons)?;
        HitProfileReport { horizons: p.horizons, cumulative: p.cumulative, hazard: p.hazard }
    };
    Ok(PathsSummary {
        law: law.map(|l| crate::validate::law_name(&l).0),
        levels: out,
        refinement_consistent: refinement,
        hit_profile: profile,
    })
}
