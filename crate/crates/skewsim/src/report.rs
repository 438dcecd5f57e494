//! JSON artifacts: run manifests and validation reports. Field order is
//! fixed by the struct definitions, so reports diff cleanly.

use serde::{Deserialize, Serialize};
use skewsim_core::path_sim::EulerConfig;
use skewsim_core::SkewConfig;

pub const TOOL_VERSION: &str = concat!("skewsim ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigEcho {
    pub x: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub regime: String,
    pub coalescence_guaranteed: bool,
    pub xi_star: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub theta: f64,
}

impl From<&SkewConfig> for ConfigEcho {
    fn from(cfg: &SkewConfig) -> Self {
        let k = cfg.constants();
        let r = cfg.regime();
        ConfigEcho {
            x: cfg.x(),
            beta1: cfg.beta1(),
            beta2: cfg.beta2(),
            regime: r.tag.to_string(),
            coalescence_guaranteed: r.coalescence_guaranteed,
            xi_star: k.xi_star,
            gamma: k.gamma,
            kappa: k.kappa,
            theta: k.theta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EulerEcho {
    pub dt: f64,
    pub mollifier_scale: u32,
    pub horizon: f64,
    pub meeting_delta: f64,
    pub local_time_bandwidth: f64,
    pub stability_warning: bool,
}

impl From<&EulerConfig> for EulerEcho {
    fn from(e: &EulerConfig) -> Self {
        EulerEcho {
            dt: e.dt,
            mollifier_scale: e.mollifier_scale,
            horizon: e.horizon,
            meeting_delta: e.meeting_delta,
            local_time_bandwidth: e.local_time_bandwidth,
            stability_warning: e.stability_warning(),
        }
    }
}

/// Everything needed, together with the binary, to regenerate a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub command: String,
    pub config_echo: Option<ConfigEcho>,
    pub seed: Option<u64>,
    pub trajectory_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_jumps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler: Option<EulerEcho>,
    pub tool_version: String,
    /// Seconds.
    pub wall_time: f64,
    pub censored_fraction: f64,
}

impl RunManifest {
    pub fn new(command: &str, cfg: Option<&SkewConfig>) -> Self {
        RunManifest {
            command: command.to_owned(),
            config_echo: cfg.map(ConfigEcho::from),
            seed: None,
            trajectory_count: 0,
            eps: None,
            max_jumps: None,
            euler: None,
            tool_version: TOOL_VERSION.to_owned(),
            wall_time: 0.0,
            censored_fraction: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MomentReport {
    pub quantity: String,
    pub order: u32,
    pub empirical: f64,
    pub std_error: f64,
    /// `None` when the moment is infinite and the check was refused.
    pub analytic: Option<f64>,
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub law: String,
    pub quantity: String,
    pub n: usize,
    pub ks: f64,
    pub dkw99: f64,
    pub bias_allowance: f64,
    pub pass: bool,
    pub moments: Vec<MomentReport>,
    pub censored_fraction: f64,
    pub seed: u64,
    pub config: ConfigEcho,
}
