//! JSON run configuration: the model triple plus optional per-command
//! blocks. Command-line flags override anything read from the file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    pub x: f64,
    pub beta1: f64,
    pub beta2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<PathsBlock>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ChainBlock {
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub eps: Option<f64>,
    pub max_jumps: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PathsBlock {
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub mollifier_scale: Option<u32>,
    pub horizon: Option<f64>,
    pub meeting_delta: Option<f64>,
    pub local_time_bandwidth: Option<f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        RunConfig::from_json(&text).map_err(|source| CliError::Json {
            path: path.to_owned(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_and_blocks() {
        let c = RunConfig::from_json(r#"{"x": 1, "beta1": 0.5, "beta2": 0.25}"#).unwrap();
        assert_eq!((c.x, c.beta1, c.beta2), (1.0, 0.5, 0.25));
        assert!(c.chain.is_none());
        let c = RunConfig::from_json(
            r#"{"x": 2, "beta1": 0.5, "beta2": -0.5, "chain": {"n": 10, "maxJumps": 5},
                "paths": {"dt": 1e-3, "mollifierScale": 10}}"#,
        )
        .unwrap();
        assert_eq!(c.chain.as_ref().unwrap().max_jumps, Some(5));
        assert_eq!(c.paths.as_ref().unwrap().mollifier_scale, Some(10));
    }

    #[test]
    fn rejects_unknown_and_missing() {
        assert!(RunConfig::from_json(r#"{"x": 1, "beta1": 0.5}"#).is_err());
        assert!(RunConfig::from_json(r#"{"x": 1, "beta1": 0.5, "beta2": 0.2, "b": 1}"#).is_err());
    }
}
