use std::fs;
use std::path::PathBuf;

use nbrw_core::graph::GraphSpec;
use nbrw_core::walkers::WalkKind;
use nbrw_core::VertexKey;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subcommand {
    Walk,
    Erase,
    Chain,
    Contract,
    Enumerate,
    Compare,
    Diagnose,
}

/// Everything a run depends on. Command-line flags override the values of
/// a `--config` file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<Subcommand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk: Option<WalkKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<VertexKey>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Loads `--config`, checking that it was written for `expected`.
    pub fn load(arg: Option<&str>, expected: Subcommand) -> Result<Self, CliError> {
        let Some(arg) = arg else {
            return Ok(ExperimentConfig {
                subcommand: Some(expected),
                ..Default::default()
            });
        };
        let mut cfg = ExperimentConfig::from_json(&inline_or_file(arg)?)?;
        match cfg.subcommand {
            Some(s) if s != expected => {
                return Err(CliError::Config(format!(
                    "config is for {s:?}, not {expected:?}"
                )))
            }
            _ => cfg.subcommand = Some(expected),
        }
        Ok(cfg)
    }
}

/// `@path` reads the file; anything else is taken literally.
pub fn inline_or_file(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn parse_graph(arg: &str) -> Result<GraphSpec, CliError> {
    GraphSpec::parse(&inline_or_file(arg)?).map_err(|e| CliError::Config(e.to_string()))
}
