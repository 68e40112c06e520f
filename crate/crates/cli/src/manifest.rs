//! Reproducibility record written next to every output.

use std::collections::BTreeMap;
use std::path::Path;

use isac_relay::optimizer::OptimizerConfig;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelSource {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factory: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json_path: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub channel: ChannelSource,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub kinds: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub d_grid: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerConfig>,
    /// Extra command settings (observed variables, sample counts, ...).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub settings: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub rng_seeds: Vec<u64>,
}

impl RunManifest {
    pub fn new(command: &str, channel: ChannelSource) -> Self {
        Self {
            command: command.to_string(),
            channel,
            kinds: Vec::new(),
            d_grid: Vec::new(),
            optimizer: None,
            settings: BTreeMap::new(),
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            rng_seeds: Vec::new(),
        }
    }

    pub fn record_output(&mut self, p: &Path) {
        self.outputs.push(p.display().to_string());
    }

    /// One-line form for embedding as a `#` comment.
    pub fn line(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
