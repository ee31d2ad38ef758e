//! Run manifest: everything needed to reproduce an output directory
//! byte-for-byte (input digests, full configuration, tool version).

use std::path::Path;

use modclust_core::validity::GridSpec;
use modclust_core::{FitConfig, PenaltyConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunSpec {
    Fit(FitManifest),
    Grid(GridManifest),
    Simulate(SimulateManifest),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitManifest {
    pub algorithm: String,
    pub adjacency_format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub msc: Option<FitConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub penalty: Option<PenaltyConfig>,
    pub cutoff: f64,
    pub cutoff_rule: String,
    pub include_self_pairs: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridManifest {
    pub algorithm: String,
    pub adjacency_format: String,
    pub spec: GridSpec,
    pub cutoff: f64,
    pub cutoff_rule: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateManifest {
    pub preset: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    #[serde(flatten)]
    pub spec: RunSpec,
}

impl RunManifest {
    pub fn new(seed: u64, inputs: Vec<InputDigest>, spec: RunSpec) -> Self {
        Self {
            tool: "modclust".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            inputs,
            spec,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Data(format!("serializing manifest: {e}")))?;
        std::fs::write(path, json + "\n")
            .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn input_path(&self, role: &str) -> Option<&str> {
        self.inputs
            .iter()
            .find(|i| i.role == role)
            .map(|i| i.path.as_str())
    }
}

pub fn digest_file(role: &str, path: &Path) -> Result<InputDigest> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok(InputDigest {
        role: role.into(),
        path: path.display().to_string(),
        sha256,
    })
}
