//! Deliverable files and run manifests.
//!
//! Every file-producing command writes its rows deterministically, then a
//! `<file>.manifest.json` recording the inputs and a digest of each output,
//! enough to reproduce the bytes exactly (timestamps live only in the
//! manifest). Rewrites are idempotent: when the target already holds the
//! same bytes it is left untouched.

use modcount_core::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub version: &'static str,
    /// the invocation as typed, for the archive
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    pub units: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_const: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parallelism: Option<usize>,
    /// per-radius counts of elements within tolerance of the sphere, for
    /// auditing boundary sensitivity
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_hits: Option<Vec<u64>>,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn new(units_label: &str) -> Self {
        RunManifest {
            version: TOOL_VERSION,
            command: std::env::args().collect::<Vec<_>>().join(" "),
            phi: None,
            x: None,
            y: None,
            units: units_label.to_string(),
            radii: None,
            a_const: None,
            seed: None,
            parallelism: None,
            boundary_hits: None,
            started_unix: now_unix(),
            finished_unix: 0,
            outputs: Vec::new(),
        }
    }

    /// Stamps the end time and writes the manifest next to the deliverable.
    pub fn finish(mut self, deliverable: &Path) -> Result<()> {
        self.finished_unix = now_unix();
        let path = manifest_path(deliverable);
        let body = serde_json::to_string_pretty(&self)
            .map_err(|e| Error::Io(format!("manifest encoding: {e}")))?;
        std::fs::write(&path, body + "\n")
            .map_err(|e| Error::Io(format!("manifest {}: {e}", path.display())))?;
        Ok(())
    }
}

pub fn manifest_path(deliverable: &Path) -> std::path::PathBuf {
    let mut name = deliverable.as_os_str().to_os_string();
    name.push(".manifest.json");
    std::path::PathBuf::from(name)
}

pub fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

/// Writes content to path unless identical bytes are already there.
pub fn write_idempotent(path: &Path, content: &str) -> Result<OutputDigest> {
    let digest = sha256_hex(content.as_bytes());
    let unchanged = std::fs::read(path).map(|old| sha256_hex(&old) == digest).unwrap_or(false);
    if !unchanged {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::Io(format!("creating {}: {e}", dir.display())))?;
        }
        std::fs::write(path, content)
            .map_err(|e| Error::Io(format!("writing {}: {e}", path.display())))?;
    }
    Ok(OutputDigest { path: path.display().to_string(), sha256: digest })
}
