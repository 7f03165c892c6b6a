use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use fibertap_core::Config;

use crate::error::{file_error, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// Provenance record written next to every command's primary output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 of the resolved configuration (after flag overrides).
    pub config_digest: String,
    pub seed: u64,
    pub tool_version: String,
    pub stage_timings: Vec<StageTiming>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

pub fn config_digest(cfg: &Config) -> String {
    hex::encode(Sha256::digest(cfg.to_toml().as_bytes()))
}

pub fn manifest_path(primary: &Path) -> PathBuf {
    with_suffix(primary, ".manifest.json")
}

pub(crate) fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

impl RunManifest {
    pub fn new(command: &str, cfg: &Config, seed: u64) -> Self {
        Self {
            command: command.into(),
            config_digest: config_digest(cfg),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            stage_timings: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Runs `f` and records its wall time under `stage`.
    pub fn stage<T>(&mut self, stage: &str, f: impl FnOnce() -> CliResult<T>) -> CliResult<T> {
        let start = Instant::now();
        let out = f()?;
        self.stage_timings.push(StageTiming {
            stage: stage.into(),
            seconds: start.elapsed().as_secs_f64(),
        });
        Ok(out)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        write_json(path, self)
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| file_error(path)(e.into()))
}
