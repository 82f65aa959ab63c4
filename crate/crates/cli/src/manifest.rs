use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub millis: f64,
}

/// Provenance of one run. Everything except `stages` is a function of the
/// inputs and the resolved configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: serde_json::Value,
    pub config_sha256: String,
    pub inputs: Vec<InputDigest>,
    pub stages: Vec<StageTiming>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config: serde_json::Value::Null,
            config_sha256: sha256_hex(b"null"),
            inputs: Vec::new(),
            stages: Vec::new(),
        }
    }

    pub fn set_config(&mut self, config: serde_json::Value) {
        // serde_json maps are sorted, so the encoding is canonical
        let bytes = serde_json::to_vec(&config).expect("config is serializable");
        self.config_sha256 = sha256_hex(&bytes);
        self.config = config;
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256: sha256_hex(bytes) });
    }

    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let millis = start.elapsed().as_secs_f64() * 1e3;
        log::info!("{stage}: {millis:.1} ms");
        self.stages.push(StageTiming { stage: stage.to_string(), millis });
        out
    }

    pub fn emit(&self, path: Option<&Path>) -> Result<(), CliError> {
        let json = serde_json::to_string(self).expect("manifest is serializable");
        match path {
            Some(p) => {
                let mut f = std::fs::File::create(p).map_err(|source| CliError::Io { path: p.into(), source })?;
                writeln!(f, "{json}").map_err(|source| CliError::Io { path: p.into(), source })
            }
            None => {
                log::info!("manifest {json}");
                Ok(())
            }
        }
    }
}
