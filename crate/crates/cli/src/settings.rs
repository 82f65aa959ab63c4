use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Hyper-parameters readable from a TOML file. Every key is optional;
/// command-line flags win over the file, the file wins over defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSettings {
    pub top_trim: Option<f64>,
    pub bottom_trim: Option<f64>,
    pub t: Option<u32>,
    pub m: Option<usize>,
    pub holdout: Option<f64>,
    pub seed: Option<u64>,
    pub k: Option<usize>,
    pub c: Option<f64>,
    pub f1_ratio: Option<f64>,
    pub match_pos: Option<bool>,
}

impl FileSettings {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        toml::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }
}

pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
