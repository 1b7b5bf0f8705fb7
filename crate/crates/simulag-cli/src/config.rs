//! Optional JSON config files carrying the same keys as the flags.
//!
//! Explicit flags always win over config values.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::args::{FormatArg, OutputFormatArg};
use crate::error::AppError;

/// A value that may arrive as a JSON number or as the flag's string form
/// (ranges like "8..16" need the string form).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Spec {
    Number(f64),
    Text(String),
}

impl Spec {
    pub fn as_text(&self) -> String {
        match self {
            Spec::Number(n) => n.to_string(),
            Spec::Text(s) => s.clone(),
        }
    }
}

/// Threshold lists may arrive as a JSON array or the flag's comma string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ThresholdSpec {
    List(Vec<f64>),
    Text(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateConfig {
    pub input: Option<PathBuf>,
    pub format: Option<FormatArg>,
    pub metrics: Option<String>,
    pub output: Option<PathBuf>,
    pub output_format: Option<OutputFormatArg>,
    pub per_sentence: Option<bool>,
    pub thresholds: Option<ThresholdSpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplainConfig {
    pub input: Option<PathBuf>,
    pub index: Option<usize>,
    pub format: Option<FormatArg>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateConfig {
    pub output: Option<PathBuf>,
    pub num: Option<usize>,
    pub k: Option<usize>,
    pub src_words: Option<Spec>,
    pub word_ms: Option<Spec>,
    pub target_offset: Option<Spec>,
    pub overgen_prob: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub input_a: Option<PathBuf>,
    pub input_b: Option<PathBuf>,
    pub format: Option<FormatArg>,
    pub output: Option<PathBuf>,
    pub output_format: Option<OutputFormatArg>,
}

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, AppError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| AppError::usage(format!("invalid config file {}: {e}", path.display())))
}
