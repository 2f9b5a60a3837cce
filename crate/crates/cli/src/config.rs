//! Option resolution: command line > config file > environment > default,
//! plus the resolved-configuration record embedded in every output file.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::Serialize;

/// Parse a plain `key = value` config file. `#` starts a comment, blank
/// lines are ignored, keys are the long option names.
pub fn load_config_file(path: Option<&Path>) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    let Some(path) = path else {
        return Ok(map);
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config file {}:{}: expected `key = value`, got {raw:?}", path.display(), lineno + 1);
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Flag value if given, else the config-file value for `key`.
pub fn resolve<T: FromStr>(
    flag: Option<T>,
    file: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        Some(text) => match text.parse::<T>() {
            Ok(value) => Ok(Some(value)),
            Err(_) => bail!("config file: cannot parse {key} = {text:?}"),
        },
        None => Ok(None),
    }
}

/// Output directory: `--out` > config `out` > `$KAIROS_OUT` > `.`.
pub fn resolve_out(flag: Option<PathBuf>, file: &HashMap<String, String>) -> PathBuf {
    flag.or_else(|| file.get("out").map(PathBuf::from))
        .or_else(|| std::env::var_os("KAIROS_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Synthetic-source parameters as they end up in output metadata.
#[derive(Debug, Clone, Serialize)]
pub struct SynthParams {
    pub sigma: f64,
    pub n: usize,
    pub tick_dt: f64,
    pub p0: f64,
    pub seed: u64,
    /// Generator behind the samples, for cross-build reproducibility.
    pub rng: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct CsvParams {
    pub time_col: String,
    pub price_col: Option<String>,
    pub bid_col: Option<String>,
    pub ask_col: Option<String>,
    pub has_header: bool,
    pub time_format: String,
    pub price_mode: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub unit: &'static str,
}

/// The fully resolved run configuration, embedded verbatim in every
/// output file (as a `config` field in JSON, as a `# config:` comment
/// line in CSV) so any result can be reproduced from the file alone.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<CsvParams>,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_grid: Option<GridSpec>,
    /// Single sampling interval (check), seconds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Single threshold (dissect/check), stored as a fraction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_unit: Option<&'static str>,
    pub out_dir: String,
}

impl ResolvedConfig {
    pub fn comment_line(&self) -> String {
        format!("# config: {}", serde_json::to_string(self).expect("config serializes"))
    }
}
