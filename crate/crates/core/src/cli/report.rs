//! Report plumbing: config hashes, rounding and the common header.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use crate::error::Result;

pub const TOOL: &str = "reprokernel";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits kept in every reported float.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// SHA-256 of the canonical JSON form of the configuration.
pub fn config_hash(config: &ExperimentConfig) -> Result<String> {
    let bytes = serde_json::to_vec(config)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn round_significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Rounds every float in a JSON value to [`SIGNIFICANT_DIGITS`].
pub fn round_floats(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap_or(0.0), SIGNIFICANT_DIGITS);
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(v) => Value::Array(v.into_iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

/// Header fields shared by all reports.
pub fn header(command: &str, config: &ExperimentConfig) -> Result<Map<String, Value>> {
    let mut map = Map::new();
    map.insert("tool".into(), json!(TOOL));
    map.insert("version".into(), json!(VERSION));
    map.insert("command".into(), json!(command));
    map.insert("config_hash".into(), json!(config_hash(config)?));
    map.insert("seed".into(), json!(config.seed()));
    map.insert("config".into(), serde_json::to_value(config)?);
    Ok(map)
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn render(map: Map<String, Value>) -> Result<String> {
    let mut text = serde_json::to_string_pretty(&round_floats(Value::Object(map)))?;
    text.push('\n');
    Ok(text)
}

/// Formats a float for CSV output with [`SIGNIFICANT_DIGITS`].
pub fn csv_float(x: f64) -> String {
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
}

/// Comment lines that carry the header into CSV files.
pub fn csv_header(command: &str, config: &ExperimentConfig) -> Result<String> {
    Ok(format!(
        "# tool={TOOL} version={VERSION} command={command} config_hash={} seed={}\n",
        config_hash(config)?,
        config.seed()
    ))
}
