//! JSON configuration files.

use std::path::Path;

use spinheat::SystemConfig;

use crate::error::{CliError, Result};

/// Parses and validates a configuration; schema errors name the offending field.
pub fn parse_config(text: &str, origin: &Path) -> Result<SystemConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: SystemConfig = serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
        path: origin.to_path_buf(),
        message: match e.path().to_string().as_str() {
            "." => e.inner().to_string(),
            field => format!("{field}: {}", e.inner()),
        },
    })?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<SystemConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text, path)
}

pub fn config_to_json(config: &SystemConfig) -> String {
    serde_json::to_string_pretty(config).expect("configuration serializes")
}

pub fn write_config(config: &SystemConfig, path: &Path) -> Result<()> {
    std::fs::write(path, config_to_json(config) + "\n").map_err(|e| CliError::io(path, e))
}
