//! Versioned JSON model files.

use std::path::Path;

use hyperpart_core::partitioner::{PartitionModel, FORMAT_VERSION};

use crate::error::{AppError, Result};

pub fn to_json(model: &PartitionModel) -> String {
    let mut text = serde_json::to_string_pretty(model).expect("models serialize");
    text.push('\n');
    text
}

pub fn from_json(text: &str, path: &Path) -> Result<PartitionModel> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| AppError::format(path, e))?;
    let version = value
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| AppError::format(path, "not a model file: no format_version"))?;
    if version != u64::from(FORMAT_VERSION) {
        return Err(AppError::format(
            path,
            format!("model format version {version} is not supported; this build reads version {FORMAT_VERSION}"),
        ));
    }
    let model: PartitionModel = serde_json::from_value(value).map_err(|e| AppError::format(path, e))?;
    model.validate().map_err(|e| AppError::format(path, e))?;
    Ok(model)
}

pub fn save(model: &PartitionModel, path: &Path) -> Result<()> {
    crate::io::write_text(path, &to_json(model))
}

pub fn load(path: &Path) -> Result<PartitionModel> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    from_json(&text, path)
}
