//! JSON config loading with dotted-path overrides.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::CliError;

/// Reads `path` (or starts from `{}`) and applies `key.path=value` overrides.
pub fn load_value(path: Option<&Path>, overrides: &[String]) -> Result<Value, CliError> {
    let mut root = match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("config {} is not valid JSON: {e}", p.display())))?
        }
        None => Value::Object(Map::new()),
    };
    for o in overrides {
        apply_override(&mut root, o)?;
    }
    Ok(root)
}

pub fn apply_override(root: &mut Value, spec: &str) -> Result<(), CliError> {
    let (path, raw) =
        spec.split_once('=').ok_or_else(|| CliError::Usage(format!("override `{spec}` is not key=value")))?;
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Usage(format!("override path `{path}` has an empty segment")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    for k in &keys[..keys.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| CliError::Usage(format!("override `{path}` descends into a non-object")))?;
        node = obj.entry(k.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    let obj =
        node.as_object_mut().ok_or_else(|| CliError::Usage(format!("override `{path}` targets a non-object")))?;
    let last = keys[keys.len() - 1];
    // q and p are alternative parameterizations of the same ensemble.
    match last {
        "q" => {
            obj.remove("p");
        }
        "p" => {
            obj.remove("q");
        }
        _ => {}
    }
    obj.insert(last.to_string(), value);
    Ok(())
}

pub fn decode<T: DeserializeOwned>(value: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Usage(format!("invalid {what} config: {e}")))
}

/// The `ensemble` member if present, else the whole document.
pub fn ensemble_part(value: &Value) -> Value {
    value.get("ensemble").cloned().unwrap_or_else(|| value.clone())
}
