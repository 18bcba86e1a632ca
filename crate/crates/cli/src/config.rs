//! Layered settings: built-in defaults, then a JSON config file, then flags.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

/// Reads a config file. The top level must be an object; a key named after
/// the subcommand, if present, holds that command's settings.
pub fn load(path: Option<&Path>, command: &str) -> Result<Map<String, Value>> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let value: Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    let Value::Object(mut top) = value else {
        bail!("config {} is not a JSON object", path.display());
    };
    match top.remove(command) {
        Some(Value::Object(section)) => Ok(section),
        Some(_) => bail!("config section {command:?} is not an object"),
        None => Ok(top),
    }
}

/// Merges `file` and then the non-null fields of `flags` over the defaults
/// of `C`. Keys unknown to `C` are refused.
pub fn resolve<C, F>(file: Map<String, Value>, flags: &F) -> Result<C>
where
    C: Serialize + DeserializeOwned + Default,
    F: Serialize,
{
    let Value::Object(mut merged) = serde_json::to_value(C::default())? else {
        bail!("settings must serialize to an object");
    };
    for (k, v) in file {
        if !merged.contains_key(&k) {
            bail!("unknown config key {k:?}");
        }
        merged.insert(k, v);
    }
    if let Value::Object(given) = serde_json::to_value(flags)? {
        for (k, v) in given {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).context("resolving settings")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Default, PartialEq, Serialize, Deserialize)]
    struct Settings {
        a: u32,
        b: String,
    }

    #[derive(Serialize)]
    struct Flags {
        a: Option<u32>,
        b: Option<String>,
    }

    #[test]
    fn flags_win_over_file_over_defaults() {
        let file: Map<String, Value> = serde_json::from_str(r#"{"a": 3, "b": "file"}"#).unwrap();
        let s: Settings = resolve(
            file,
            &Flags {
                a: None,
                b: Some("flag".into()),
            },
        )
        .unwrap();
        assert_eq!(
            s,
            Settings {
                a: 3,
                b: "flag".into()
            }
        );
        let s: Settings = resolve(Map::new(), &Flags { a: None, b: None }).unwrap();
        assert_eq!(s, Settings::default());
    }

    #[test]
    fn unknown_keys_are_refused() {
        let file: Map<String, Value> = serde_json::from_str(r#"{"zzz": 1}"#).unwrap();
        assert!(resolve::<Settings, _>(file, &Flags { a: None, b: None }).is_err());
    }
}
