//! Reading JSON arguments: a path, `-` for stdin, or inline JSON.

use std::io::Read;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::CliError;

pub fn read(src: &str) -> Result<Value, CliError> {
    let text = if src == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        s
    } else if Path::new(src).is_file() {
        std::fs::read_to_string(src).map_err(|e| CliError::Input(format!("{src}: {e}")))?
    } else {
        src.to_string()
    };
    serde_json::from_str(&text).map_err(|e| {
        let what = if src.len() > 40 { "argument" } else { src };
        CliError::Input(format!("{what} is neither a readable file nor valid JSON: {e}"))
    })
}

fn is_class_id(k: &str) -> bool {
    k.len() > 1 && k.starts_with('c') && k[1..].bytes().all(|b| b.is_ascii_digit())
}

/// Context supplied by `--group`, `--ring` and `--family`.
#[derive(Default)]
pub struct Context {
    pub group: Option<Value>,
    pub ring: Option<Value>,
    pub family: Option<Value>,
}

impl Context {
    pub fn group(&self) -> Result<&Value, CliError> {
        self.group
            .as_ref()
            .ok_or_else(|| CliError::Usage("--group is required".into()))
    }

    pub fn ring(&self) -> Result<&Value, CliError> {
        self.ring
            .as_ref()
            .ok_or_else(|| CliError::Usage("--ring is required".into()))
    }

    /// Completes a vector document: a bare `{"c0": .., "c1": ..}` map becomes
    /// the `key` entry, and missing `group`, `ring` and `family` fields are
    /// filled from the flags. A flag that disagrees with the document is an
    /// error.
    pub fn complete(&self, doc: Value, key: &str) -> Result<Value, CliError> {
        let Value::Object(mut obj) = doc else {
            return Err(CliError::Input("a vector document must be a JSON object".into()));
        };
        if !obj.contains_key(key) && !obj.is_empty() && obj.keys().all(|k| is_class_id(k)) {
            let entries = std::mem::take(&mut obj);
            obj = Map::new();
            obj.insert(key.into(), Value::Object(entries));
        }
        let mut out = Map::new();
        for (field, flag) in [("group", &self.group), ("ring", &self.ring), ("family", &self.family)] {
            match (obj.remove(field), flag) {
                (Some(a), Some(b)) if a != *b => {
                    return Err(CliError::Input(format!(
                        "--{field} disagrees with the document's `{field}`"
                    )));
                }
                (Some(a), _) => {
                    out.insert(field.into(), a);
                }
                (None, Some(b)) => {
                    out.insert(field.into(), b.clone());
                }
                (None, None) => {}
            }
        }
        out.extend(obj);
        Ok(Value::Object(out))
    }
}
