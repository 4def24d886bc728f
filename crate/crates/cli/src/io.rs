// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::manifest::{ManifestBuilder, RunManifest};

pub struct InputDoc {
    pub path: PathBuf,
    pub value: Value,
}

pub fn read_input(path: &Path, manifest: &mut ManifestBuilder) -> CliResult<InputDoc> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    manifest.input(path, &bytes);
    let value = serde_json::from_slice(&bytes).map_err(|e| parse_error(path, e))?;
    Ok(InputDoc { path: path.into(), value })
}

fn parse_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Parse { path: path.into(), message: e.to_string() }
}

impl InputDoc {
    /// The first payload found under one of `keys` (a path of nested keys),
    /// or the whole document when none match.
    pub fn payload<T: DeserializeOwned>(&self, keys: &[&[&str]]) -> CliResult<T> {
        let found = keys.iter().find_map(|path| path.iter().try_fold(&self.value, |v, k| v.get(k)));
        let v = found.unwrap_or(&self.value);
        serde_json::from_value(v.clone()).map_err(|e| parse_error(&self.path, e))
    }

    pub fn has(&self, key: &str) -> bool {
        self.value.get(key).is_some()
    }
}

/// Output document: the manifest next to the payload under `key`.
pub fn envelope(manifest: &RunManifest, key: &str, payload: Value) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("manifest".into(), serde_json::to_value(manifest).expect("manifest serializes"));
    map.insert(key.into(), payload);
    Value::Object(map)
}

/// Writes JSON to `output` and the table to stdout, or JSON to stdout and
/// the table to stderr.
pub fn emit(output: Option<&Path>, doc: &Value, table: &str) -> CliResult<()> {
    let text = serde_json::to_string_pretty(doc).expect("JSON values always serialize") + "\n";
    let (to_stdout, to_stderr) = match output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Io { path: path.into(), source })?;
            (table, "")
        }
        None => (text.as_str(), table),
    };
    // A closed pipe (e.g. `| head`) is not an error.
    let write = |mut w: Box<dyn Write>, s: &str| match w.write_all(s.as_bytes()).and_then(|()| w.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(CliError::Io { path: "<stdout>".into(), source: e }),
        _ => Ok(()),
    };
    write(Box::new(std::io::stdout().lock()), to_stdout)?;
    write(Box::new(std::io::stderr().lock()), to_stderr)
}
