// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

/// Provenance record embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<InputFile>,
    /// SHA-256 of the effective configuration as canonical JSON.
    pub config_digest: String,
    pub config: serde_json::Value,
    pub tool_version: String,
    pub started_at: String,
    pub finished_at: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub struct ManifestBuilder {
    command: String,
    inputs: Vec<InputFile>,
    started_at: String,
}

impl ManifestBuilder {
    pub fn start(command: &str) -> Self {
        ManifestBuilder { command: command.into(), inputs: Vec::new(), started_at: now() }
    }

    pub fn input(&mut self, path: &std::path::Path, bytes: &[u8]) {
        self.inputs.push(InputFile { path: path.display().to_string(), sha256: sha256_hex(bytes) });
    }

    pub fn finish(self, config: serde_json::Value) -> RunManifest {
        // serde_json objects keep keys sorted, so this encoding is canonical.
        let canonical = serde_json::to_vec(&config).expect("JSON values always serialize");
        RunManifest {
            command: self.command,
            inputs: self.inputs,
            config_digest: sha256_hex(&canonical),
            config,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            started_at: self.started_at,
            finished_at: now(),
        }
    }
}
