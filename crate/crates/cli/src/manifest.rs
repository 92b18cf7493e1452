//! Run manifests and the document envelope shared by every subcommand.

use crate::{CliError, CliResult, PRECISION_ENV};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tropaz_numeric::DEFAULT_PRECISION;

pub const SCHEMA_VERSION: u32 = 1;

/// Everything that determines the bytes of a run's output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config: String,
    pub config_sha256: String,
    pub subcommand: String,
    pub json_out: Option<String>,
    pub svg_out: Option<String>,
    pub seed: Option<u64>,
    pub precision: Option<u32>,
    pub nodes: Option<usize>,
    /// Remaining subcommand arguments.
    pub parameters: Value,
    pub tool_version: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config,
            "config_sha256": self.config_sha256,
            "subcommand": self.subcommand,
            "outputs": {"json": self.json_out, "svg": self.svg_out},
            "seed": self.seed,
            "precision": self.precision,
            "nodes": self.nodes,
            "parameters": self.parameters,
            "tool_version": self.tool_version,
        })
    }

    /// SHA-256 of the compact manifest JSON (keys sorted).
    pub fn hash(&self) -> String {
        sha256_hex(self.to_json().to_string().as_bytes())
    }

    pub fn document(&self, result: Value, warnings: &[String]) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "tool": "tropaz",
            "command": self.subcommand,
            "manifest": self.to_json(),
            "manifest_hash": self.hash(),
            "warnings": warnings,
            "result": result,
        })
    }
}

/// `--precision`, else the environment override, else the library default.
pub fn resolve_precision(flag: Option<u32>) -> CliResult<u32> {
    let bits = match flag {
        Some(bits) => bits,
        None => match std::env::var(PRECISION_ENV) {
            Ok(text) => text.trim().parse().map_err(|_| CliError::Config(format!("{PRECISION_ENV}={text:?} is not an integer")))?,
            Err(_) => DEFAULT_PRECISION,
        },
    };
    if !(53..=1 << 16).contains(&bits) {
        return Err(CliError::Config(format!("precision {bits} outside 53..=65536")));
    }
    Ok(bits)
}
