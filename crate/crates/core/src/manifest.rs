//! Run manifests: everything needed to regenerate a command's outputs.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// The parsed command line, sufficient to rerun it.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    /// Hash of the input file bytes, or of the family spec text.
    pub input_sha256: Option<String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    /// Worker threads used; results do not depend on it.
    pub threads: usize,
    /// Output file name to content hash.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value, threads: usize) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self {
            command: command.to_string(),
            config,
            seed: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_sha256: None,
            timestamp,
            threads,
            outputs: BTreeMap::new(),
        }
    }

    pub fn record_outputs(&mut self, files: &[(String, Vec<u8>)]) {
        self.outputs = files
            .iter()
            .map(|(name, bytes)| (name.clone(), sha256_hex(bytes)))
            .collect();
    }

    /// Names of recorded outputs whose hash differs from `files`, plus any
    /// missing or unexpected names.
    pub fn mismatches(&self, files: &[(String, Vec<u8>)]) -> Vec<String> {
        let fresh: BTreeMap<&str, String> = files
            .iter()
            .map(|(n, b)| (n.as_str(), sha256_hex(b)))
            .collect();
        let mut bad: Vec<String> = self
            .outputs
            .iter()
            .filter(|(n, h)| fresh.get(n.as_str()) != Some(*h))
            .map(|(n, _)| n.clone())
            .collect();
        bad.extend(
            fresh
                .keys()
                .filter(|n| !self.outputs.contains_key(**n))
                .map(|n| n.to_string()),
        );
        bad
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: format!("invalid manifest: {e}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn mismatches_report_changed_missing_and_extra() {
        let mut m = RunManifest::new("x", serde_json::Value::Null, 1);
        m.record_outputs(&[("a".into(), b"1".to_vec()), ("b".into(), b"2".to_vec())]);
        assert!(m
            .mismatches(&[("a".into(), b"1".to_vec()), ("b".into(), b"2".to_vec())])
            .is_empty());
        let bad = m.mismatches(&[("a".into(), b"9".to_vec()), ("c".into(), b"2".to_vec())]);
        assert_eq!(bad, vec!["a", "b", "c"]);
    }
}
