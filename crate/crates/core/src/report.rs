//! Machine-readable reports shared by the catalog and the command line.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::io::FORMAT;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl CertificateOutcome {
    pub fn new(name: impl Into<String>, passed: bool, detail: Value) -> Self {
        CertificateOutcome {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub format: u32,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub certificates: Vec<CertificateOutcome>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &[String]) -> Self {
        Report {
            format: FORMAT,
            command: command.to_vec(),
            inputs: Vec::new(),
            certificates: Vec::new(),
            data: Value::Null,
            timings_ms: None,
            passed: true,
        }
    }

    pub fn add_input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            name: name.to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn push(&mut self, outcome: CertificateOutcome) {
        self.passed &= outcome.passed;
        self.certificates.push(outcome);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CertificateOutcome> {
        self.certificates.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pass_flag_tracks_outcomes() {
        let mut r = Report::new(&["x".to_string()]);
        assert!(r.passed);
        r.push(CertificateOutcome::new("a", true, Value::Null));
        r.push(CertificateOutcome::new("b", false, json!({"witness": 3})));
        assert!(!r.passed);
        assert_eq!(r.failures().count(), 1);
        assert!(!r.to_json().contains("timings_ms"));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
