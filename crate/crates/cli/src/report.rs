use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sccat::complexfold::MetricParams;
use sccat::words::NormalizationEvent;
use sccat::{Certificate, SmallCancellationReport};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub check_ms: f64,
    pub certify_ms: Option<f64>,
}

/// Everything a `check` or `certify` run produced, in one JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub report_version: u32,
    pub tool_version: String,
    /// SHA-256 of the raw input file.
    pub input_digest: String,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub normalization_log: Vec<NormalizationEvent>,
    pub conditions: SmallCancellationReport,
    pub params: Option<MetricParams>,
    pub certificate: Option<Certificate>,
    pub timings: Timings,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
