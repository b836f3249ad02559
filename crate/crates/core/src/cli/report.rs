use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Machine-readable output of one invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    /// Arguments after the program name, without `--out` and its value.
    pub command: Vec<String>,
    /// SHA-256 (hex) over the command echo and the bytes of every input file.
    pub inputs_digest: String,
    pub exit_code: i32,
    pub results: serde_json::Value,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub fn inputs_digest(command: &[String], inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for arg in command {
        h.update(arg.as_bytes());
        h.update([0u8]);
    }
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

/// Fixed 12-decimal rendering used for every probability on stdout.
pub fn prob(p: f64) -> String {
    // avoid "-0.000000000000"
    let p = if p.abs() < 5e-13 { 0.0 } else { p };
    format!("{p:.12}")
}
