use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Machine-readable outcome of one command.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the canonical (key-sorted, compact) JSON of all inputs.
    pub inputs_digest: String,
    pub pass: bool,
    pub verdicts: Value,
    /// Microseconds per stage.
    pub timings: BTreeMap<String, u64>,
    /// Human-readable lines for the non-JSON output.
    #[serde(skip)]
    pub summary: Vec<String>,
}

pub fn digest(inputs: &Value) -> String {
    let canonical = serde_json::to_string(inputs).expect("values serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Stage timer feeding [`RunReport::timings`].
#[derive(Default)]
pub struct Timings {
    stages: BTreeMap<String, u64>,
}

impl Timings {
    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.stages.insert(stage.to_string(), start.elapsed().as_micros() as u64);
        out
    }

    pub fn into_map(self) -> BTreeMap<String, u64> {
        self.stages
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"b": 1, "a": [1, 2]}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{"a": [1, 2],   "b": 1}"#).unwrap();
        assert_eq!(digest(&a), digest(&b));
        assert_ne!(digest(&a), digest(&Value::Null));
        assert_eq!(digest(&a).len(), 64);
    }
}
