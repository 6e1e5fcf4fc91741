//! Machine-readable run reports with deterministic (sorted-key) JSON.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::constructions::Inequality;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Value,
    pub outputs: Value,
    pub inequalities: Vec<Inequality>,
    pub timings: BTreeMap<String, f64>,
    pub version: String,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs: Value) -> Self {
        RunReport {
            command,
            inputs,
            outputs: Value::Null,
            inequalities: Vec::new(),
            timings: BTreeMap::new(),
            version: VERSION.to_string(),
            seed: None,
        }
    }

    pub fn inequalities_hold(&self) -> bool {
        self.inequalities.iter().all(|i| i.holds)
    }

    /// Pretty JSON with object keys in sorted order at every level.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        to_sorted_json(&v)
    }
}

/// Pretty JSON of `v` with keys sorted recursively.
pub fn to_sorted_json(v: &Value) -> String {
    fn sort(v: &Value) -> Value {
        match v {
            Value::Object(m) => {
                let sorted: BTreeMap<&String, Value> = m.iter().map(|(k, x)| (k, sort(x))).collect();
                Value::Object(sorted.into_iter().map(|(k, x)| (k.clone(), x)).collect())
            }
            Value::Array(a) => Value::Array(a.iter().map(sort).collect()),
            other => other.clone(),
        }
    }
    serde_json::to_string_pretty(&sort(v)).expect("value serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_sorted() {
        let mut r = RunReport::new(vec!["search".into()], json!({"n": 3, "b": 1, "a": {"z": 0, "y": 1}}));
        r.outputs = json!({"value": 4});
        r.inequalities.push(Inequality::le("x <= y", 1.0, 2.0));
        let s = r.to_json();
        let pos = |k: &str| s.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("command") < pos("inequalities") && pos("inequalities") < pos("inputs"));
        assert!(pos("y") < pos("z") && pos("a") < pos("b") && pos("b") < pos("n"));
        assert!(r.inequalities_hold());
        assert_eq!(s, r.clone().to_json());
    }
}
