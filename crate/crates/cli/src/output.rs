use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::args::Format;

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Renders a report document. JSON is canonical; CSV has one row per record
/// with the union of record keys as columns; text has one line per record.
pub fn render(format: Format, doc: &Value) -> String {
    let empty = Vec::new();
    let records = doc["records"].as_array().unwrap_or(&empty);
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let keys: BTreeSet<&str> = records
                .iter()
                .filter_map(Value::as_object)
                .flat_map(|o| o.keys().map(String::as_str))
                .collect();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&keys).expect("in-memory write");
            for r in records {
                w.write_record(keys.iter().map(|k| cell(&r[*k]))).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
        }
        Format::Text => {
            let mut out = String::new();
            for r in records {
                let Some(obj) = r.as_object() else { continue };
                let mut line = String::new();
                if let Some(p) = obj.get("passed").and_then(Value::as_bool) {
                    line.push_str(if p { "PASS " } else { "FAIL " });
                }
                if let Some(id) = obj.get("id").and_then(Value::as_str) {
                    line.push_str(id);
                    line.push(' ');
                }
                let fields: Vec<String> = obj
                    .iter()
                    .filter(|(k, _)| !matches!(k.as_str(), "passed" | "id" | "invariant" | "module"))
                    .map(|(k, v)| format!("{k}={}", cell(v)))
                    .collect();
                line.push_str(&fields.join(" "));
                out.push_str(line.trim_end());
                out.push('\n');
            }
            if let Some(p) = doc["passed"].as_bool() {
                out.push_str(if p { "result: PASS\n" } else { "result: FAIL\n" });
            }
            out
        }
    }
}

pub fn document(command: &str, config: Value, passed: Option<bool>, records: Vec<Value>) -> Value {
    json!({
        "command": command,
        "config": config,
        "passed": passed,
        "records": records,
    })
}
