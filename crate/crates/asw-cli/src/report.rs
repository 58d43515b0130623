//! Report envelope: deterministic JSON to stdout (CSV opt-in), a short
//! human summary to stderr. With `--no-timestamp` the volatile fields
//! (timestamp, timings) are omitted so identical inputs produce
//! byte-identical output.

use serde_json::{json, Map, Value};
use std::time::Instant;

pub struct RunReport {
    command: String,
    spec_digest: Option<String>,
    parameters: Value,
    results: Value,
    summary_lines: Vec<String>,
    started: Instant,
    include_volatile: bool,
}

impl RunReport {
    pub fn new(command: &str, include_volatile: bool) -> Self {
        RunReport {
            command: command.to_string(),
            spec_digest: None,
            parameters: Value::Object(Map::new()),
            results: Value::Object(Map::new()),
            summary_lines: vec![],
            started: Instant::now(),
            include_volatile,
        }
    }

    pub fn set_spec_digest(&mut self, spec_text: &str) {
        self.spec_digest = Some(format!("{:016x}", fnv1a(spec_text.as_bytes())));
    }

    pub fn set_parameters(&mut self, params: Value) {
        self.parameters = params;
    }

    pub fn set_results(&mut self, results: Value) {
        self.results = results;
    }

    pub fn summary(&mut self, line: impl Into<String>) {
        self.summary_lines.push(line.into());
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        if let Some(d) = &self.spec_digest {
            obj.insert("spec_digest".into(), json!(d));
        }
        obj.insert("parameters".into(), self.parameters.clone());
        obj.insert("results".into(), self.results.clone());
        if self.include_volatile {
            obj.insert(
                "timings".into(),
                json!({ "total_ms": self.started.elapsed().as_millis() as u64 }),
            );
            let now = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            obj.insert("timestamp".into(), json!(now));
        }
        Value::Object(obj)
    }

    /// RFC 4180 rows: section,key,value with quoting where needed.
    pub fn to_csv(&self) -> String {
        let mut rows: Vec<(String, String, String)> = vec![];
        rows.push(("meta".into(), "command".into(), self.command.clone()));
        if let Some(d) = &self.spec_digest {
            rows.push(("meta".into(), "spec_digest".into(), d.clone()));
        }
        flatten_into("parameters", &self.parameters, &mut rows);
        flatten_into("results", &self.results, &mut rows);
        if self.include_volatile {
            rows.push((
                "timings".into(),
                "total_ms".into(),
                (self.started.elapsed().as_millis() as u64).to_string(),
            ));
        }
        let mut out = String::from("section,key,value\r\n");
        for (s, k, v) in rows {
            out.push_str(&format!(
                "{},{},{}\r\n",
                csv_field(&s),
                csv_field(&k),
                csv_field(&v)
            ));
        }
        out
    }

    pub fn emit(&self, csv: bool) {
        if csv {
            print!("{}", self.to_csv());
        } else {
            println!("{}", serde_json::to_string_pretty(&self.to_json()).unwrap());
        }
        for line in &self.summary_lines {
            eprintln!("{line}");
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten_into(prefix: &str, v: &Value, rows: &mut Vec<(String, String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                match val {
                    Value::Object(_) | Value::Array(_) => flatten_into(&key, val, rows),
                    other => {
                        let section = key.split('.').next().unwrap_or("").to_string();
                        let rest = key.split_once('.').map(|x| x.1).unwrap_or(&key).to_string();
                        rows.push((section, rest, scalar_string(other)));
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                let key = format!("{prefix}.{i}");
                match val {
                    Value::Object(_) | Value::Array(_) => flatten_into(&key, val, rows),
                    other => {
                        let section = key.split('.').next().unwrap_or("").to_string();
                        let rest = key.split_once('.').map(|x| x.1).unwrap_or(&key).to_string();
                        rows.push((section, rest, scalar_string(other)));
                    }
                }
            }
        }
        other => rows.push((prefix.to_string(), String::new(), scalar_string(other))),
    }
}

fn scalar_string(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// FNV-1a 64, used as a stable digest of the canonical spec serialization.
fn fnv1a(data: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in data {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
