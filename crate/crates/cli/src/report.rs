use std::io::Write;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Rows for CSV output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub table: Option<Table>,
    /// Set when a budget stopped the computation after partial results.
    pub truncation: Option<selfless_core::Error>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, outputs: Value) -> Self {
        Report {
            command: command.into(),
            inputs,
            outputs,
            table: None,
            truncation: None,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    /// Everything that is deterministic in the inputs and configuration.
    pub fn body(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "truncated": self.truncation.is_some(),
            "truncation": self.truncation.as_ref().map(|e| e.to_string()),
        })
    }

    pub fn body_sha256(&self) -> String {
        hex::encode(Sha256::digest(self.body().to_string().as_bytes()))
    }

    /// Pretty JSON; `diagnostics` (timing, cache counters) sits outside the hash.
    pub fn to_json(&self, diagnostics: Option<Value>) -> String {
        let mut obj = match self.body() {
            Value::Object(o) => o,
            _ => Map::new(),
        };
        obj.insert("body_sha256".into(), Value::String(self.body_sha256()));
        if let Some(d) = diagnostics {
            obj.insert("diagnostics".into(), d);
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
        text.push('\n');
        text
    }

    /// The table when there is one, otherwise `key,value` rows flattened from the body.
    pub fn write_csv<W: Write>(&self, out: W) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        match &self.table {
            Some(t) => {
                w.write_record(&t.headers)?;
                for r in &t.rows {
                    w.write_record(r)?;
                }
            }
            None => {
                w.write_record(["key", "value"])?;
                let mut rows = Vec::new();
                flatten("", &self.body(), &mut rows);
                for (k, v) in rows {
                    w.write_record([k, v])?;
                }
            }
        }
        w.flush().map_err(|e| CliError::io("csv output", e))?;
        Ok(())
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv writer emits utf-8"))
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(o) => o.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
