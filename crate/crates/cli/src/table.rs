use serde_json::{json, Map, Value};

use crate::spec::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// A rectangular result plus a few scalar annotations for the JSON form.
#[derive(Debug, Clone)]
pub struct Table {
    pub kind: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub meta: Vec<(String, String)>,
}

impl Table {
    pub fn new(kind: &str, columns: &[&'static str]) -> Self {
        Table { kind: kind.to_string(), columns: columns.to_vec(), rows: Vec::new(), meta: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => {
                let mut out = self.columns.join("\t");
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&r.join("\t"));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> =
                            self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), Value::String(v.clone()))).collect();
                        Value::Object(m)
                    })
                    .collect();
                let meta: Map<String, Value> =
                    self.meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
                let doc = json!({
                    "schema": format!("affkl.{}.v{}", self.kind, SCHEMA_VERSION),
                    "meta": meta,
                    "columns": self.columns,
                    "rows": rows,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
                s.push('\n');
                s
            }
        }
    }
}
