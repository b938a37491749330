//! CSV and JSON rendering. Floats in CSV use 17 significant digits in
//! exponent notation; JSON uses the shortest representation that round-trips.

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// A rectangular numeric table with named columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        to_json(self)
    }
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Flattens a JSON document into `field,value` rows with dotted paths.
pub fn flat_csv<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut rows = Vec::new();
    flatten(String::new(), &serde_json::to_value(value)?, &mut rows);
    let mut out = String::from("field,value\n");
    for (k, v) in rows {
        out.push_str(&k);
        out.push(',');
        out.push_str(&v);
        out.push('\n');
    }
    Ok(out)
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_owned()
    } else {
        format!("{prefix}.{key}")
    }
}

fn flatten(prefix: String, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(join(&prefix, k), v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(join(&prefix, &i.to_string()), v, rows);
            }
        }
        Value::Number(n) => {
            let s = match (n.as_u64(), n.as_i64()) {
                (Some(u), _) => u.to_string(),
                (_, Some(i)) => i.to_string(),
                _ => fmt_float(n.as_f64().unwrap_or(f64::NAN)),
            };
            rows.push((prefix, s));
        }
        Value::String(s) => rows.push((prefix, s.clone())),
        Value::Bool(b) => rows.push((prefix, b.to_string())),
        Value::Null => rows.push((prefix, String::new())),
    }
}
