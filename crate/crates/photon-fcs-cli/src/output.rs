//! Table emission shared by every subcommand.
//!
//! Output is deterministic byte-for-byte: floats render with `{:.16e}`
//! (17 significant digits, which round-trips every f64), metadata lines keep
//! their insertion order, and rows arrive fully ordered from the caller.
//! JSON output carries the same data as one object with `schema_version`,
//! `params`, and `rows` — no nested heterogeneous arrays.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::Failure;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell; `F(f64::NAN)` renders as `nan` in CSV and `null` in JSON.
#[derive(Clone, Copy)]
pub enum Cell {
    Int(u64),
    F(f64),
}

/// Header-block value: CSV `# key = value` lines, JSON `params` entries.
pub enum Meta {
    Int(u64),
    F(f64),
    S(String),
}

pub struct Table {
    pub name: &'static str,
    pub meta: Vec<(&'static str, Meta)>,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

/// 17 significant digits — the documented CSV number format.
pub fn fmt_f(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

impl Table {
    fn csv(&self) -> String {
        let mut out = String::new();
        out.push_str("# photon-fcs csv v1\n");
        out.push_str(&format!("# table = {}\n", self.name));
        for (key, value) in &self.meta {
            let rendered = match value {
                Meta::Int(v) => v.to_string(),
                Meta::F(v) => fmt_f(*v),
                Meta::S(v) => v.clone(),
            };
            out.push_str(&format!("# {key} = {rendered}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Int(v) => out.push_str(&v.to_string()),
                    Cell::F(v) => out.push_str(&fmt_f(*v)),
                }
            }
            out.push('\n');
        }
        out
    }

    fn json(&self) -> Value {
        let mut params = Map::new();
        for (key, value) in &self.meta {
            let v = match value {
                Meta::Int(v) => Value::from(*v),
                // Value::from maps non-finite floats to null
                Meta::F(v) => Value::from(*v),
                Meta::S(v) => Value::from(v.clone()),
            };
            params.insert((*key).to_string(), v);
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Int(v) => Value::from(*v),
                        Cell::F(v) => Value::from(*v),
                    };
                    obj.insert((*name).to_string(), v);
                }
                Value::Object(obj)
            })
            .collect();
        serde_json::json!({
            "schema_version": 1,
            "table": self.name,
            "params": Value::Object(params),
            "rows": rows,
        })
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), Failure> {
        let bytes = match format {
            Format::Csv => self.csv().into_bytes(),
            Format::Json => {
                let mut text =
                    serde_json::to_string_pretty(&self.json()).expect("tables are plain trees");
                text.push('\n');
                text.into_bytes()
            }
        };
        write_output(out, &bytes)
    }
}

pub fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    let result = match out {
        Some(path) => fs::write(path, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    };
    result.map_err(|e| Failure {
        code: 1,
        message: match out {
            Some(path) => format!("cannot write {}: {e}", path.display()),
            None => format!("cannot write to stdout: {e}"),
        },
    })
}
