//! Bit-stable JSON and CSV output: sorted keys, floats at 12 significant
//! digits.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// `--out` takes a format name (written to stdout) or a file path whose
/// extension picks the format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Stdout(Format),
    File(PathBuf, Format),
}

impl FromStr for Output {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" | "-" => return Ok(Output::Stdout(Format::Json)),
            "csv" => return Ok(Output::Stdout(Format::Csv)),
            _ => {}
        }
        let path = PathBuf::from(s);
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Ok(Output::File(path, Format::Json)),
            Some("csv") => Ok(Output::File(path, Format::Csv)),
            _ => Err(format!(
                "`{s}`: expected json, csv or a path ending in .json or .csv"
            )),
        }
    }
}

impl Output {
    pub fn format(&self) -> Format {
        match self {
            Output::Stdout(f) | Output::File(_, f) => *f,
        }
    }

    pub fn write(&self, text: &str) -> Result<()> {
        match self {
            Output::Stdout(_) => {
                io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|source| CliError::Io {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })
            }
            Output::File(p, _) => write_file(p, text),
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn format_f64(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 {
        // no negative zero
        "0".into()
    } else {
        r.to_string()
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(if x == 0.0 { 0.0 } else { x })
                .map_or(Value::Null, Value::Number);
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("reports serialize");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u128),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_f64(*x),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

pub fn to_csv(header: &[&str], rows: &[Vec<Cell>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(Cell::render))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io {
        path: PathBuf::from("<csv>"),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(format_f64(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_f64(-0.0), "0");
        assert_eq!(format_f64(2.0), "2");
        assert_eq!(round12(f64::INFINITY), f64::INFINITY);
    }

    #[test]
    fn sorted_keys_and_rounding() {
        let v = serde_json::json!({"b": 0.1 + 0.2, "a": [1, 2.0000000000001]});
        assert_eq!(
            to_json(&v),
            "{\n  \"a\": [\n    1,\n    2.0\n  ],\n  \"b\": 0.3\n}\n"
        );
    }

    #[test]
    fn empty_table_keeps_header() {
        assert_eq!(
            to_csv(&["n", "sup_norm", "nth_root"], &[]).unwrap(),
            "n,sup_norm,nth_root\n"
        );
    }

    #[test]
    fn output_targets() {
        assert_eq!(
            "csv".parse::<Output>().unwrap(),
            Output::Stdout(Format::Csv)
        );
        assert_eq!(
            "x/rho.csv".parse::<Output>().unwrap(),
            Output::File(PathBuf::from("x/rho.csv"), Format::Csv)
        );
        assert!("rho.txt".parse::<Output>().is_err());
    }
}
