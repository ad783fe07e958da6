//! Deterministic JSON and TSV emission.
//!
//! JSON is compact with keys in declaration order. TSV has a header row, tab
//! separators, no quoting and a trailing newline; nested values are written as
//! compact JSON. Both end in exactly one newline.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot serialise report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("value `{0}` cannot be written as a TSV cell")]
    Cell(String),
    #[error("report row is not an object")]
    NotARecord,
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            _ => Err(format!("unknown format `{s}` (expected json or tsv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Tsv => "tsv",
        })
    }
}

/// A single record, or a list of records under `results` with fixed columns.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Record(Value),
    Rows { columns: Vec<String>, rows: Vec<Value> },
}

impl Report {
    pub fn record<T: Serialize>(value: &T) -> Result<Self, ReportError> {
        Ok(Report::Record(serde_json::to_value(value)?))
    }

    pub fn rows<T: Serialize>(columns: &[&str], rows: &[T]) -> Result<Self, ReportError> {
        Ok(Report::Rows {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: rows.iter().map(serde_json::to_value).collect::<Result<_, _>>()?,
        })
    }

    pub fn empty() -> Self {
        Report::Rows {
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }
}

pub fn emit_report(report: &Report, format: Format) -> Result<Vec<u8>, ReportError> {
    let mut out = match format {
        Format::Json => match report {
            Report::Record(v) => serde_json::to_string(v)?,
            Report::Rows { rows, .. } => {
                let mut m = serde_json::Map::new();
                m.insert("results".into(), Value::Array(rows.clone()));
                serde_json::to_string(&Value::Object(m))?
            }
        },
        Format::Tsv => {
            let (columns, rows): (Vec<String>, Vec<&Value>) = match report {
                Report::Record(v @ Value::Object(m)) => (m.keys().cloned().collect(), vec![v]),
                Report::Record(_) => return Err(ReportError::NotARecord),
                Report::Rows { columns, rows } => (columns.clone(), rows.iter().collect()),
            };
            let mut text = columns.join("\t");
            for row in rows {
                let Value::Object(m) = row else {
                    return Err(ReportError::NotARecord);
                };
                let cells = columns
                    .iter()
                    .map(|c| cell(m.get(c).unwrap_or(&Value::Null)))
                    .collect::<Result<Vec<_>, _>>()?;
                text.push('\n');
                text.push_str(&cells.join("\t"));
            }
            text
        }
    };
    out.push('\n');
    Ok(out.into_bytes())
}

fn cell(v: &Value) -> Result<String, ReportError> {
    let s = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        Value::Array(_) | Value::Object(_) => serde_json::to_string(v)?,
    };
    if s.contains(['\t', '\n', '\r']) {
        return Err(ReportError::Cell(s));
    }
    Ok(s)
}

/// Writes to `path`, or to stdout when `None`.
pub fn write_output(bytes: &[u8], path: Option<&Path>) -> Result<(), ReportError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| ReportError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| ReportError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_results() {
        let r = Report::empty();
        assert_eq!(emit_report(&r, Format::Json).unwrap(), b"{\"results\":[]}\n");
    }

    #[test]
    fn records_keep_declared_order() {
        #[derive(Serialize)]
        struct H {
            level: u32,
            count: u64,
        }
        let r = Report::record(&H { level: 1, count: 4 }).unwrap();
        assert_eq!(emit_report(&r, Format::Json).unwrap(), b"{\"level\":1,\"count\":4}\n");
        assert_eq!(emit_report(&r, Format::Tsv).unwrap(), b"level\tcount\n1\t4\n");
    }

    #[test]
    fn tsv_table() {
        let rows: Vec<Value> = (0..4).map(|l| json!({"level": l, "count": l * l, "extra": [l]})).collect();
        let r = Report::rows(&["level", "count", "extra"], &rows).unwrap();
        let text = String::from_utf8(emit_report(&r, Format::Tsv).unwrap()).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("level\tcount\textra\n0\t0\t[0]\n"));
        assert!(text.ends_with("3\t9\t[3]\n"));
        assert_eq!(emit_report(&r, Format::Tsv).unwrap(), emit_report(&r, Format::Tsv).unwrap());
    }

    #[test]
    fn tabs_cannot_be_cells() {
        let r = Report::rows(&["name"], &[json!({"name": "a\tb"})]).unwrap();
        assert!(matches!(emit_report(&r, Format::Tsv), Err(ReportError::Cell(_))));
    }
}
