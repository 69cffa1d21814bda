use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Result table of one run. Every row has one cell per column.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_columns(columns: Vec<String>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Run metadata written alongside every table.
#[derive(Debug, Clone)]
pub struct Header {
    pub mode: String,
    pub seed: u64,
    pub unit: String,
    pub config_hash: String,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn config_hash(canonical: &serde_json::Value) -> String {
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    digest.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_text(s: &str) -> String {
    serde_json::Value::String(s.to_string()).to_string()
}

pub fn render_csv(h: &Header, t: &Table) -> String {
    let mut out = format!(
        "# qladder {} mode={} seed={} unit={} config_hash={}\n",
        env!("CARGO_PKG_VERSION"),
        h.mode,
        h.seed,
        h.unit,
        h.config_hash
    );
    let header: Vec<String> = t.columns.iter().map(|c| csv_text(c)).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &t.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Num(v) => float(*v),
                Cell::Int(v) => v.to_string(),
                Cell::Text(s) => csv_text(s),
                Cell::Empty => String::new(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(h: &Header, t: &Table) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"qladder\": {},", json_text(env!("CARGO_PKG_VERSION")));
    let _ = writeln!(out, "  \"mode\": {},", json_text(&h.mode));
    let _ = writeln!(out, "  \"seed\": {},", h.seed);
    let _ = writeln!(out, "  \"unit\": {},", json_text(&h.unit));
    let _ = writeln!(out, "  \"config_hash\": {},", json_text(&h.config_hash));
    let cols: Vec<String> = t.columns.iter().map(|c| json_text(c)).collect();
    let _ = writeln!(out, "  \"columns\": [{}],", cols.join(", "));
    out.push_str("  \"rows\": [");
    for (i, row) in t.rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Num(v) if v.is_finite() => float(*v),
                Cell::Num(_) | Cell::Empty => "null".to_string(),
                Cell::Int(v) => v.to_string(),
                Cell::Text(s) => json_text(s),
            })
            .collect();
        let sep = if i == 0 { "\n" } else { ",\n" };
        let _ = write!(out, "{sep}    [{}]", cells.join(", "));
    }
    out.push_str(if t.rows.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    out
}

pub fn render(format: Format, h: &Header, t: &Table) -> String {
    match format {
        Format::Csv => render_csv(h, t),
        Format::Json => render_json(h, t),
    }
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("output directory {}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("output {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> Header {
        Header {
            mode: "spectrum".into(),
            seed: 3,
            unit: "dimensionless".into(),
            config_hash: "ab".into(),
        }
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 2f64.powf(-0.25), f64::MAX] {
            assert_eq!(float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["index", "label"]);
        t.push(vec![Cell::Int(0), "a,b".into()]);
        t.push(vec![Cell::Empty, Cell::Num(1.0)]);
        let s = render_csv(&header(), &t);
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# qladder "));
        assert!(lines[0].ends_with("seed=3 unit=dimensionless config_hash=ab"));
        assert_eq!(lines[1], "index,label");
        assert_eq!(lines[2], "0,\"a,b\"");
        assert_eq!(lines[3], ",1.0000000000000000e0");
    }

    #[test]
    fn json_parses() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec![Cell::Num(-0.25), Cell::Text("q\"".into())]);
        t.push(vec![Cell::Num(f64::NAN), Cell::Int(4)]);
        let v: serde_json::Value = serde_json::from_str(&render_json(&header(), &t)).unwrap();
        assert_eq!(v["rows"][0][0].as_f64(), Some(-0.25));
        assert_eq!(v["rows"][0][1], "q\"");
        assert!(v["rows"][1][0].is_null());
        assert_eq!(v["columns"][1], "y");
        let empty: serde_json::Value = serde_json::from_str(&render_json(&header(), &Table::new(&["x"]))).unwrap();
        assert_eq!(empty["rows"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn hash_is_stable() {
        let a = serde_json::json!({"b": 1, "a": [1.5, "x"]});
        let b = serde_json::json!({"a": [1.5, "x"], "b": 1});
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }
}
