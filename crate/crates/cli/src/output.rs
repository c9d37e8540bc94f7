//! CSV tables, the output directory and the run manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use resonant_core::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;

/// Environment variable naming the default output root.
pub const OUTPUT_ENV: &str = "RESONANT_OUTPUT_DIR";
pub const DEFAULT_ROOT: &str = "resonant-out";
pub const MANIFEST: &str = "manifest.json";
pub const RESOLVED_CONFIG: &str = "run.toml";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
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

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
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

impl From<char> for Cell {
    fn from(v: char) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits, locale independent.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v == 0.0 {
        "0.0000000000000000e0".into()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Num(_) => Value::String(fmt_num(match self {
                Cell::Num(v) => *v,
                _ => unreachable!(),
            })),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

/// One CSV file: `#` comment lines, a `#` column line, then rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            comments: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(mut self, line: impl Into<String>) -> Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "{}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "# {}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, Value> =
                    self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "comments": self.comments, "rows": rows })
    }
}

/// Splits a complex number into two cells.
pub fn cx(z: Complex64) -> [Cell; 2] {
    [Cell::Num(z.re), Cell::Num(z.im)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub file: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub config: RunConfig,
    pub outputs: Vec<OutputRecord>,
    #[serde(default)]
    pub diagnostics: BTreeMap<String, Value>,
}

impl Manifest {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| crate::failure::config_error(format!("{}: {e}", path.display())))
    }
}

/// Directory that collects everything one command writes.
pub struct Output {
    pub dir: PathBuf,
    json: bool,
    records: Vec<OutputRecord>,
    pub diagnostics: BTreeMap<String, Value>,
}

impl Output {
    /// `--out` if given, otherwise `$RESONANT_OUTPUT_DIR/<slug>` (or
    /// `resonant-out/<slug>`).
    pub fn resolve(explicit: Option<&Path>, slug: &str) -> PathBuf {
        match explicit {
            Some(p) => p.to_path_buf(),
            None => {
                let root = std::env::var_os(OUTPUT_ENV).map_or_else(|| PathBuf::from(DEFAULT_ROOT), PathBuf::from);
                root.join(slug)
            }
        }
    }

    pub fn create(dir: PathBuf, json: bool) -> anyhow::Result<Self> {
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir,
            json,
            records: Vec::new(),
            diagnostics: BTreeMap::new(),
        })
    }

    pub fn write_table(&mut self, table: &Table) -> anyhow::Result<()> {
        let file = format!("{}.csv", table.name);
        self.write_file(&file, &table.to_csv())?;
        self.records.push(OutputRecord {
            file,
            rows: table.rows.len(),
        });
        if self.json {
            let file = format!("{}.json", table.name);
            let text = serde_json::to_string_pretty(&table.to_json())? + "\n";
            self.write_file(&file, &text)?;
            self.records.push(OutputRecord {
                file,
                rows: table.rows.len(),
            });
        }
        Ok(())
    }

    /// Writes a free-form JSON document.
    pub fn write_json(&mut self, name: &str, value: &Value) -> anyhow::Result<()> {
        let file = format!("{name}.json");
        self.write_file(&file, &(serde_json::to_string_pretty(value)? + "\n"))?;
        self.records.push(OutputRecord { file, rows: 0 });
        Ok(())
    }

    fn write_file(&self, name: &str, text: &str) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.diagnostics.insert(key.to_string(), value.into());
    }

    /// Writes `run.toml` and `manifest.json`.
    pub fn finish(&mut self, command: &str, config: &RunConfig, error: Option<&anyhow::Error>) -> anyhow::Result<()> {
        self.write_file(RESOLVED_CONFIG, &config.to_toml())?;
        let manifest = Manifest {
            tool: "resonant".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            status: if error.is_some() { "failed".into() } else { "ok".into() },
            error: error.map(|e| format!("{e:#}")),
            config: config.clone(),
            outputs: self.records.clone(),
            diagnostics: self.diagnostics.clone(),
        };
        self.write_file(MANIFEST, &(serde_json::to_string_pretty(&manifest)? + "\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_seventeen_digits() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(-2.5), "-2.5000000000000000e0");
        assert_eq!(fmt_num(f64::NAN), "nan");
        let x = 1.4309486581029545770_f64;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new("t", &["a", "b"]).comment("units: none");
        t.push(vec![1usize.into(), 0.5.into()]);
        assert_eq!(t.to_csv(), "# units: none\n# a,b\n1,5.0000000000000000e-1\n");
    }
}
