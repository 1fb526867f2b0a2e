use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// A value with its unit, e.g. `(23.8, "x")` or `(5.209, "s")`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub value: Value,
    pub units: &'static str,
}

/// Everything a command consumed and produced.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Metric>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<Value>,
    pub artifacts: Vec<String>,
    /// Validation failures; a non-empty list makes the command exit 1.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), ..Self::default() }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), serde_json::to_value(value).expect("serializable input"));
        self
    }

    pub fn output(&mut self, key: &str, value: impl Serialize, units: &'static str) -> &mut Self {
        let value = serde_json::to_value(value).expect("serializable output");
        self.outputs.insert(key.into(), Metric { value, units });
        self
    }

    pub fn row(&mut self, value: impl Serialize) {
        self.rows.push(serde_json::to_value(value).expect("serializable row"));
    }

    /// Writes `contents` to `dir/name`, creating `dir`, and records it.
    pub fn artifact(&mut self, dir: &Path, name: &str, contents: &str) -> std::io::Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        fs::write(&path, contents)?;
        self.artifacts.push(path.display().to_string());
        Ok(path)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.command);
        let width = self.outputs.keys().map(String::len).max().unwrap_or(0);
        for (k, m) in &self.outputs {
            let v = match &m.value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let units = if m.units == "1" { "" } else { m.units };
            let _ = writeln!(out, "  {k:<width$}  {v} {units}");
        }
        if !self.rows.is_empty() {
            out.push_str(&render_rows(&self.rows));
        }
        for a in &self.artifacts {
            let _ = writeln!(out, "  wrote {a}");
        }
        for f in &self.failures {
            let _ = writeln!(out, "  FAILED {f}");
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) if s.chars().count() > 48 => s.chars().take(45).collect::<String>() + "...",
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() && x != 0.0 && !(1e-3..1e6).contains(&x.abs()) => format!("{x:.4e}"),
            Some(x) if n.is_f64() => format!("{x:.6}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

/// Plain-text table over the keys of the first row.
fn render_rows(rows: &[Value]) -> String {
    let Some(Value::Object(first)) = rows.first() else {
        return String::new();
    };
    let keys: Vec<&String> = first.keys().collect();
    let table: Vec<Vec<String>> =
        rows.iter().map(|r| keys.iter().map(|k| r.get(k.as_str()).map(cell).unwrap_or_default()).collect()).collect();
    let widths: Vec<usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| table.iter().map(|r| r[i].chars().count()).chain([k.len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let line = |cells: Vec<&str>| {
        let mut s = String::from(" ");
        for (c, w) in cells.iter().zip(&widths) {
            let _ = write!(s, " {c:<w$}");
        }
        s.trim_end().to_owned() + "\n"
    };
    out.push_str(&line(keys.iter().map(|k| k.as_str()).collect()));
    for r in &table {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
