use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::format::Document;

/// A command's result. The human table and the `--json` form are both rendered
/// from this one structure.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    /// `None` for commands that compute rather than verify.
    pub holds: Option<bool>,
    pub data: Map<String, Value>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, header: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            holds: None,
            data: Map::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn verdict(&mut self, holds: bool) {
        self.holds = Some(holds);
    }

    pub fn document(&self) -> Document {
        let table: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.header.iter().cloned().zip(r.iter().map(|c| json!(c))).collect()))
            .collect();
        Document::Report(json!({
            "command": self.command,
            "holds": self.holds,
            "data": Value::Object(self.data.clone()),
            "table": table,
            "notes": self.notes,
        }))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        if !self.header.is_empty() {
            let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
            for r in &self.rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(&self.header));
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            let _ = writeln!(out, "{}", rule.join("  "));
            for r in &self.rows {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        match self.holds {
            Some(true) => out.push_str("result: PASS\n"),
            Some(false) => out.push_str("result: FAIL\n"),
            None => {}
        }
        out
    }
}

/// `"1:2 2:1"` for a degree → dimension table; `"0"` when empty.
pub fn series_string(m: &BTreeMap<i32, usize>) -> String {
    if m.is_empty() {
        return "0".to_string();
    }
    m.iter().map(|(d, n)| format!("{d}:{n}")).collect::<Vec<_>>().join(" ")
}

pub fn series_json(m: &BTreeMap<i32, usize>) -> Value {
    Value::Array(m.iter().map(|(d, n)| json!([d, n])).collect())
}
