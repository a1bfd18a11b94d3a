//! Output in text, csv or json.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// What a subcommand produced. `ok == false` means a checked property
/// failed; errors before that are reported separately.
pub struct Report {
    pub command: &'static str,
    pub ok: bool,
    pub lines: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub data: Value,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            ok: true,
            lines: Vec::new(),
            header: Vec::new(),
            rows: Vec::new(),
            data: Value::Null,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// A `name: PASS|FAIL (detail)` line that also feeds `ok`.
    pub fn verdict(&mut self, name: &str, pass: bool, detail: impl AsRef<str>) {
        self.ok &= pass;
        let status = if pass { "PASS" } else { "FAIL" };
        let detail = detail.as_ref();
        if detail.is_empty() {
            self.lines.push(format!("{name}: {status}"));
        } else {
            self.lines.push(format!("{name}: {status} ({detail})"));
        }
    }

    pub fn table(&mut self, header: &[&str], rows: Vec<Vec<String>>) {
        self.header = header.iter().map(|h| h.to_string()).collect();
        self.rows = rows;
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => {
                let v = serde_json::json!({
                    "command": self.command,
                    "ok": self.ok,
                    "summary": self.lines,
                    "columns": self.header,
                    "rows": self.rows,
                    "data": self.data,
                });
                serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
            }
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        if !self.header.is_empty() {
            let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
            for r in &self.rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let fmt_row = |cells: &[String]| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out += &fmt_row(&self.header);
            for r in &self.rows {
                out += &fmt_row(r);
            }
        }
        for l in &self.lines {
            out += l;
            out.push('\n');
        }
        out
    }

    fn csv(&self) -> String {
        let esc = |s: &String| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        };
        let mut out = String::new();
        if self.header.is_empty() {
            out += "summary\n";
            for l in &self.lines {
                out += &esc(l);
                out.push('\n');
            }
            return out;
        }
        for r in std::iter::once(&self.header).chain(&self.rows) {
            out += &r.iter().map(esc).collect::<Vec<_>>().join(",");
            out.push('\n');
        }
        out
    }
}
