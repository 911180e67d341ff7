//! Canonical machine-readable output: JSON with sorted keys and a fixed
//! 15-significant-digit float rendering, or fixed-column CSV. Identical
//! invocations must produce byte-identical bytes, so nothing here depends on
//! hash order, locale, or shortest-roundtrip float formatting.

use std::collections::BTreeMap;
use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Val {
    Str(String),
    UInt(u64),
    Float(f64),
    Bool(bool),
}

impl Val {
    fn render_json(&self) -> String {
        match self {
            Val::Str(s) => json_string(s),
            Val::UInt(u) => u.to_string(),
            Val::Float(x) => format_sig(*x),
            Val::Bool(b) => b.to_string(),
        }
    }

    fn render_csv(&self) -> String {
        match self {
            Val::Str(s) => csv_field(s),
            Val::UInt(u) => u.to_string(),
            Val::Float(x) => format_sig(*x),
            Val::Bool(b) => b.to_string(),
        }
    }
}

/// Exactly 15 significant digits, normalized scientific form; also a valid
/// JSON number.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.14e}")
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The machine-readable result of one invocation.
#[derive(Debug, Clone)]
pub struct Envelope {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub results: Vec<BTreeMap<String, Val>>,
    /// Fixed column order for the CSV rendering.
    pub csv_columns: Vec<&'static str>,
}

impl Envelope {
    pub fn new(command: impl Into<String>, csv_columns: Vec<&'static str>) -> Self {
        Envelope {
            command: command.into(),
            params: BTreeMap::new(),
            results: Vec::new(),
            csv_columns,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push_row(&mut self, row: BTreeMap<String, Val>) {
        self.results.push(row);
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut out = String::new();
        out.push_str("{\"command\":");
        out.push_str(&json_string(&self.command));
        out.push_str(",\"format\":\"json\",\"params\":{");
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&json_string(k));
            out.push(':');
            out.push_str(&json_string(v));
        }
        out.push_str("},\"results\":[");
        for (i, row) in self.results.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('{');
            for (j, (k, v)) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&json_string(k));
                out.push(':');
                out.push_str(&v.render_json());
            }
            out.push('}');
        }
        out.push_str("]}");
        writeln!(w, "{out}")
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.csv_columns.join(","))?;
        for row in &self.results {
            let cells: Vec<String> = self
                .csv_columns
                .iter()
                .map(|col| row.get(*col).map(|v| v.render_csv()).unwrap_or_default())
                .collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Convenience: a row builder with the usual (rational, decimal) pair.
pub fn rational_row(q: &cycletype::Rational) -> BTreeMap<String, Val> {
    let mut row = BTreeMap::new();
    row.insert(
        "rational".to_string(),
        Val::Str(cycletype::rational::to_canonical_string(q)),
    );
    row.insert(
        "decimal".to_string(),
        Val::Float(cycletype::rational::to_f64(q)),
    );
    row
}
