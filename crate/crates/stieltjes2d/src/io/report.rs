//! Flat key-value reports, rendered as `key=value` lines or CSV.

use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::grid::sha256_hex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Kv,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => write!(f, "{v}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    /// The command line after the program name.
    pub command: String,
    /// Resolved input descriptors (`f=reg:prod_ts`, grid paths with their hash).
    pub inputs: Vec<(String, String)>,
    pub fields: Vec<(String, Value)>,
    pub table: Option<Table>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn input(&mut self, role: &str, descriptor: &str) {
        self.inputs.push((role.to_string(), descriptor.to_string()));
    }

    pub fn num(&mut self, key: &str, v: f64) {
        self.fields.push((key.to_string(), Value::Num(v)));
    }

    pub fn int(&mut self, key: &str, v: i64) {
        self.fields.push((key.to_string(), Value::Int(v)));
    }

    pub fn flag(&mut self, key: &str, v: bool) {
        self.fields.push((key.to_string(), Value::Bool(v)));
    }

    pub fn text(&mut self, key: &str, v: impl Into<String>) {
        self.fields.push((key.to_string(), Value::Text(v.into())));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_num(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            Value::Num(v) => Some(*v),
            Value::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn satisfied(&self) -> Option<bool> {
        match self.get("satisfied")? {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    /// SHA-256 over the command echo and the input descriptors; timing is left out.
    pub fn digest(&self) -> String {
        let mut s = self.command.clone();
        for (role, d) in &self.inputs {
            let _ = write!(s, "\n{role}={d}");
        }
        sha256_hex(s.as_bytes())
    }

    /// Data error on the first non-finite number.
    pub fn check_finite(&self) -> Result<()> {
        for (k, v) in &self.fields {
            if let Value::Num(x) = v {
                if !x.is_finite() {
                    return Err(Error::Data(format!("report field {k} is {x}")));
                }
            }
        }
        if let Some(t) = &self.table {
            for row in &t.rows {
                if let Some(x) = row.iter().find(|x| !x.is_finite()) {
                    return Err(Error::Data(format!("table value {x} is not finite")));
                }
            }
        }
        Ok(())
    }

    fn head(&self) -> Vec<(String, String)> {
        let mut out = vec![("command".to_string(), self.command.clone()), ("digest".to_string(), self.digest())];
        out.extend(self.inputs.iter().map(|(r, d)| (format!("input.{r}"), d.clone())));
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Kv => self.render_kv(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_kv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.head() {
            let _ = writeln!(out, "{k}={v}");
        }
        for (k, v) in &self.fields {
            let _ = writeln!(out, "{k}={v}");
        }
        if let Some(t) = &self.table {
            for (r, row) in t.rows.iter().enumerate() {
                for (h, v) in t.header.iter().zip(row) {
                    let _ = writeln!(out, "row.{r}.{h}={v}");
                }
            }
        }
        let _ = writeln!(out, "elapsed_ms={}", self.elapsed_ms);
        out
    }

    /// With a table: `# key=value` comment lines, then the table. Without: one header row and one value row.
    fn render_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        let mut pre = String::new();
        match &self.table {
            Some(t) => {
                for (k, v) in self.head() {
                    let _ = writeln!(pre, "# {k}={v}");
                }
                for (k, v) in &self.fields {
                    let _ = writeln!(pre, "# {k}={v}");
                }
                let _ = w.write_record(&t.header);
                for row in &t.rows {
                    let _ = w.write_record(row.iter().map(|v| v.to_string()));
                }
            }
            None => {
                let mut keys: Vec<String> = Vec::new();
                let mut vals: Vec<String> = Vec::new();
                for (k, v) in self.head() {
                    keys.push(k);
                    vals.push(v);
                }
                for (k, v) in &self.fields {
                    keys.push(k.clone());
                    vals.push(v.to_string());
                }
                keys.push("elapsed_ms".into());
                vals.push(self.elapsed_ms.to_string());
                let _ = w.write_record(&keys);
                let _ = w.write_record(&vals);
            }
        }
        let body = String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default();
        if self.table.is_some() {
            format!("{pre}{body}# elapsed_ms={}\n", self.elapsed_ms)
        } else {
            body
        }
    }
}

/// Parse `key=value` lines back into pairs (comment and blank lines skipped).
pub fn parse_kv(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
        .collect()
}
