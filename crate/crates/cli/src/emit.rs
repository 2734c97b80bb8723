//! Record output in JSON Lines, CSV or text.

use crate::args::Format;
use rayon::prelude::*;
use serde_json::{Map, Value};
use std::io::{self, Write};

pub type Record = Map<String, Value>;

/// How many items are computed in parallel before their records are written.
const CHUNK: usize = 64;

pub struct Emitter<'w> {
    format: Format,
    out: &'w mut dyn Write,
    columns: Vec<String>,
    header_written: bool,
}

impl<'w> Emitter<'w> {
    /// `columns` are the CSV header and the fields shown in text mode.
    pub fn new(format: Format, out: &'w mut dyn Write, columns: &[&str]) -> Self {
        Emitter {
            format,
            out,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            header_written: false,
        }
    }

    pub fn with_columns(format: Format, out: &'w mut dyn Write, columns: Vec<String>) -> Self {
        Emitter {
            format,
            out,
            columns,
            header_written: false,
        }
    }

    fn header(&mut self) -> io::Result<()> {
        if self.format == Format::Csv && !self.header_written {
            self.header_written = true;
            let line = csv_line(self.columns.iter().map(String::as_str))?;
            self.out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn emit(&mut self, rec: &Record) -> io::Result<()> {
        match self.format {
            Format::Json => {
                let line = serde_json::to_string(rec).map_err(io::Error::other)?;
                writeln!(self.out, "{line}")?;
            }
            Format::Csv => {
                self.header()?;
                let cells: Vec<String> = self.columns.iter().map(|c| cell(rec.get(c))).collect();
                let line = csv_line(cells.iter().map(String::as_str))?;
                self.out.write_all(line.as_bytes())?;
            }
            Format::Text => {
                let parts: Vec<String> = self
                    .columns
                    .iter()
                    .filter_map(|c| {
                        let v = cell(rec.get(c));
                        (!v.is_empty()).then(|| format!("{c}={v}"))
                    })
                    .collect();
                writeln!(self.out, "{}", parts.join(" "))?;
            }
        }
        self.out.flush()
    }

    /// Writes the CSV header even when no record was emitted.
    pub fn finish(&mut self) -> io::Result<()> {
        self.header()?;
        self.out.flush()
    }
}

fn csv_line<'a>(cells: impl Iterator<Item = &'a str>) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(cells).map_err(io::Error::other)?;
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(io::Error::other)
}

/// A field as a flat string: `{num, den}` objects print as `num/den`,
/// other compound values as compact JSON.
pub fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Object(o)) if o.contains_key("num") && o.contains_key("den") => {
            let num = o["num"].as_str().unwrap_or("?");
            let den = o["den"].as_str().unwrap_or("?");
            format!("{num}/{den}")
        }
        Some(other) => other.to_string(),
    }
}

/// Maps `items` in parallel and emits the records in input order, a chunk
/// at a time.
pub fn par_emit<T, F>(items: &[T], f: F, mut sink: impl FnMut(Vec<Record>) -> io::Result<()>) -> io::Result<()>
where
    T: Sync,
    F: Fn(&T) -> Vec<Record> + Sync,
{
    for chunk in items.chunks(CHUNK) {
        let recs: Vec<Vec<Record>> = chunk.par_iter().map(&f).collect();
        sink(recs.into_iter().flatten().collect())?;
    }
    Ok(())
}

/// The JSON form of a library error.
pub fn error_value(e: &xorbounds::Error) -> Value {
    let kind = match e {
        xorbounds::Error::Parse { .. } => "parse",
        xorbounds::Error::Capacity { .. } => "capacity",
        xorbounds::Error::Dimension(_) => "dimension",
        xorbounds::Error::Invalid(_) => "invalid",
        xorbounds::Error::Infeasible(_) => "infeasible",
        xorbounds::Error::Defect(_) => "defect",
    };
    serde_json::json!({"kind": kind, "message": e.to_string()})
}

/// Builds a record from key/value pairs.
#[macro_export]
macro_rules! record {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = $crate::emit::Record::new();
        $(m.insert(($k).to_string(), serde_json::json!($v));)*
        m
    }};
}
