use std::fmt;
use std::io::Write;

use braidforge::BraidError;
use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Guard(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Guard(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<BraidError> for CliError {
    fn from(e: BraidError) -> Self {
        let message = e.to_string();
        match e {
            BraidError::GuardExceeded(_) | BraidError::UnsupportedSize { .. } => CliError::Guard(message),
            BraidError::Inconsistent(_) => CliError::Internal(message),
            _ => CliError::Usage(message),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

/// Writes to stdout; a closed pipe (as with `| head`) ends output quietly.
pub fn write_stdout(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// Rows as CSV, header first.
pub fn csv_text<'a>(records: impl IntoIterator<Item = Vec<&'a str>>) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for r in records {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 fields")
}

pub struct Printer {
    format: Format,
}

pub fn pretty(value: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(value).expect("json values serialize"))
}

fn envelope(metadata: Value, payload: Value) -> Value {
    let mut meta = json!({ "tool": "braidforge", "version": env!("CARGO_PKG_VERSION") });
    if let (Some(m), Value::Object(extra)) = (meta.as_object_mut(), metadata) {
        m.extend(extra);
    }
    json!({ "format": "json", "metadata": meta, "payload": payload })
}

/// Left-aligned columns separated by two spaces, trailing blanks trimmed.
pub fn align(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].chars().count())
                .chain([header[c].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1)));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

impl Printer {
    pub fn new(format: Format) -> Self {
        Printer { format }
    }

    /// Prints a single result; CSV is refused for non-tabular output.
    pub fn emit(&self, metadata: Value, payload: Value, text: impl FnOnce() -> String) -> Result<(), CliError> {
        match self.format {
            Format::Text => write_stdout(&format!("{}\n", text())),
            Format::Json => write_stdout(&pretty(&envelope(metadata, payload))),
            Format::Csv => Err(CliError::Usage("csv output is only available for tabular commands".into())),
        }
    }

    pub fn emit_table(
        &self,
        metadata: Value,
        payload: Value,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), CliError> {
        match self.format {
            Format::Text => write_stdout(&align(header, rows)),
            Format::Json => write_stdout(&pretty(&envelope(metadata, payload))),
            Format::Csv => write_stdout(&csv_text(
                std::iter::once(header.to_vec()).chain(rows.iter().map(|r| r.iter().map(String::as_str).collect())),
            )),
        }
    }
}

/// A metadata header line followed by one compact JSON object per line.
pub fn print_json_lines(header: &Value, lines: &[Value]) -> Result<(), CliError> {
    let mut text = format!("{header}\n");
    for (i, line) in lines.iter().enumerate() {
        let mut record = json!({ "index": i });
        if let (Some(r), Value::Object(fields)) = (record.as_object_mut(), line.clone()) {
            r.extend(fields);
        }
        text.push_str(&format!("{record}\n"));
    }
    write_stdout(&text)
}
