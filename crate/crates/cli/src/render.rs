use std::io::{self, IsTerminal, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub struct Renderer {
    pub format: Format,
    color: bool,
}

const GREEN: &str = "\x1b[32m";
const RED: &str = "\x1b[31m";
const RESET: &str = "\x1b[0m";

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl Renderer {
    pub fn new(format: Format, no_color: bool) -> Self {
        Self {
            format,
            color: !no_color && io::stdout().is_terminal(),
        }
    }

    fn paint(&self, text: &str) -> String {
        let code = match text {
            "efficient" | "pass" | "PASS" => GREEN,
            "inefficient" | "fail" | "FAIL" => RED,
            _ => return text.to_string(),
        };
        if self.color {
            format!("{code}{text}{RESET}")
        } else {
            text.to_string()
        }
    }

    /// One JSON object; CSV gets a header plus one row, tables get `key: value` lines.
    pub fn record(&self, value: &Value) -> io::Result<()> {
        self.records(std::slice::from_ref(value))
    }

    /// JSON lines, one CSV row per record, or one table block per record.
    pub fn records(&self, values: &[Value]) -> io::Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match self.format {
            Format::Json => {
                for v in values {
                    writeln!(out, "{v}")?;
                }
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut out);
                if let Some(Value::Object(first)) = values.first() {
                    w.write_record(first.keys())?;
                }
                for v in values {
                    if let Value::Object(map) = v {
                        w.write_record(map.values().map(cell))?;
                    }
                }
                w.flush()?;
            }
            Format::Table => {
                for (k, v) in values.iter().enumerate() {
                    if k > 0 {
                        writeln!(out)?;
                    }
                    if let Value::Object(map) = v {
                        let width = map.keys().map(String::len).max().unwrap_or(0);
                        for (key, val) in map {
                            writeln!(out, "{key:<width$}  {}", self.paint(&cell(val)))?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
