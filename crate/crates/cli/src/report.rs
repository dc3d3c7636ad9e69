use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use chebydev_core::Error;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum Failure {
    /// A verification check failed; the report was still written.
    Check(String),
    Usage(String),
    Numerical(String),
    Io(io::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) | Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Check(m) | Failure::Usage(m) | Failure::Numerical(m) => f.write_str(m),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(m) => Failure::Usage(m),
            Error::DimensionMismatch { .. } | Error::IndexOutOfRange { .. } | Error::Parse(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Numerical(other.to_string()),
        }
    }
}

/// Wraps a result with the tool name, version and the resolved config.
pub fn envelope(command: &str, config: Value, result: Value) -> Value {
    json!({
        "tool": "chebydev",
        "version": VERSION,
        "command": command,
        "config": config,
        "result": result,
    })
}

fn emit(bytes: &[u8], out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, bytes),
        None => {
            let mut h = io::stdout().lock();
            h.write_all(bytes)?;
            h.flush()
        }
    }
}

pub fn write_json(v: &Value, out: Option<&Path>) -> io::Result<()> {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    emit(s.as_bytes(), out)
}

/// CSV preceded by `#` lines carrying the version and config.
pub fn write_csv(config: &Value, header: &[&str], rows: &[Vec<String>], out: Option<&Path>) -> io::Result<()> {
    let mut buf = format!("# chebydev {VERSION}\n# config {config}\n").into_bytes();
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    emit(&buf, out)
}
