use std::fmt;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
    Dot,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Dot => "dot",
        };
        f.write_str(s)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(absarith::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) if e.is_budget() => 3,
            CliError::Lib(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<absarith::Error> for CliError {
    fn from(e: absarith::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Lib(absarith::Error::Parse(e.to_string()))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// The renderings a subcommand offers; whichever the caller asked for is written.
#[derive(Default)]
pub struct Output {
    text: Option<String>,
    json: Option<String>,
    csv: Option<String>,
    svg: Option<String>,
    dot: Option<String>,
}

impl Output {
    pub fn text(mut self, s: impl Into<String>) -> Self {
        let mut s = s.into();
        if !s.ends_with('\n') {
            s.push('\n');
        }
        self.text = Some(s);
        self
    }

    pub fn json<T: Serialize>(mut self, v: &T) -> CliResult<Self> {
        let mut s = serde_json::to_string(v)?;
        s.push('\n');
        self.json = Some(s);
        Ok(self)
    }

    pub fn csv<R, I>(mut self, header: &[&str], rows: I) -> CliResult<Self>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        self.csv = Some(String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(self)
    }

    pub fn svg(mut self, s: String) -> Self {
        self.svg = Some(s);
        self
    }

    pub fn dot(mut self, s: String) -> Self {
        self.dot = Some(s);
        self
    }

    fn pick(self, format: Format) -> CliResult<String> {
        let slot = match format {
            Format::Text => self.text,
            Format::Json => self.json,
            Format::Csv => self.csv,
            Format::Svg => self.svg,
            Format::Dot => self.dot,
        };
        slot.ok_or_else(|| CliError::Usage(format!("format {format} is not available for this subcommand")))
    }

    pub fn emit(self, format: Format, dest: Option<&Path>) -> CliResult<()> {
        let body = self.pick(format)?;
        match dest {
            Some(p) => std::fs::write(p, body)?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(body.as_bytes())?;
                out.flush()?;
            }
        }
        Ok(())
    }
}

/// A float with 17 significant digits.
pub fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.16e}")
}
