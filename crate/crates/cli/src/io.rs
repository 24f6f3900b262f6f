use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use potkit::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Numerical failure that is neither a verification nor a simulation abort.
    pub const FAILURE: i32 = 1;
    pub const VERIFY: i32 = 2;
    pub const ABORT: i32 = 3;
    pub const USAGE: i32 = 64;
    pub const SCHEMA: i32 = 65;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self { code: exit::USAGE, message: msg.into() }
    }

    pub fn schema(msg: impl Into<String>) -> Self {
        Self { code: exit::SCHEMA, message: msg.into() }
    }
}

impl From<potkit::Error> for CliError {
    fn from(e: potkit::Error) -> Self {
        let code = match e {
            potkit::Error::Parameter(_) | potkit::Error::Domain { .. } => exit::SCHEMA,
            _ => exit::FAILURE,
        };
        Self { code, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// `--domain` accepts inline JSON or a path to a JSON file.
pub fn load_document<T: DeserializeOwned>(arg: &str, what: &str) -> CliResult<T> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::schema(format!("invalid {what}: {e}")))
}

/// Parse `re,im`.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `re,im`, got `{s}`"))?;
    let re = a.trim().parse::<f64>().map_err(|e| format!("{a}: {e}"))?;
    let im = b.trim().parse::<f64>().map_err(|e| format!("{b}: {e}"))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(format!("non-finite point `{s}`"));
    }
    Ok(Complex64::new(re, im))
}

/// Round-trip exact CSV number.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.join(","));
    }
    out
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))
}

pub fn write_file(path: &Path, content: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    fs::write(path, content).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

pub fn join(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
