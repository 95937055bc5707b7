use std::io::{self, Write};
use std::path::Path;

use serde_json::Value;
use tempfile::NamedTempFile;

use crate::config::{Format, OutputTarget};

/// Writes `contents` to `path` through a temporary file in the same directory,
/// so readers never observe a partially written file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Sends a rendered document to the configured file, or to stdout.
pub fn emit(target: &OutputTarget, json: &Value, csv: impl FnOnce() -> String) -> io::Result<()> {
    let body = match target.format {
        Format::Json => render_json(json),
        Format::Csv => csv(),
    };
    match &target.path {
        Some(path) => write_atomic(path, body.as_bytes()),
        None => io::stdout().lock().write_all(body.as_bytes()),
    }
}
