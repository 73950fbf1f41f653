use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::args::Format;
use crate::error::{CliError, CliResult};

/// Rewrites comma-separated text for `format`. Fields never contain commas.
pub fn convert(text: &str, format: Format) -> String {
    match format {
        Format::Csv => text.to_string(),
        Format::Tsv => text.replace(',', "\t"),
    }
}

pub fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Tsv => "tsv",
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| CliError::Compute(format!("writing {}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

/// Sends a run's text to `path`, or to standard output.
pub fn emit(path: Option<&Path>, text: &str, format: Format) -> CliResult<()> {
    let text = convert(text, format);
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
