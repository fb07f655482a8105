use crate::args::Format;
use crate::error::{CliError, CliResult};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// Writes `bytes` to `path` via a sibling temporary file and a rename, so
/// readers never observe a partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::usage(format!("cannot create temporary file in {}: {e}", dir.display())))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| CliError::usage(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Sends a finished document to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => atomic_write(path, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn csv_bytes<R: Serialize>(rows: &[R]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::usage(format!("csv: {e}")))?;
    }
    w.into_inner().map_err(|e| CliError::usage(format!("csv: {e}")))
}

pub fn json_bytes<D: Serialize + ?Sized>(doc: &D) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(doc).map_err(|e| CliError::usage(format!("json: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn table_bytes<R: Serialize>(format: Format, rows: &[R]) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => csv_bytes(rows),
        Format::Json => json_bytes(rows),
    }
}
