use std::io::Write;
use std::path::Path;

use super::Failure;

pub use wormhole_dirac::fmt_shortest as num;

/// Print to stdout; a closed pipe is not an error worth a panic.
pub fn print_stdout(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::io(Path::new("-"), e)),
        _ => Ok(()),
    }
}

/// Write through a sibling temp file and rename, so readers never see a partial file.
/// A path of "-" goes to stdout.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if path.as_os_str() == "-" {
        return print_stdout(&String::from_utf8_lossy(bytes));
    }
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Failure::io(path, e))?;
    tmp.write_all(bytes).and_then(|()| tmp.flush()).map_err(|e| Failure::io(path, e))?;
    tmp.persist(path).map_err(|e| Failure::io(path, e.error))?;
    Ok(())
}
