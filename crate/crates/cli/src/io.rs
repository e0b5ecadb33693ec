use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dms_core::group::{builtin_group, group_closure, FiniteGroup, RepSpec, DEFAULT_ORDER_CAP};

/// Anything that maps to exit code 2: bad input, unreadable or unwritable files.
#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl CliError {
    pub fn new(msg: impl Into<String>) -> Self {
        CliError(msg.into())
    }

    /// Prefixes an error with the file it came from.
    pub fn at(path: &Path, e: impl fmt::Display) -> Self {
        CliError(format!("{}: {e}", path.display()))
    }
}

macro_rules! impl_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError(e.to_string())
            }
        }
    )*};
}

impl_from!(
    dms_core::group::GroupError,
    dms_core::basis::BasisError,
    dms_core::net::NetError,
    dms_core::augment::AugmentError,
    dms_core::rigid::RigidError
);

/// `Ok(true)` passed, `Ok(false)` verification failed.
pub type CmdResult = Result<bool, CliError>;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::at(path, e))
}

/// Parses a representation file, prefixing errors with the path.
pub fn read_rep(path: &Path) -> Result<RepSpec, CliError> {
    RepSpec::from_json(&read_text(path)?).map_err(|e| CliError::at(path, e))
}

/// A built-in group name, or a representation file whose generators are
/// closed. Relative file paths are tried against `base` first.
pub fn resolve_group(name: &str, base: Option<&Path>) -> Result<Arc<FiniteGroup>, CliError> {
    if let Ok((group, _)) = builtin_group(name) {
        return Ok(group);
    }
    let path = match base.map(|b| b.join(name)) {
        Some(p) if p.exists() => p,
        _ => PathBuf::from(name),
    };
    let path = path.as_path();
    if !path.exists() {
        return Err(CliError::new(format!("{name:?} is neither a built-in group nor a representation file")));
    }
    let spec = read_rep(path)?;
    Ok(group_closure(&spec.generators, DEFAULT_ORDER_CAP)?.0)
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::at(path, e))?;
    tmp.write_all(contents).map_err(|e| CliError::at(path, e))?;
    tmp.persist(path).map_err(|e| CliError::at(path, e.error))?;
    Ok(())
}

/// `out.csv` → `out.csv.<suffix>`.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

pub fn write_json_report<T: serde::Serialize>(out: &Path, report: &T) -> Result<PathBuf, CliError> {
    let path = sidecar(out, "report.json");
    let text = serde_json::to_string_pretty(report).map_err(|e| CliError::new(e.to_string()))?;
    write_atomic(&path, text.as_bytes())?;
    Ok(path)
}
