use std::io;
use std::path::PathBuf;

/// Everything the command-line front end can fail with.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {reason}", path.display())]
    ConfigFile { path: PathBuf, reason: String },
    #[error("{}: line {line}: {reason}", path.display())]
    MalformedCsv { path: PathBuf, line: u64, reason: String },
    #[error("codec check at q = {q}, N = {frame_len}: {errors} of {symbols} symbols decoded wrongly")]
    DecodeErrors { q: f64, frame_len: usize, errors: u64, symbols: u64 },
    #[error("rate ordering violated:\n  {}", .0.join("\n  "))]
    Ordering(Vec<String>),
    #[error(transparent)]
    Core(#[from] ehchan_core::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub(crate) fn io_at(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
