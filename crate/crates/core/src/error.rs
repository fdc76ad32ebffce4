use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("non-finite sample {value} at node (i={i}, j={j}), r={r}, z={z}")]
    NonFiniteSample {
        i: usize,
        j: usize,
        r: f64,
        z: f64,
        value: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("field parity mismatch: {0}")]
    Parity(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("singular tridiagonal system in mode {mode}, row {row}")]
    SingularSystem { mode: usize, row: usize },

    #[error("non-finite value in {what} at node (i={i}, j={j})")]
    NonFinite { what: &'static str, i: usize, j: usize },

    #[error("non-finite diagnostic column {0}")]
    NonFiniteDiagnostic(&'static str),

    #[error("time step {dt:e} fell below the floor {dt_min:e}")]
    CflFloor { dt: f64, dt_min: f64 },

    #[error("initial data: {0}")]
    InitialData(String),

    #[error("unknown {kind} '{name}' (known: {known})")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("config error at line {line}: {msg}")]
    ConfigAt { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("checkpoint {path}: {msg}")]
    Checkpoint { path: PathBuf, msg: String },

    #[error("exponent relation violated: {0}")]
    Exponents(String),

    #[error("{0}")]
    Trend(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for filesystem and checkpoint-file failures (CLI exit code 2).
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Checkpoint { .. })
    }
}
