use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("missing config key `{0}`")]
    MissingKey(String),

    #[error("unknown config key `{key}` on line {line}")]
    UnknownKey { key: String, line: usize },

    #[error("line {line}: cannot parse value for `{key}`: {value:?}")]
    BadValue {
        key: String,
        value: String,
        line: usize,
    },

    #[error("analytic totals require x0 at the domain midpoint ({midpoint}), got {x0}")]
    NotMidpoint { x0: f64, midpoint: f64 },

    #[error("step {step}: non-positive depth {h} at cell {cell}")]
    NonPositiveDepth { step: u64, cell: usize, h: f64 },

    #[error("step {step}: non-finite {field} at cell {cell}")]
    NonFinite {
        step: u64,
        field: &'static str,
        cell: usize,
    },

    #[error("step {step}: tridiagonal elimination broke down at row {row}")]
    SingularSystem { step: u64, row: usize },

    #[error("target time {target} is before current time {current}")]
    TimeReversal { target: f64, current: f64 },

    #[error("need at least {needed} cells, got {got}")]
    TooFewCells { needed: usize, got: usize },

    #[error("grids are not nested: {0}")]
    GridMismatch(String),

    #[error("reference solution undefined: {0}")]
    Domain(String),

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv parse error in {path} line {line}: {msg}")]
    Csv {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "invalid_config",
            Error::MissingKey(_) => "missing_key",
            Error::UnknownKey { .. } => "unknown_key",
            Error::BadValue { .. } => "bad_value",
            Error::NotMidpoint { .. } => "not_midpoint",
            Error::NonPositiveDepth { .. } => "non_positive_depth",
            Error::NonFinite { .. } => "non_finite",
            Error::SingularSystem { .. } => "singular_system",
            Error::TimeReversal { .. } => "time_reversal",
            Error::TooFewCells { .. } => "too_few_cells",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::Domain(_) => "domain",
            Error::Manifest(_) => "manifest",
            Error::Io { .. } => "io",
            Error::Csv { .. } => "csv",
        }
    }

    /// 2 for problems with the input files, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_)
            | Error::MissingKey(_)
            | Error::UnknownKey { .. }
            | Error::BadValue { .. }
            | Error::Manifest(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
