use std::path::PathBuf;

use thiserror::Error;

use crate::geometry::Label;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("a partition needs at least two grains, got {0}")]
    TooFewGrains(u32),
    #[error("label {0} out of range")]
    LabelOutOfRange(Label),
    #[error("edge {edge} references a missing vertex")]
    VertexOutOfRange { edge: usize },
    #[error("edge {edge} starts and ends at the same vertex")]
    LoopEdge { edge: usize },
    #[error("non-finite vertex coordinate")]
    NonFinite,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("grain {0} is the exterior grain and has infinite area")]
    InfiniteArea(Label),
    #[error("grain {0} has no boundary edges")]
    EmptyGrain(Label),
    #[error("boundary of grain {label} is not closed at vertex {vertex}")]
    OpenBoundary { label: Label, vertex: usize },
    #[error("boundary of grain {label} is negatively oriented (signed area {area})")]
    NegativeOrientation { label: Label, area: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("heat kernel evaluated at t = {t} not before reference time s = {s}")]
    TimeNotBeforeReference { t: f64, s: f64 },
    #[error("truncation radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("smoothing scale must lie in (0, 1), got {0}")]
    InvalidEps(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("|h_eps| = {value:.6e} exceeds 2 eps^-2 = {bound:.6e} at ({x:.6}, {y:.6})")]
    CurvatureBound {
        value: f64,
        bound: f64,
        x: f64,
        y: f64,
    },
    #[error("|grad h_eps| = {value:.6e} exceeds 2 eps^-4 = {bound:.6e} at ({x:.6}, {y:.6})")]
    GradientBound {
        value: f64,
        bound: f64,
        x: f64,
        y: f64,
    },
    #[error("non-finite quadrature result at ({x:.6}, {y:.6})")]
    NonFinite { x: f64, y: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("run aborted at t = {time}: {reason}")]
    Aborted {
        time: f64,
        reason: String,
        dump: Option<PathBuf>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("test function is negative at ({x}, {y})")]
    NegativeTestFunction { x: f64, y: f64 },
    #[error("grain {0} is the exterior grain")]
    ExteriorGrain(Label),
    #[error("invalid time window [{t1}, {t2}]")]
    InvalidWindow { t1: f64, t2: f64 },
    #[error("reference time {s} not after window end {t2}")]
    ReferenceTime { t2: f64, s: f64 },
    #[error("trajectory has no frames")]
    EmptyTrajectory,
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: malformed snapshot: {message}")]
    Snapshot { path: PathBuf, message: String },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl IoError {
    pub fn file(path: &std::path::Path, source: std::io::Error) -> Self {
        IoError::File {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Failure to diagnose a stored trajectory directory.
#[derive(Debug, Error)]
pub enum DiagnoseError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("stored config: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
}

impl From<IoError> for RunError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::File { source, .. } => RunError::Io(source),
            other => RunError::Io(std::io::Error::other(other.to_string())),
        }
    }
}
