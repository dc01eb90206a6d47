//! Error type shared across the workbench.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integration diverged: non-finite state at s = {s}")]
    IntegrationDiverged { s: f64 },

    #[error("{what}: need at least {needed} samples, got {got}")]
    TooFewSamples {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("evaluation error: {message}")]
    EvalDomain { message: String },

    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        got: usize,
    },

    #[error("manifold dimension must be odd, got {dim}")]
    EvenDimension { dim: usize },

    #[error("manifold validation failed: {0}")]
    Validation(String),

    #[error("bad manifold spec at `{path}`: {message}")]
    SpecField { path: String, message: String },

    #[error("sample grids do not match: {0}")]
    GridMismatch(String),

    #[error("curve is not unit speed: max |‖T‖ - 1| = {max_dev:.3e}")]
    NonUnitSpeed { max_dev: f64 },

    #[error("curve invariant violated: {0}")]
    CurveInvariant(String),

    #[error(
        "ambiguous osculating order at level {level}: residual crosses the rank tolerance on s ∈ [{s_lo}, {s_hi}]"
    )]
    AmbiguousOrder { level: usize, s_lo: f64, s_hi: f64 },

    #[error("operation requires a non-geodesic curve (osculating order ≥ 2)")]
    GeodesicInput,

    #[error("theorem {theorem} expects osculating order {expected}, curve has order {got}")]
    OrderMismatch {
        theorem: String,
        expected: String,
        got: usize,
    },

    #[error("prerequisite condition `{condition}` does not hold on this curve")]
    ClassificationFailed { condition: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("frame orthonormality drifted to {drift:.3e} at s = {s}")]
    OrthonormalityDrift { s: f64, drift: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("bad curve file at line {line}: {message}")]
    CurveFile { line: usize, message: String },

    #[error("{0}")]
    InvalidInput(String),
}
