use std::path::PathBuf;

use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in `{text}`: {source}")]
    Parse {
        text: String,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("parabolic point at s = {s}: |phi'| = {dphi:.3e}, |sin phi| = {sin_phi:.3e}, tolerance {tol:.1e}")]
    Parabolic {
        s: f64,
        dphi: f64,
        sin_phi: f64,
        tol: f64,
    },
    #[error("corrupted profile at s = {s}: f' = g' = 0")]
    SingularProfile { s: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("field `{0}` has no second s-derivative available")]
    InsufficientOrder(String),
    #[error("lambda = mu = {0}: the off-diagonal branch requires lambda != mu")]
    DiagonalCase(f64),
    #[error("vanishing denominator: {0}")]
    DenominatorZero(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("unknown catalog surface `{0}`")]
    UnknownSurface(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("profile file {path}: {message}")]
    ProfileFile { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("report serialization failed: {0}")]
    Serialize(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
