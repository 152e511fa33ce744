use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid turbulence spec: {0}")]
    InvalidTurbulence(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("least-squares regressor is rank deficient (condition estimate {condition:.3e}): {detail}")]
    RankDeficient { condition: f64, detail: String },

    #[error("segment [{t0}, {t1}] s is invalid: {reason}")]
    InvalidSegment { t0: f64, t1: f64, reason: String },

    #[error("mean rotor wind speed {0} m/s is not positive")]
    NonPositiveMean(f64),

    #[error("distributed load integrates to zero")]
    ZeroIntegral,

    #[error("coefficient table: {0}")]
    Table(String),

    #[error("non-finite simulation state at t = {time:.3} s: {detail}")]
    NonFinite { time: f64, detail: String },

    #[error("calibration impossible, missing cells: {}", .0.join(", "))]
    InsufficientCases(Vec<String>),

    #[error("case matrices do not match: {0}")]
    MismatchedMatrices(String),

    #[error("parse error in {path}: {detail}")]
    Parse { path: PathBuf, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
