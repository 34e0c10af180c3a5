use thiserror::Error;

use crate::point::Point;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {0} lies outside the admissible region of {1}")]
    Domain(Point, String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("chain certificate violated between indices {0} and {1}")]
    Certificate(usize, usize),
    #[error("internal consistency: {0}")]
    Consistency(String),
    #[error("set {0} is not synoptic: points {1} and {2} have no common successor")]
    NotSynoptic(String, usize, usize),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("stepping error: {0}")]
    Stepping(String),
    #[error("condition (*) fails for factor {factor}: {reason}")]
    Divergent { factor: usize, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("family incomplete: {0}")]
    FamilyIncomplete(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
