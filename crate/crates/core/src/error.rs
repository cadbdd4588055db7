use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("|q| = {0} is outside (0, 1)")]
    InvalidQ(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("model shape: {0}")]
    Shape(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("contour: {0}")]
    Contour(String),
    #[error("outside reliable region: {0}")]
    Unreliable(String),
    #[error("non-finite value: {0}")]
    Overflow(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
