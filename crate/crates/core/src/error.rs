//! Error types shared across the pipeline.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AgeError {
    /// Bad configuration supplied by the user (maps to exit code 2).
    #[error("config error: {0}")]
    Config(String),

    /// Input data failed validation (maps to exit code 2).
    #[error("validation error: {0}")]
    Validation(String),

    /// Tensor/image dimensions are inconsistent.
    #[error("shape error: {0}")]
    Shape(String),

    /// Non-finite values or numerical divergence.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image error on {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("format error: {0}")]
    Format(String),
}

impl AgeError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AgeError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn image(path: impl Into<PathBuf>, source: image::ImageError) -> Self {
        AgeError::Image {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by user input rather than internal failures.
    pub fn is_user_error(&self) -> bool {
        matches!(self, AgeError::Config(_) | AgeError::Validation(_))
    }
}

pub type Result<T> = std::result::Result<T, AgeError>;
