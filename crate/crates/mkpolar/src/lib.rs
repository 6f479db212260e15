//! IO, file formats, and the multi-threaded simulation driver for
//! multi-kernel polar codes. The algorithms live in [`mkpolar_core`],
//! re-exported here as [`core`].

pub use mkpolar_core as core;

pub mod files;
pub mod sim;

use thiserror::Error;

/// Errors from file handling and simulation orchestration.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Code(#[from] mkpolar_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
