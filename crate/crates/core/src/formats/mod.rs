//! Byte-level codecs for the file formats the CLI reads and writes. Nothing
//! here touches the filesystem.

pub mod csv;
pub mod netpbm;
pub mod wav;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed netpbm: {0}")]
    MalformedNetpbm(String),
    #[error("malformed WAV: {0}")]
    MalformedWav(String),
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error(transparent)]
    Csv(#[from] ::csv::Error),
}
