//! Least-significant-bit carriers: raster images, 16-bit PCM and float
//! telemetry.

mod float;
mod image;
mod lsb;
mod pcm;

use thiserror::Error;

use crate::message::FrameError;

pub use float::{float_embed, float_extract, float_read_bits, FloatSeries, DEFAULT_QUANTUM};
pub use image::{image_embed, image_extract, RasterImage};
pub use lsb::{capacity, lsb_embed_bits, lsb_embed_bytes, lsb_extract_bytes, lsb_read_bits, LsbLayout, LsbSample};
pub use pcm::{pcm_embed, pcm_extract, PcmClip};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CarrierError {
    #[error("carrier holds {available} bits, message needs {required}")]
    CapacityExceeded { available: usize, required: usize },
    #[error("quantum {quantum} exceeds the allowed deviation {tolerance}")]
    QuantumTooCoarse { quantum: f64, tolerance: f64 },
    #[error("value {value} at element {index} is too large for quantum {quantum}")]
    ValueOutOfRange { index: usize, value: f64, quantum: f64 },
    #[error("invalid carrier: {0}")]
    InvalidCarrier(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
}
