use super::lsb::{lsb_embed_bytes, lsb_extract_bytes, LsbLayout};
use super::CarrierError;
use crate::message::BitFrame;

/// 8-bit grayscale or RGB raster, row-major, channels interleaved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<u8>) -> Result<Self, CarrierError> {
        if channels != 1 && channels != 3 {
            return Err(CarrierError::InvalidCarrier(format!("{channels} channels, expected 1 or 3")));
        }
        if samples.len() != width * height * channels {
            return Err(CarrierError::InvalidCarrier(format!(
                "{} samples for a {width}x{height}x{channels} image",
                samples.len()
            )));
        }
        Ok(RasterImage { width, height, channels, samples })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    pub fn same_shape(&self, other: &RasterImage) -> bool {
        (self.width, self.height, self.channels) == (other.width, other.height, other.channels)
    }

    fn with_samples(&self, samples: Vec<u8>) -> RasterImage {
        RasterImage { samples, ..*self }
    }
}

/// Embeds across all samples in order; RGB channels are not skipped.
pub fn image_embed(img: &RasterImage, frame: &BitFrame, layout: LsbLayout) -> Result<RasterImage, CarrierError> {
    Ok(img.with_samples(lsb_embed_bytes(&img.samples, frame, layout)?))
}

pub fn image_extract(img: &RasterImage, layout: LsbLayout) -> Result<String, CarrierError> {
    lsb_extract_bytes(&img.samples, layout)
}
