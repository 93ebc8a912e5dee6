use super::lsb::{lsb_embed_bytes, lsb_extract_bytes, LsbLayout};
use super::CarrierError;
use crate::message::BitFrame;

/// Mono signed 16-bit audio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcmClip {
    sample_rate: u32,
    samples: Vec<i16>,
}

impl PcmClip {
    pub fn new(sample_rate: u32, samples: Vec<i16>) -> Result<Self, CarrierError> {
        if sample_rate == 0 {
            return Err(CarrierError::InvalidCarrier("sample rate must be positive".into()));
        }
        Ok(PcmClip { sample_rate, samples })
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn samples(&self) -> &[i16] {
        &self.samples
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Writes one bit into the LSB of each selected sample; at most one
/// quantization step (1/32768 of full scale) of change per sample.
pub fn pcm_embed(clip: &PcmClip, frame: &BitFrame, layout: LsbLayout) -> Result<PcmClip, CarrierError> {
    Ok(PcmClip { sample_rate: clip.sample_rate, samples: lsb_embed_bytes(&clip.samples, frame, layout)? })
}

pub fn pcm_extract(clip: &PcmClip, layout: LsbLayout) -> Result<String, CarrierError> {
    lsb_extract_bytes(&clip.samples, layout)
}
