use serde::Serialize;
use stegabot_core::carriers::{
    capacity, float_embed, lsb_embed_bits, FloatSeries, LsbLayout, LsbSample, PcmClip, RasterImage,
};
use stegabot_core::formats::{csv, netpbm, wav};
use stegabot_core::message::{add_salt, frame_message, BitFrame};

use super::layout;
use crate::io::{self, render};
use crate::{CarrierKind, CliError, EmbedArgs, Format};

#[derive(Debug, Serialize)]
pub struct EmbedSummary {
    pub carrier: &'static str,
    pub message_chars: usize,
    pub frame_bits: usize,
    pub embedded_bits: usize,
    pub capacity_bits: usize,
    pub elements_changed: usize,
    /// Largest change to one element, in LSB steps or carrier units.
    pub max_change: f64,
}

fn payload_bits(frame: &BitFrame, salt: Option<f64>, seed: u64) -> Result<Vec<bool>, CliError> {
    let bits = frame.to_bits();
    match salt {
        None => Ok(bits),
        Some(r) if (0.0..1.0).contains(&r) => Ok(add_salt(&bits, r, seed)),
        Some(r) => Err(CliError::Usage(format!("salt ratio {r} outside [0, 1)"))),
    }
}

fn lsb_summary<T: LsbSample + Copy + Into<i32>>(
    carrier: &'static str,
    before: &[T],
    after: &[T],
    frame: &BitFrame,
    bits: usize,
    lay: LsbLayout,
) -> EmbedSummary {
    let diffs = before.iter().zip(after).map(|(&a, &b)| (a.into() - b.into()).abs());
    let (changed, max) = diffs.fold((0, 0), |(n, m), d| (n + (d != 0) as usize, m.max(d)));
    EmbedSummary {
        carrier,
        message_chars: frame.payload().len(),
        frame_bits: frame.bit_len(),
        embedded_bits: bits,
        capacity_bits: capacity(before.len(), lay),
        elements_changed: changed,
        max_change: max as f64,
    }
}

pub fn embed_image(img: &RasterImage, bits: &[bool], lay: LsbLayout) -> Result<RasterImage, CliError> {
    let samples = lsb_embed_bits(img.samples(), bits, lay)?;
    Ok(RasterImage::new(img.width(), img.height(), img.channels(), samples)?)
}

pub fn embed_pcm(clip: &PcmClip, bits: &[bool], lay: LsbLayout) -> Result<PcmClip, CliError> {
    Ok(PcmClip::new(clip.sample_rate(), lsb_embed_bits(clip.samples(), bits, lay)?)?)
}

pub fn run(a: &EmbedArgs, fmt: Format) -> Result<String, CliError> {
    let frame = frame_message(&a.message)?;
    let lay = layout(&a.lsb)?;
    let summary = match io::carrier_kind(&a.input, a.carrier)? {
        CarrierKind::Image => {
            let img = io::load_image(&a.input)?;
            let bits = payload_bits(&frame, a.salt, a.seed)?;
            let stego = embed_image(&img, &bits, lay)?;
            io::write_bytes(&a.out, &netpbm::encode(&stego))?;
            lsb_summary("image", img.samples(), stego.samples(), &frame, bits.len(), lay)
        }
        CarrierKind::Pcm => {
            let file = io::load_wav(&a.input)?;
            let bits = payload_bits(&frame, a.salt, a.seed)?;
            let stego = embed_pcm(file.clip(), &bits, lay)?;
            let summary = lsb_summary("pcm", file.clip().samples(), stego.samples(), &frame, bits.len(), lay);
            io::write_bytes(&a.out, &wav::encode(&file.with_clip(stego)?))?;
            summary
        }
        CarrierKind::Float => {
            if a.salt.is_some() {
                return Err(CliError::Usage("salt is supported for image and PCM carriers only".into()));
            }
            if (a.lsb.offset, a.lsb.stride) != (0, 1) {
                return Err(CliError::Usage("float carriers use every value; drop --offset/--stride".into()));
            }
            let series = io::load_float(&a.input, a.lsb.quantum)?;
            let stego = float_embed(&series, &frame, a.max_deviation)?;
            let text = csv::write_float_series(&stego, a.decimals);
            // what a reader will see after decimal rounding
            let written = csv::read_float_series(&text, a.lsb.quantum)?;
            io::write_bytes(&a.out, text.as_bytes())?;
            float_summary(&series, &written, &frame)
        }
    };
    log::info!("embedded {} bits, changed {} elements", summary.embedded_bits, summary.elements_changed);
    Ok(render(&summary, fmt))
}

fn float_summary(before: &FloatSeries, after: &FloatSeries, frame: &BitFrame) -> EmbedSummary {
    let diffs: Vec<f64> = before.scalars().zip(after.scalars()).map(|(a, b)| (a - b).abs()).collect();
    EmbedSummary {
        carrier: "float",
        message_chars: frame.payload().len(),
        frame_bits: frame.bit_len(),
        embedded_bits: frame.bit_len(),
        capacity_bits: before.scalar_count(),
        elements_changed: diffs.iter().filter(|d| **d != 0.0).count(),
        max_change: diffs.iter().copied().fold(0.0, f64::max),
    }
}
