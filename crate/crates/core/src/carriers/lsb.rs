use serde::{Deserialize, Serialize};

use super::CarrierError;
use crate::message::{unframe_message, BitFrame};

/// A carrier element with a writable least-significant bit.
pub trait LsbSample: Copy {
    fn lsb(self) -> bool;
    fn with_lsb(self, bit: bool) -> Self;
}

impl LsbSample for u8 {
    fn lsb(self) -> bool {
        self & 1 == 1
    }

    fn with_lsb(self, bit: bool) -> Self {
        (self & !1) | bit as u8
    }
}

impl LsbSample for i16 {
    fn lsb(self) -> bool {
        self & 1 == 1
    }

    fn with_lsb(self, bit: bool) -> Self {
        (self & !1) | bit as i16
    }
}

/// Which elements carry bits: `offset`, `offset + stride`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LsbLayout {
    pub offset: usize,
    pub stride: usize,
}

impl Default for LsbLayout {
    fn default() -> Self {
        LsbLayout { offset: 0, stride: 1 }
    }
}

impl LsbLayout {
    pub fn new(offset: usize, stride: usize) -> Result<Self, CarrierError> {
        if stride == 0 {
            return Err(CarrierError::InvalidCarrier("stride must be at least 1".into()));
        }
        Ok(LsbLayout { offset, stride })
    }

    fn positions(self, len: usize) -> impl Iterator<Item = usize> {
        (self.offset.min(len)..len).step_by(self.stride.max(1))
    }
}

/// Bits available in `len` elements under the layout.
pub fn capacity(len: usize, layout: LsbLayout) -> usize {
    if layout.stride == 0 {
        return 0;
    }
    len.saturating_sub(layout.offset).div_ceil(layout.stride)
}

pub fn lsb_embed_bits<T: LsbSample>(carrier: &[T], bits: &[bool], layout: LsbLayout) -> Result<Vec<T>, CarrierError> {
    let layout = LsbLayout::new(layout.offset, layout.stride)?;
    let available = capacity(carrier.len(), layout);
    if available < bits.len() {
        return Err(CarrierError::CapacityExceeded { available, required: bits.len() });
    }
    let mut out = carrier.to_vec();
    for (pos, &bit) in layout.positions(carrier.len()).zip(bits) {
        out[pos] = out[pos].with_lsb(bit);
    }
    Ok(out)
}

pub fn lsb_embed_bytes<T: LsbSample>(
    carrier: &[T],
    frame: &BitFrame,
    layout: LsbLayout,
) -> Result<Vec<T>, CarrierError> {
    lsb_embed_bits(carrier, &frame.to_bits(), layout)
}

pub fn lsb_read_bits<T: LsbSample>(carrier: &[T], layout: LsbLayout) -> Vec<bool> {
    if layout.stride == 0 {
        return Vec::new();
    }
    layout.positions(carrier.len()).map(|p| carrier[p].lsb()).collect()
}

pub fn lsb_extract_bytes<T: LsbSample>(carrier: &[T], layout: LsbLayout) -> Result<String, CarrierError> {
    let layout = LsbLayout::new(layout.offset, layout.stride)?;
    Ok(unframe_message(&lsb_read_bits(carrier, layout))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::message::{frame_message, FrameError};
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn single_bit_writes() {
        assert_eq!(0xFFu8.with_lsb(false), 0xFE);
        assert_eq!(0xFEu8.with_lsb(false), 0xFE);
        assert_eq!(0x00u8.with_lsb(true), 0x01);
        assert_eq!((-1i16).with_lsb(false), -2);
        assert_eq!(i16::MIN.with_lsb(true), i16::MIN + 1);
        assert_eq!(i16::MAX.with_lsb(false), i16::MAX - 1);
    }

    #[test]
    fn random_bytes_round_trip_with_few_changes() {
        let mut rng = seeded(3);
        let carrier: Vec<u8> = (0..1000).map(|_| rng.random()).collect();
        let frame = frame_message("SOS").unwrap();
        let out = lsb_embed_bytes(&carrier, &frame, LsbLayout::default()).unwrap();
        assert_eq!(lsb_extract_bytes(&out, LsbLayout::default()).unwrap(), "SOS");
        let changed = carrier.iter().zip(&out).filter(|(a, b)| a != b).count();
        assert!(changed <= 64);
        assert!(carrier[64..] == out[64..]);
        assert!(carrier.iter().zip(&out).all(|(a, b)| a.abs_diff(*b) <= 1));
    }

    #[test]
    fn offset_and_stride() {
        let carrier = vec![0x80u8; 400];
        let layout = LsbLayout::new(7, 3).unwrap();
        assert_eq!(capacity(400, layout), 131);
        let frame = frame_message("HI").unwrap();
        let out = lsb_embed_bytes(&carrier, &frame, layout).unwrap();
        for (i, (a, b)) in carrier.iter().zip(&out).enumerate() {
            if i < 7 || (i - 7) % 3 != 0 {
                assert_eq!(a, b, "untouched element {i} changed");
            }
        }
        assert_eq!(lsb_extract_bytes(&out, layout).unwrap(), "HI");
        assert!(lsb_extract_bytes(&out, LsbLayout::default()).is_err());
    }

    #[test]
    fn capacity_errors() {
        let frame = frame_message("SOS").unwrap();
        assert_eq!(
            lsb_embed_bytes(&[0u8; 63], &frame, LsbLayout::default()),
            Err(CarrierError::CapacityExceeded { available: 63, required: 64 })
        );
        assert_eq!(capacity(10, LsbLayout { offset: 20, stride: 1 }), 0);
        assert!(lsb_embed_bytes(&[0u8; 100], &frame, LsbLayout { offset: 0, stride: 0 }).is_err());
    }

    #[test]
    fn clean_carrier_has_no_frame() {
        let carrier: Vec<u8> = (0..=255).cycle().take(2048).collect();
        assert!(matches!(
            lsb_extract_bytes(&carrier, LsbLayout::default()),
            Err(CarrierError::Frame(FrameError::MagicNotFound { .. }))
        ));
    }
}
