//! Self-delimiting payload frame shared by every digital carrier.
//!
//! Wire layout, most-significant bit first within each byte:
//!
//! ```text
//! [0x52][0x53][len_hi][len_lo][payload ...][xor_checksum]
//! ```
//!
//! The payload is printable ASCII (0x20..=0x7E). Trailing bits after the
//! checksum are ignored by the decoder, so salt can be appended freely.

use thiserror::Error;

/// Two magic bytes opening every frame.
pub const MAGIC: [u8; 2] = [0x52, 0x53];

/// Bytes of framing overhead around the payload.
pub const OVERHEAD_BYTES: usize = 5;

/// Longest payload the 16-bit length field can describe.
pub const MAX_PAYLOAD: usize = u16::MAX as usize;

/// Number of leading bit offsets searched for the magic when unframing.
pub const DEFAULT_SCAN_WINDOW: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("message is empty")]
    EmptyMessage,
    #[error("character {ch:?} at byte {index} is not printable ASCII")]
    NonAsciiCharacter { index: usize, ch: char },
    #[error("message is {len} bytes, the frame holds at most {MAX_PAYLOAD}")]
    MessageTooLong { len: usize },
    #[error("no frame magic within the first {window} bit offsets")]
    MagicNotFound { window: usize },
    #[error("frame checksum mismatch (stored {stored:#04x}, computed {computed:#04x})")]
    ChecksumMismatch { stored: u8, computed: u8 },
    #[error("frame truncated: needs {needed} bits, {available} available")]
    TruncatedFrame { needed: usize, available: usize },
}

/// A framed ASCII payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitFrame {
    payload: Vec<u8>,
}

impl BitFrame {
    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    pub fn text(&self) -> &str {
        // payload is validated printable ASCII
        std::str::from_utf8(&self.payload).expect("frame payload is ASCII")
    }

    pub fn length(&self) -> u16 {
        self.payload.len() as u16
    }

    pub fn checksum(&self) -> u8 {
        xor_fold(&self.payload)
    }

    pub fn byte_len(&self) -> usize {
        OVERHEAD_BYTES + self.payload.len()
    }

    pub fn bit_len(&self) -> usize {
        8 * self.byte_len()
    }

    /// Serialized frame bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.byte_len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&self.length().to_be_bytes());
        out.extend_from_slice(&self.payload);
        out.push(self.checksum());
        out
    }

    /// Serialized frame bits, MSB first.
    pub fn to_bits(&self) -> Vec<bool> {
        bytes_to_bits(&self.to_bytes())
    }
}

pub fn xor_fold(bytes: &[u8]) -> u8 {
    bytes.iter().fold(0, |acc, b| acc ^ b)
}

fn is_printable(b: u8) -> bool {
    (0x20..=0x7E).contains(&b)
}

pub fn bytes_to_bits(bytes: &[u8]) -> Vec<bool> {
    bytes.iter().flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1 == 1)).collect()
}

/// Packs bits MSB-first; a trailing partial byte is zero-padded.
pub fn bits_to_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (i, &bit)| acc | ((bit as u8) << (7 - i))))
        .collect()
}

fn read_byte(bits: &[bool], at: usize) -> u8 {
    bits[at..at + 8].iter().fold(0u8, |acc, &bit| (acc << 1) | bit as u8)
}

pub fn frame_message(text: &str) -> Result<BitFrame, FrameError> {
    if text.is_empty() {
        return Err(FrameError::EmptyMessage);
    }
    if let Some((index, ch)) = text.char_indices().find(|&(_, c)| !c.is_ascii() || !is_printable(c as u8)) {
        return Err(FrameError::NonAsciiCharacter { index, ch });
    }
    if text.len() > MAX_PAYLOAD {
        return Err(FrameError::MessageTooLong { len: text.len() });
    }
    Ok(BitFrame { payload: text.as_bytes().to_vec() })
}

/// Recovers the payload from a bit stream, searching the default window.
pub fn unframe_message(bits: &[bool]) -> Result<String, FrameError> {
    unframe_message_within(bits, DEFAULT_SCAN_WINDOW)
}

/// Recovers the payload from the first valid frame starting at a bit offset
/// in `0..=window`.
///
/// A checksum failure on any magic candidate is reported in preference to a
/// truncated candidate; `MagicNotFound` means no candidate header appeared.
pub fn unframe_message_within(bits: &[bool], window: usize) -> Result<String, FrameError> {
    let header_bits = 32;
    let mut checksum_failure = None;
    let mut truncation = None;

    let last_start = bits.len().saturating_sub(16).min(window);
    for start in 0..=last_start {
        if bits.len() < start + 16 {
            break;
        }
        if read_byte(bits, start) != MAGIC[0] || read_byte(bits, start + 8) != MAGIC[1] {
            continue;
        }
        if bits.len() < start + header_bits {
            truncation.get_or_insert(FrameError::TruncatedFrame { needed: header_bits, available: bits.len() - start });
            continue;
        }
        let len = u16::from_be_bytes([read_byte(bits, start + 16), read_byte(bits, start + 24)]) as usize;
        if len == 0 {
            continue;
        }
        let needed = 8 * (OVERHEAD_BYTES + len);
        if bits.len() < start + needed {
            truncation.get_or_insert(FrameError::TruncatedFrame { needed, available: bits.len() - start });
            continue;
        }
        let payload: Vec<u8> = (0..len).map(|i| read_byte(bits, start + header_bits + 8 * i)).collect();
        let stored = read_byte(bits, start + header_bits + 8 * len);
        let computed = xor_fold(&payload);
        if stored != computed {
            checksum_failure.get_or_insert(FrameError::ChecksumMismatch { stored, computed });
            continue;
        }
        if !payload.iter().copied().all(is_printable) {
            continue;
        }
        return Ok(String::from_utf8(payload).expect("printable ASCII"));
    }

    Err(checksum_failure.or(truncation).unwrap_or(FrameError::MagicNotFound { window }))
}
