//! RIFF/WAVE with 16-bit little-endian mono PCM.
//!
//! Chunks other than `data` are kept byte-for-byte, in their original order,
//! so re-encoding a file only changes the samples.

use super::FormatError;
use crate::carriers::PcmClip;

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError::MalformedWav(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WavChunk {
    pub id: [u8; 4],
    pub data: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WavFile {
    chunks: Vec<WavChunk>,
    clip: PcmClip,
}

impl WavFile {
    pub fn from_clip(clip: PcmClip) -> Self {
        let rate = clip.sample_rate();
        let mut fmt = Vec::with_capacity(16);
        fmt.extend(1u16.to_le_bytes()); // PCM
        fmt.extend(1u16.to_le_bytes()); // mono
        fmt.extend(rate.to_le_bytes());
        fmt.extend((rate * 2).to_le_bytes());
        fmt.extend(2u16.to_le_bytes());
        fmt.extend(16u16.to_le_bytes());
        WavFile {
            chunks: vec![WavChunk { id: *b"fmt ", data: fmt }, WavChunk { id: *b"data", data: Vec::new() }],
            clip,
        }
    }

    pub fn clip(&self) -> &PcmClip {
        &self.clip
    }

    /// Chunks in file order; the `data` chunk body is regenerated on encode.
    pub fn chunks(&self) -> &[WavChunk] {
        &self.chunks
    }

    /// Swaps in new samples. The sample rate must match the `fmt ` chunk.
    pub fn with_clip(&self, clip: PcmClip) -> Result<WavFile, FormatError> {
        if clip.sample_rate() != self.clip.sample_rate() {
            return Err(bad(format!(
                "sample rate {} differs from the file's {}",
                clip.sample_rate(),
                self.clip.sample_rate()
            )));
        }
        Ok(WavFile { chunks: self.chunks.clone(), clip })
    }
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

pub fn decode(bytes: &[u8]) -> Result<WavFile, FormatError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(bad("missing RIFF/WAVE header"));
    }
    let riff_end = (8 + u32_at(bytes, 4) as usize).min(bytes.len());

    let mut chunks = Vec::new();
    let mut pos = 12;
    while pos + 8 <= riff_end {
        let id: [u8; 4] = bytes[pos..pos + 4].try_into().expect("4 bytes");
        let len = u32_at(bytes, pos + 4) as usize;
        let body = bytes
            .get(pos + 8..pos + 8 + len)
            .ok_or_else(|| bad(format!("chunk {:?} overruns the file", String::from_utf8_lossy(&id))))?;
        chunks.push(WavChunk { id, data: body.to_vec() });
        pos += 8 + len + (len & 1);
    }

    let fmt = chunks.iter().find(|c| &c.id == b"fmt ").ok_or_else(|| bad("no fmt chunk"))?;
    if fmt.data.len() < 16 {
        return Err(bad("fmt chunk too short"));
    }
    let (format, channels, rate, bits) =
        (u16_at(&fmt.data, 0), u16_at(&fmt.data, 2), u32_at(&fmt.data, 4), u16_at(&fmt.data, 14));
    if format != 1 {
        return Err(bad(format!("format tag {format}, only PCM (1) is supported")));
    }
    if channels != 1 || bits != 16 {
        return Err(bad(format!("{channels} channel(s) at {bits} bits, expected mono 16-bit")));
    }
    let data = chunks.iter().find(|c| &c.id == b"data").ok_or_else(|| bad("no data chunk"))?;
    if data.data.len() % 2 != 0 {
        return Err(bad("data chunk has an odd byte count"));
    }
    let samples = data.data.chunks_exact(2).map(|s| i16::from_le_bytes([s[0], s[1]])).collect();
    let clip = PcmClip::new(rate, samples).map_err(|e| bad(e.to_string()))?;

    for c in &mut chunks {
        if &c.id == b"data" {
            c.data.clear();
        }
    }
    Ok(WavFile { chunks, clip })
}

pub fn encode(wav: &WavFile) -> Vec<u8> {
    let sample_bytes: Vec<u8> = wav.clip.samples().iter().flat_map(|s| s.to_le_bytes()).collect();
    let mut body = Vec::new();
    for chunk in &wav.chunks {
        let data = if &chunk.id == b"data" { &sample_bytes } else { &chunk.data };
        body.extend_from_slice(&chunk.id);
        body.extend((data.len() as u32).to_le_bytes());
        body.extend_from_slice(data);
        if data.len() % 2 == 1 {
            body.push(0);
        }
    }
    let mut out = Vec::with_capacity(12 + body.len());
    out.extend_from_slice(b"RIFF");
    out.extend((4 + body.len() as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend(body);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clip() -> PcmClip {
        PcmClip::new(16_000, vec![0, 1, -1, i16::MAX, i16::MIN, 1234]).unwrap()
    }

    #[test]
    fn round_trip_fresh_file() {
        let wav = WavFile::from_clip(clip());
        let bytes = encode(&wav);
        assert_eq!(&bytes[0..4], b"RIFF");
        assert_eq!(u32_at(&bytes, 4) as usize, bytes.len() - 8);
        assert_eq!(bytes.len(), 44 + 12);
        assert_eq!(decode(&bytes).unwrap().clip(), &clip());
    }

    #[test]
    fn foreign_chunks_preserved() {
        let wav = WavFile::from_clip(clip());
        let mut chunks = wav.chunks.clone();
        chunks.insert(1, WavChunk { id: *b"LIST", data: b"INFOodd".to_vec() });
        chunks.push(WavChunk { id: *b"cue ", data: vec![9; 4] });
        let wav = WavFile { chunks, clip: clip() };
        let bytes = encode(&wav);
        let back = decode(&bytes).unwrap();
        assert_eq!(back, wav);
        assert_eq!(encode(&back), bytes);

        let changed = back.with_clip(PcmClip::new(16_000, vec![7; 10]).unwrap()).unwrap();
        let reparsed = decode(&encode(&changed)).unwrap();
        assert_eq!(reparsed.chunks()[1].data, b"INFOodd");
        assert_eq!(reparsed.clip().samples(), &[7; 10]);
        assert!(back.with_clip(PcmClip::new(8_000, vec![]).unwrap()).is_err());
    }

    #[test]
    fn rejects() {
        let good = encode(&WavFile::from_clip(clip()));
        assert!(decode(b"RIFX0000WAVE").is_err());
        assert!(decode(&good[..30]).is_err());

        let mut stereo = good.clone();
        stereo[22] = 2;
        assert!(matches!(decode(&stereo), Err(FormatError::MalformedWav(_))));

        let mut eight_bit = good.clone();
        eight_bit[34] = 8;
        assert!(decode(&eight_bit).is_err());

        let mut float = good;
        float[20] = 3;
        assert!(decode(&float).is_err());
    }
}
