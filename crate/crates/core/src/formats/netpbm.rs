//! Binary PGM (P5) and PPM (P6) with maxval 255.

use super::FormatError;
use crate::carriers::RasterImage;

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError::MalformedNetpbm(msg.into())
}

struct HeaderReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Result<&str, FormatError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() && self.data[self.pos] != b'#' {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(bad("unexpected end of header"));
        }
        std::str::from_utf8(&self.data[start..self.pos]).map_err(|_| bad("header is not ASCII"))
    }

    fn number(&mut self, what: &str) -> Result<usize, FormatError> {
        let tok = self.token()?;
        tok.parse().map_err(|_| bad(format!("bad {what}: {tok:?}")))
    }
}

pub fn decode(data: &[u8]) -> Result<RasterImage, FormatError> {
    let mut r = HeaderReader { data, pos: 0 };
    let channels = match r.token()? {
        "P5" => 1,
        "P6" => 3,
        other => return Err(bad(format!("unsupported magic {other:?}, expected P5 or P6"))),
    };
    let width = r.number("width")?;
    let height = r.number("height")?;
    let maxval = r.number("maxval")?;
    if maxval != 255 {
        return Err(bad(format!("maxval {maxval} unsupported, expected 255")));
    }
    // exactly one whitespace byte separates the header from the raster
    if r.pos >= data.len() || !data[r.pos].is_ascii_whitespace() {
        return Err(bad("missing whitespace after maxval"));
    }
    let start = r.pos + 1;
    let len =
        width.checked_mul(height).and_then(|n| n.checked_mul(channels)).ok_or_else(|| bad("dimensions overflow"))?;
    let raster = data
        .get(start..start + len)
        .ok_or_else(|| bad(format!("raster needs {len} bytes, {} present", data.len().saturating_sub(start))))?;
    RasterImage::new(width, height, channels, raster.to_vec()).map_err(|e| bad(e.to_string()))
}

pub fn encode(img: &RasterImage) -> Vec<u8> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.samples());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_round_trip() {
        let img = RasterImage::new(3, 2, 1, vec![0, 1, 2, 253, 254, 255]).unwrap();
        let bytes = encode(&img);
        assert!(bytes.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(decode(&bytes).unwrap(), img);
    }

    #[test]
    fn rgb_with_comments() {
        let mut bytes = b"P6 # colour\n# a comment line\n2 1\n255\n".to_vec();
        bytes.extend([10, 20, 30, 40, 50, 60]);
        let img = decode(&bytes).unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (2, 1, 3));
        assert_eq!(img.samples(), &[10, 20, 30, 40, 50, 60]);
    }

    #[test]
    fn raster_starting_with_whitespace_byte() {
        let img = RasterImage::new(2, 1, 1, vec![b'\n', b' ']).unwrap();
        assert_eq!(decode(&encode(&img)).unwrap(), img);
    }

    #[test]
    fn rejects() {
        assert!(decode(b"P2\n1 1\n255\n0").is_err());
        assert!(decode(b"P5\n2 2\n65535\n").is_err());
        assert!(decode(b"P5\n2 2\n255\n\x00\x01").is_err());
        assert!(decode(b"P5\n2").is_err());
        assert!(decode(b"").is_err());
    }
}
