use rand::Rng;

use crate::rng::seeded;

/// Appends seeded random bits so that the payload fills `1 - ratio` of the
/// result.
///
/// The output has `ceil(len / (1 - ratio))` bits and starts with `bits`
/// unchanged. Frame decoding ignores the appended tail.
///
/// # Panics
///
/// If `ratio` is outside `[0, 1)`.
pub fn add_salt(bits: &[bool], ratio: f64, seed: u64) -> Vec<bool> {
    assert!((0.0..1.0).contains(&ratio), "salt ratio must lie in [0, 1), got {ratio}");
    let target = salted_len(bits.len(), ratio);
    let mut rng = seeded(seed);
    let mut out = Vec::with_capacity(target);
    out.extend_from_slice(bits);
    out.extend((bits.len()..target).map(|_| rng.random::<bool>()));
    out
}

pub fn salted_len(len: usize, ratio: f64) -> usize {
    let exact = len as f64 / (1.0 - ratio);
    // absorb representation error, e.g. 90 / 0.9
    (exact - 1e-9).ceil().max(len as f64) as usize
}
