//! Fixed-point parity embedding for real-valued telemetry.
//!
//! Each scalar `v` is snapped to a multiple `k·q` of the quantum `q` whose
//! parity equals the message bit. Decimal logging with enough digits keeps
//! `round(v'/q)` intact, which raw mantissa twiddling would not survive.

use super::CarrierError;
use crate::message::{unframe_message, BitFrame};

/// Default quantum, 1e-4 (radians for joint angles).
pub const DEFAULT_QUANTUM: f64 = 1e-4;

const MAX_STEPS: f64 = 2147483648.0; // 2^31

/// Timestamped vectors of equal arity, e.g. joint angles.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatSeries {
    timestamps: Vec<f64>,
    values: Vec<Vec<f64>>,
    quantum: f64,
}

impl FloatSeries {
    pub fn new(timestamps: Vec<f64>, values: Vec<Vec<f64>>, quantum: f64) -> Result<Self, CarrierError> {
        if !(quantum > 0.0 && quantum.is_finite()) {
            return Err(CarrierError::InvalidCarrier(format!("quantum must be positive, got {quantum}")));
        }
        if timestamps.len() != values.len() {
            return Err(CarrierError::InvalidCarrier(format!(
                "{} timestamps for {} rows",
                timestamps.len(),
                values.len()
            )));
        }
        if timestamps.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CarrierError::InvalidCarrier("timestamps must be strictly increasing".into()));
        }
        if let Some(first) = values.first() {
            if values.iter().any(|row| row.len() != first.len()) {
                return Err(CarrierError::InvalidCarrier("rows differ in arity".into()));
            }
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(CarrierError::InvalidCarrier("non-finite value".into()));
        }
        Ok(FloatSeries { timestamps, values, quantum })
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn quantum(&self) -> f64 {
        self.quantum
    }

    pub fn arity(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// Scalars in embedding order: row by row, columns left to right.
    pub fn scalars(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().flatten().copied()
    }

    pub fn scalar_count(&self) -> usize {
        self.values.len() * self.arity()
    }

    pub fn with_quantum(mut self, quantum: f64) -> Result<Self, CarrierError> {
        if !(quantum > 0.0 && quantum.is_finite()) {
            return Err(CarrierError::InvalidCarrier(format!("quantum must be positive, got {quantum}")));
        }
        self.quantum = quantum;
        Ok(self)
    }
}

/// Replaces `v` by the nearest multiple of `q` with the requested parity.
/// The result is within `q` of `v`.
pub fn snap_to_parity(value: f64, quantum: f64, bit: bool) -> f64 {
    let scaled = value / quantum;
    let mut k = scaled.round() as i64;
    if (k.rem_euclid(2) == 1) != bit {
        // step toward the original value
        k += if scaled >= k as f64 { 1 } else { -1 };
    }
    k as f64 * quantum
}

fn parity(value: f64, quantum: f64) -> bool {
    ((value / quantum).round() as i64).rem_euclid(2) == 1
}

/// Embeds `frame` in the first `frame.bit_len()` scalars. Later scalars are
/// left bit-identical.
///
/// `max_deviation` is the largest change the caller accepts per scalar; a
/// quantum above it is refused.
pub fn float_embed(
    series: &FloatSeries,
    frame: &BitFrame,
    max_deviation: Option<f64>,
) -> Result<FloatSeries, CarrierError> {
    let q = series.quantum;
    if let Some(tolerance) = max_deviation {
        if q > tolerance {
            return Err(CarrierError::QuantumTooCoarse { quantum: q, tolerance });
        }
    }
    let bits = frame.to_bits();
    let available = series.scalar_count();
    if available < bits.len() {
        return Err(CarrierError::CapacityExceeded { available, required: bits.len() });
    }

    let arity = series.arity();
    let mut values = series.values.clone();
    for (index, &bit) in bits.iter().enumerate() {
        let cell = &mut values[index / arity][index % arity];
        if cell.abs() >= q * MAX_STEPS {
            return Err(CarrierError::ValueOutOfRange { index, value: *cell, quantum: q });
        }
        *cell = snap_to_parity(*cell, q, bit);
    }
    Ok(FloatSeries { timestamps: series.timestamps.clone(), values, quantum: q })
}

pub fn float_read_bits(series: &FloatSeries) -> Vec<bool> {
    series.scalars().map(|v| parity(v, series.quantum)).collect()
}

pub fn float_extract(series: &FloatSeries) -> Result<String, CarrierError> {
    Ok(unframe_message(&float_read_bits(series))?)
}
