//! Detectors for hidden messages and a harness that scores them on
//! generated corpora.
//!
//! [`reference_compare`] assumes the analyst holds a known-good copy of the
//! signal. [`chi_square_lsb`] is the pair-of-values attack on sequential LSB
//! embedding and needs no reference.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::carriers::{image_embed, CarrierError, LsbLayout, RasterImage};
use crate::message::frame_message;
use crate::motion::Trajectory2D;
use crate::rng::substream;
use crate::timing::EventTimeline;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SteganalysisError {
    #[error("signals cannot be compared: {0}")]
    IncompatibleSignals(String),
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("only {pairs} value pairs are populated enough to test")]
    DegenerateHistogram { pairs: usize },
    #[error("invalid corpus: {0}")]
    InvalidCorpus(String),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stego,
    Clean,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ReferenceCompare,
    ChiSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub verdict: Verdict,
    pub score: f64,
    pub method: Method,
    pub threshold: f64,
}

/// A carrier signal in comparable form.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    Bytes(Vec<u8>),
    Samples(Vec<i16>),
    Floats(Vec<f64>),
    Timeline(EventTimeline),
    Trajectory(Trajectory2D),
}

impl Signal {
    fn kind(&self) -> &'static str {
        match self {
            Signal::Bytes(_) => "bytes",
            Signal::Samples(_) => "samples",
            Signal::Floats(_) => "floats",
            Signal::Timeline(_) => "timeline",
            Signal::Trajectory(_) => "trajectory",
        }
    }
}

fn differing_fraction<T: PartialEq>(a: &[T], b: &[T]) -> Result<f64, SteganalysisError> {
    if a.len() != b.len() {
        return Err(SteganalysisError::IncompatibleSignals(format!("lengths differ: {} vs {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count() as f64 / a.len() as f64)
}

/// Dynamic time warping cost of aligning two gap sequences, divided by the
/// longer length: the mean absolute gap deviation after alignment.
pub fn dtw_gap_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let m = b.len();
    let mut prev = vec![f64::INFINITY; m + 1];
    let mut cur = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for &x in a {
        cur[0] = f64::INFINITY;
        for j in 1..=m {
            let best = prev[j].min(prev[j - 1]).min(cur[j - 1]);
            cur[j] = (x - b[j - 1]).abs() + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m] / a.len().max(m) as f64
}

/// RMS of the lateral difference, sampling the suspect at the reference's
/// timestamps.
fn lateral_rms(reference: &Trajectory2D, suspect: &Trajectory2D) -> Result<f64, SteganalysisError> {
    if reference.is_empty() || suspect.is_empty() {
        return Err(SteganalysisError::IncompatibleSignals("empty trajectory".into()));
    }
    let sum: f64 = reference
        .samples()
        .iter()
        .map(|s| {
            let p = suspect.position_at(s.t).expect("non-empty");
            (p.x - s.x).powi(2)
        })
        .sum();
    Ok((sum / reference.len() as f64).sqrt())
}

/// Scores how far `suspect` departs from a known-good `reference`; stego when
/// the score exceeds `tolerance`.
pub fn reference_compare(
    reference: &Signal,
    suspect: &Signal,
    tolerance: f64,
) -> Result<DetectionReport, SteganalysisError> {
    let score = match (reference, suspect) {
        (Signal::Bytes(a), Signal::Bytes(b)) => differing_fraction(a, b)?,
        (Signal::Samples(a), Signal::Samples(b)) => differing_fraction(a, b)?,
        (Signal::Floats(a), Signal::Floats(b)) => differing_fraction(a, b)?,
        (Signal::Timeline(a), Signal::Timeline(b)) => {
            let d = dtw_gap_deviation(&a.gaps(), &b.gaps());
            if !d.is_finite() {
                return Err(SteganalysisError::IncompatibleSignals("one timeline has no gaps".into()));
            }
            d
        }
        (Signal::Trajectory(a), Signal::Trajectory(b)) => lateral_rms(a, b)?,
        (a, b) => return Err(SteganalysisError::IncompatibleSignals(format!("{} vs {}", a.kind(), b.kind()))),
    };
    Ok(DetectionReport {
        verdict: if score > tolerance { Verdict::Stego } else { Verdict::Clean },
        score,
        method: Method::ReferenceCompare,
        threshold: tolerance,
    })
}

pub const CHI_SQUARE_MIN_SAMPLES: usize = 256;
/// p above this reads as stego, below `1 − CHI_SQUARE_STEGO_P` as clean.
pub const CHI_SQUARE_STEGO_P: f64 = 0.95;
/// Pairs with fewer expected counts are left out of the statistic.
pub const CHI_SQUARE_MIN_EXPECTED: f64 = 5.0;

/// Pair-of-values test: full LSB embedding equalizes the counts of each
/// value pair (2k, 2k+1). The score is the chi-square survival probability,
/// close to 1 when the pairs look equalized.
pub fn chi_square_lsb(samples: &[u8]) -> Result<DetectionReport, SteganalysisError> {
    if samples.len() < CHI_SQUARE_MIN_SAMPLES {
        return Err(SteganalysisError::TooFewSamples { needed: CHI_SQUARE_MIN_SAMPLES, got: samples.len() });
    }
    let mut hist = [0u64; 256];
    for &s in samples {
        hist[s as usize] += 1;
    }
    let mut stat = 0.0;
    let mut pairs = 0usize;
    for k in 0..128 {
        let expected = (hist[2 * k] + hist[2 * k + 1]) as f64 / 2.0;
        if expected >= CHI_SQUARE_MIN_EXPECTED {
            stat += (hist[2 * k] as f64 - expected).powi(2) / expected;
            pairs += 1;
        }
    }
    if pairs < 2 {
        return Err(SteganalysisError::DegenerateHistogram { pairs });
    }
    let dist = ChiSquared::new((pairs - 1) as f64).expect("positive degrees of freedom");
    let p = dist.sf(stat).clamp(0.0, 1.0);
    let verdict = if p > CHI_SQUARE_STEGO_P {
        Verdict::Stego
    } else if p < 1.0 - CHI_SQUARE_STEGO_P {
        Verdict::Clean
    } else {
        Verdict::Inconclusive
    };
    Ok(DetectionReport { verdict, score: p, method: Method::ChiSquare, threshold: CHI_SQUARE_STEGO_P })
}

/// Grayscale image with i.i.d. Gaussian intensities around 128, rounded and
/// clipped to 0..=255.
pub fn synthetic_natural_image(width: usize, height: usize, sigma: f64, seed: u64) -> RasterImage {
    synthetic_image_from(width, height, sigma, &mut substream(seed, 0))
}

fn synthetic_image_from<R: Rng>(width: usize, height: usize, sigma: f64, rng: &mut R) -> RasterImage {
    let normal = Normal::new(128.0, sigma.max(0.0)).expect("finite sigma");
    let samples = (0..width * height).map(|_| normal.sample(rng).round().clamp(0.0, 255.0) as u8).collect();
    RasterImage::new(width, height, 1, samples).expect("consistent shape")
}

/// Overwrites the LSBs of the first `capacity` fraction of samples with
/// random bits, as a sequential embedder would.
pub fn embed_random_bits<R: Rng>(samples: &mut [u8], capacity: f64, rng: &mut R) {
    let n = (samples.len() as f64 * capacity.clamp(0.0, 1.0)).round() as usize;
    for s in &mut samples[..n] {
        *s = (*s & !1) | rng.random::<bool>() as u8;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusCarrier {
    Image,
}

/// How stego items are made.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Embedding {
    /// A framed random printable message of this many characters.
    Message { chars: usize },
    /// Random bits in this fraction of samples.
    Capacity { fraction: f64 },
}

/// `count` stego and `count` clean items from seed `seed`. Item `i` is built
/// from its own substream, so the corpus is the same whatever the thread
/// count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusSpec {
    pub carrier: CorpusCarrier,
    pub count: usize,
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub sigma: f64,
    pub embedding: Embedding,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            carrier: CorpusCarrier::Image,
            count: 100,
            seed: 0,
            width: 64,
            height: 64,
            sigma: 30.0,
            embedding: Embedding::Message { chars: 28 },
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<(), SteganalysisError> {
        if self.count == 0 {
            return Err(SteganalysisError::InvalidCorpus("count must be at least 1".into()));
        }
        if self.width == 0 || self.height == 0 {
            return Err(SteganalysisError::InvalidCorpus("image must not be empty".into()));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(SteganalysisError::InvalidCorpus("sigma must be non-negative".into()));
        }
        match self.embedding {
            Embedding::Message { chars: 0 } => {
                Err(SteganalysisError::InvalidCorpus("message must have at least one character".into()))
            }
            Embedding::Capacity { fraction } if !(0.0..=1.0).contains(&fraction) => {
                Err(SteganalysisError::InvalidCorpus("capacity must lie in [0, 1]".into()))
            }
            _ => Ok(()),
        }
    }
}

/// One corpus item: the known-good reference and what the analyst receives.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub stego: bool,
    pub reference: RasterImage,
    pub suspect: RasterImage,
}

/// Items `0..count` carry a message, the rest are untouched copies.
pub fn corpus_item(spec: &CorpusSpec, index: usize) -> Result<CorpusItem, SteganalysisError> {
    let mut rng = substream(spec.seed, index as u64);
    let reference = synthetic_image_from(spec.width, spec.height, spec.sigma, &mut rng);
    let stego = index < spec.count;
    if !stego {
        return Ok(CorpusItem { stego, suspect: reference.clone(), reference });
    }
    let suspect = match spec.embedding {
        Embedding::Message { chars } => {
            let text: String = (0..chars).map(|_| rng.random_range(b' '..=b'~') as char).collect();
            let frame = frame_message(&text).map_err(CarrierError::from)?;
            image_embed(&reference, &frame, LsbLayout::default())?
        }
        Embedding::Capacity { fraction } => {
            let mut samples = reference.samples().to_vec();
            embed_random_bits(&mut samples, fraction, &mut rng);
            RasterImage::new(reference.width(), reference.height(), 1, samples)?
        }
    };
    Ok(CorpusItem { stego, reference, suspect })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Detector {
    ReferenceCompare { tolerance: f64 },
    ChiSquare,
}

impl Detector {
    pub fn run(&self, item: &CorpusItem) -> Result<DetectionReport, SteganalysisError> {
        match *self {
            Detector::ReferenceCompare { tolerance } => reference_compare(
                &Signal::Bytes(item.reference.samples().to_vec()),
                &Signal::Bytes(item.suspect.samples().to_vec()),
                tolerance,
            ),
            Detector::ChiSquare => chi_square_lsb(item.suspect.samples()),
        }
    }
}

/// Confusion counts. Inconclusive verdicts count as negative and are also
/// tallied separately.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfusionTable {
    pub true_positive: u64,
    pub false_positive: u64,
    pub true_negative: u64,
    pub false_negative: u64,
    pub inconclusive: u64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
}

impl ConfusionTable {
    fn from_counts(tp: u64, fp: u64, tn: u64, fn_: u64, inconclusive: u64) -> Self {
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        ConfusionTable {
            true_positive: tp,
            false_positive: fp,
            true_negative: tn,
            false_negative: fn_,
            inconclusive,
            accuracy: ratio(tp + tn, tp + fp + tn + fn_),
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
        }
    }

    pub fn total(&self) -> u64 {
        self.true_positive + self.false_positive + self.true_negative + self.false_negative
    }
}

impl fmt::Display for ConfusionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: [(&str, String); 8] = [
            ("true_positive", self.true_positive.to_string()),
            ("false_positive", self.false_positive.to_string()),
            ("true_negative", self.true_negative.to_string()),
            ("false_negative", self.false_negative.to_string()),
            ("inconclusive", self.inconclusive.to_string()),
            ("accuracy", format!("{:.4}", self.accuracy)),
            ("precision", format!("{:.4}", self.precision)),
            ("recall", format!("{:.4}", self.recall)),
        ];
        for (k, v) in rows {
            writeln!(f, "{k:<16}{v:>10}")?;
        }
        Ok(())
    }
}

/// Builds the corpus and runs `detector` on every item using `threads`
/// workers (0 means rayon's default).
pub fn evaluate_detectors(
    spec: &CorpusSpec,
    detector: &Detector,
    threads: usize,
) -> Result<ConfusionTable, SteganalysisError> {
    spec.validate()?;
    let outcomes: Vec<(bool, Verdict)> = crate::parallel::install(threads, || {
        (0..2 * spec.count)
            .into_par_iter()
            .map(|i| {
                let item = corpus_item(spec, i)?;
                Ok((item.stego, detector.run(&item)?.verdict))
            })
            .collect::<Result<_, SteganalysisError>>()
    })?;
    let (mut tp, mut fp, mut tn, mut fn_, mut inc) = (0, 0, 0, 0, 0);
    for (stego, verdict) in outcomes {
        if verdict == Verdict::Inconclusive {
            inc += 1;
        }
        match (stego, verdict == Verdict::Stego) {
            (true, true) => tp += 1,
            (true, false) => fn_ += 1,
            (false, true) => fp += 1,
            (false, false) => tn += 1,
        }
    }
    Ok(ConfusionTable::from_counts(tp, fp, tn, fn_, inc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::message::frame_message;
    use crate::timing::Utterance;

    #[test]
    fn self_comparison_is_clean() {
        let img = synthetic_natural_image(32, 32, 30.0, 1);
        let s = Signal::Bytes(img.samples().to_vec());
        let r = reference_compare(&s, &s, 0.0).unwrap();
        assert_eq!((r.score, r.verdict), (0.0, Verdict::Clean));
    }

    #[test]
    fn embedded_copy_is_flagged() {
        let img = synthetic_natural_image(64, 64, 30.0, 2);
        let frame = frame_message("SOS! Stacey needs your help!").unwrap();
        let stego = image_embed(&img, &frame, LsbLayout::default()).unwrap();
        let changed = img.samples().iter().zip(stego.samples()).filter(|(a, b)| a != b).count();
        let r =
            reference_compare(&Signal::Bytes(img.samples().to_vec()), &Signal::Bytes(stego.samples().to_vec()), 0.0)
                .unwrap();
        assert_eq!(r.score, changed as f64 / 4096.0);
        assert!(r.score <= frame.bit_len() as f64 / 4096.0);
        assert_eq!(r.verdict, Verdict::Stego);
    }

    #[test]
    fn requantized_copy_is_a_false_positive() {
        let img = synthetic_natural_image(16, 16, 30.0, 3);
        let shifted: Vec<u8> = img.samples().iter().map(|v| v.saturating_add(1)).collect();
        let r = reference_compare(&Signal::Bytes(img.samples().to_vec()), &Signal::Bytes(shifted), 0.0).unwrap();
        assert_eq!(r.verdict, Verdict::Stego);
    }

    #[test]
    fn incompatible() {
        let a = Signal::Bytes(vec![1, 2, 3]);
        assert!(reference_compare(&a, &Signal::Bytes(vec![1, 2]), 0.0).is_err());
        assert!(reference_compare(&a, &Signal::Samples(vec![1, 2, 3]), 0.0).is_err());
    }

    #[test]
    fn timeline_warping() {
        let tl = |gaps: &[f64]| {
            let mut t = 0.0;
            let mut ev = vec![Utterance { onset: 0.0, duration: 0.2 }];
            for g in gaps {
                t += 0.2 + g;
                ev.push(Utterance { onset: t, duration: 0.2 });
            }
            EventTimeline::new(ev).unwrap()
        };
        let a = Signal::Timeline(tl(&[0.5, 0.5, 0.5]));
        let b = Signal::Timeline(tl(&[0.5, 0.6, 0.5]));
        let r = reference_compare(&a, &b, 0.01).unwrap();
        assert!((r.score - 0.1 / 3.0).abs() < 1e-12);
        assert_eq!(r.verdict, Verdict::Stego);
        assert_eq!(dtw_gap_deviation(&[1.0, 2.0], &[1.0, 1.0, 2.0]), 0.0);
    }

    #[test]
    fn chi_square_extremes() {
        let clean = synthetic_natural_image(1024, 1024, 30.0, 4);
        let r = chi_square_lsb(clean.samples()).unwrap();
        assert_eq!(r.verdict, Verdict::Clean, "p = {}", r.score);
        let mut full = clean.samples().to_vec();
        embed_random_bits(&mut full, 1.0, &mut substream(4, 1));
        let r = chi_square_lsb(&full).unwrap();
        assert_eq!(r.verdict, Verdict::Stego, "p = {}", r.score);
        assert!((0.0..=1.0).contains(&r.score));
    }

    #[test]
    fn chi_square_needs_samples() {
        assert_eq!(chi_square_lsb(&[0; 100]), Err(SteganalysisError::TooFewSamples { needed: 256, got: 100 }));
    }

    #[test]
    fn corpus_counts_and_threads() {
        let spec = CorpusSpec { count: 10, ..Default::default() };
        let d = Detector::ReferenceCompare { tolerance: 0.0 };
        let one = evaluate_detectors(&spec, &d, 1).unwrap();
        let four = evaluate_detectors(&spec, &d, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.total(), 20);
        assert_eq!(one.accuracy, 1.0);
        assert!(evaluate_detectors(&CorpusSpec { count: 0, ..spec }, &d, 1).is_err());
    }
}
