//! Covert channels carried by robot behaviour signals.
//!
//! Short messages are framed or Morse-coded ([`message`]), scheduled within a
//! time budget ([`scheduler`]), hidden in images, audio, telemetry, utterance
//! timing or lateral drift ([`carriers`], [`timing`], [`motion`]), observed
//! through degraded sensors ([`observer`]) and hunted for by detectors
//! ([`steganalysis`]). Byte-level file codecs live in [`formats`].

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carriers;
pub mod formats;
pub mod message;
pub mod motion;
pub mod observer;
pub mod parallel;
pub mod rng;
pub mod scheduler;
pub mod steganalysis;
pub mod timing;
