//! The five study embeddings: gripper Morse, face image, joint telemetry,
//! speech delays and a spoken WAV, each written out and read back.

use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use stegabot_core::carriers::{
    float_embed, float_extract, image_embed, image_extract, pcm_embed, pcm_extract, FloatSeries, LsbLayout, PcmClip,
    RasterImage, DEFAULT_QUANTUM,
};
use stegabot_core::formats::{csv, netpbm, wav};
use stegabot_core::message::{frame_message, text_to_morse};
use stegabot_core::rng::substream;
use stegabot_core::timing::{
    delays_decode, delays_encode, detect_onsets, keying_decode, keying_encode, rms_envelope, synthesize_utterances,
    DelayCode, KeyingCode, OnsetDetectorConfig,
};

use crate::io::{self, render};
use crate::{CliError, DemoStudyArgs, Format};

pub const LONG_MESSAGE: &str = "SOS! Stacey needs your help!";
pub const SHORT_MESSAGE: &str = "SOS";
const FACE_SIZE: usize = 64;
const WAV_RATE: u32 = 16_000;
const UTTERANCES: usize = 12;
const JOINTS: usize = 7;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub artifact: String,
    pub sent: String,
    pub recovered: Option<String>,
    /// Largest change to the cover, in the carrier's units.
    pub max_perturbation: f64,
    pub bound: f64,
    pub passed: bool,
    pub note: String,
}

#[derive(Debug, Serialize)]
pub struct StudyReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(
    name: &'static str,
    artifact: &str,
    sent: &str,
    recovered: Result<String, CliError>,
    max_perturbation: f64,
    bound: f64,
    note: String,
) -> Check {
    let (recovered, err) = match recovered {
        Ok(m) => (Some(m), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let passed = recovered.as_deref() == Some(sent) && max_perturbation <= bound;
    Check {
        name,
        artifact: artifact.to_string(),
        sent: sent.to_string(),
        recovered,
        max_perturbation,
        bound,
        passed,
        note: err.unwrap_or(note),
    }
}

/// Cartoon face: light oval on a dark ground, two eyes and a smile, with
/// a little seeded texture.
pub fn face_image(seed: u64) -> RasterImage {
    let mut rng = substream(seed, 1);
    let c = (FACE_SIZE as f64 - 1.0) / 2.0;
    let mut px = Vec::with_capacity(FACE_SIZE * FACE_SIZE);
    for y in 0..FACE_SIZE {
        for x in 0..FACE_SIZE {
            let (xf, yf) = (x as f64, y as f64);
            let in_face = ((xf - c) / 24.0).powi(2) + ((yf - c) / 28.0).powi(2) <= 1.0;
            let eye = [(22.0, 25.0), (41.0, 25.0)].iter().any(|(ex, ey)| (xf - ex).powi(2) + (yf - ey).powi(2) <= 12.0);
            let smile_y = 41.0 + 4.0 * (1.0 - ((xf - c) / 11.0).powi(2));
            let smile = (xf - c).abs() <= 11.0 && (yf - smile_y).abs() <= 1.2;
            let base: i32 = match (in_face, eye || smile) {
                (true, true) => 45,
                (true, false) => 188,
                (false, _) => 62,
            };
            px.push((base + rng.random_range(-4..=4)).clamp(0, 255) as u8);
        }
    }
    RasterImage::new(FACE_SIZE, FACE_SIZE, 1, px).expect("square grayscale")
}

/// One second of a two-syllable voiced "hello" with faint seeded hiss.
pub fn hello_clip(seed: u64) -> PcmClip {
    let mut rng = substream(seed, 2);
    let sr = WAV_RATE as f64;
    let tau = std::f64::consts::TAU;
    let syllables = [(0.08, 0.42, 190.0, 175.0), (0.50, 0.92, 170.0, 130.0)];
    let mut phase = 0.0;
    let samples = (0..WAV_RATE as usize)
        .map(|i| {
            let t = i as f64 / sr;
            let mut v = 0.0;
            for &(a, b, f0, f1) in &syllables {
                if (a..b).contains(&t) {
                    let u = (t - a) / (b - a);
                    let f = f0 + (f1 - f0) * u;
                    phase += tau * f / sr;
                    let env = (std::f64::consts::PI * u).sin().powi(2);
                    v = 0.25 * env * (phase.sin() + 0.5 * (2.0 * phase).sin() + 0.25 * (3.0 * phase).sin());
                }
            }
            let hiss: i32 = rng.random_range(-12..=12);
            ((v * 32767.0).round() as i32 + hiss).clamp(i16::MIN as i32, i16::MAX as i32) as i16
        })
        .collect();
    PcmClip::new(WAV_RATE, samples).expect("positive rate")
}

/// Two seconds of a seven-joint arm raising into a wave, at 100 Hz, with
/// encoder noise.
pub fn arm_raise(seed: u64) -> FloatSeries {
    let mut rng = substream(seed, 3);
    let noise = Normal::new(0.0, 5e-4).expect("finite");
    let neutral = [0.0, -0.55, 0.0, 0.75, 0.0, 1.26, 0.0];
    let raised = [0.30, -0.60, 0.10, 0.90, 0.20, -0.40, 0.0];
    let times: Vec<f64> = (0..200).map(|i| i as f64 / 100.0).collect();
    let rows = times
        .iter()
        .map(|&t| {
            let s = (t / 2.0).clamp(0.0, 1.0);
            let ease = s * s * (3.0 - 2.0 * s);
            (0..JOINTS)
                .map(|j| {
                    let wave = if j == 6 { 0.25 * (std::f64::consts::TAU * 1.5 * t).sin() * ease } else { 0.0 };
                    let v = neutral[j] + raised[j] * ease + wave + noise.sample(&mut rng);
                    (v * 1e6).round() / 1e6
                })
                .collect()
        })
        .collect();
    FloatSeries::new(times, rows, DEFAULT_QUANTUM).expect("regular telemetry")
}

fn max_abs_diff<T: Copy + Into<f64>>(a: &[T], b: &[T]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| (x.into() - y.into()).abs()).fold(0.0, f64::max)
}

fn gripper(dir: &Path) -> Result<Check, CliError> {
    let code = KeyingCode::default();
    let msg = text_to_morse(SHORT_MESSAGE)?;
    let schedule = keying_encode(&msg, &code)?;
    let path = dir.join("gripper_schedule.csv");
    io::write_bytes(&path, csv::write_timeline(&schedule, None).as_bytes())?;
    let read = csv::read_timeline(&io::read_text(&path)?)?;
    let recovered = keying_decode(&read, &code)
        .map_err(CliError::extraction)
        .and_then(|m| Ok(stegabot_core::message::morse_to_text(&m)?));
    Ok(check(
        "gripper_morse",
        "gripper_schedule.csv",
        SHORT_MESSAGE,
        recovered,
        0.0,
        0.0,
        format!("{} closures, unit {:.3} s", schedule.len(), code.unit),
    ))
}

fn face(dir: &Path, seed: u64) -> Result<Check, CliError> {
    let cover = face_image(seed);
    io::write_bytes(&dir.join("face.pgm"), &netpbm::encode(&cover))?;
    let frame = frame_message(LONG_MESSAGE)?;
    let stego = image_embed(&cover, &frame, LsbLayout::default())?;
    let path = dir.join("face_stego.pgm");
    io::write_bytes(&path, &netpbm::encode(&stego))?;
    let read = io::load_image(&path)?;
    let recovered = image_extract(&read, LsbLayout::default()).map_err(CliError::extraction);
    let diff = max_abs_diff::<u8>(cover.samples(), read.samples());
    Ok(check(
        "face_image_lsb",
        "face_stego.pgm",
        LONG_MESSAGE,
        recovered,
        diff,
        1.0,
        format!("{} bits in {}x{} pixels", frame.bit_len(), FACE_SIZE, FACE_SIZE),
    ))
}

fn joints(dir: &Path, seed: u64) -> Result<Check, CliError> {
    let q = DEFAULT_QUANTUM;
    let cover_path = dir.join("joint_angles.csv");
    io::write_bytes(&cover_path, csv::write_float_series(&arm_raise(seed), 6).as_bytes())?;
    let cover = io::load_float(&cover_path, q)?;
    let frame = frame_message(SHORT_MESSAGE)?;
    let stego = float_embed(&cover, &frame, Some(q))?;
    let path = dir.join("joint_angles_stego.csv");
    io::write_bytes(&path, csv::write_float_series(&stego, 6).as_bytes())?;
    let read = io::load_float(&path, q)?;
    let recovered = float_extract(&read).map_err(CliError::extraction);
    let before: Vec<f64> = cover.scalars().collect();
    let after: Vec<f64> = read.scalars().collect();
    Ok(check(
        "joint_float_lsb",
        "joint_angles_stego.csv",
        SHORT_MESSAGE,
        recovered,
        max_abs_diff(&before, &after),
        q + 1e-9,
        format!("{} bits over {} joints, quantum {q} rad", frame.bit_len(), JOINTS),
    ))
}

fn speech_delays(dir: &Path, seed: u64) -> Result<Check, CliError> {
    let code = DelayCode::default();
    let detector = OnsetDetectorConfig::default();
    let msg = text_to_morse(SHORT_MESSAGE)?;
    let mut rng = substream(seed, 4);
    let durations: Vec<f64> = (0..UTTERANCES).map(|_| rng.random_range(250..450) as f64 / 1000.0).collect();
    let sent = delays_encode(&durations, &msg, &code)?;
    io::write_bytes(&dir.join("speech_timeline.csv"), csv::write_timeline(&sent, None).as_bytes())?;

    // every message gap sits exactly on its code level
    let level_error = sent
        .gaps()
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let extra = msg.symbols().get(k).map_or(0.0, |&s| code.extra(s));
            (g - code.base_gap - extra).abs()
        })
        .fold(0.0, f64::max);

    let audio = synthesize_utterances(&sent, WAV_RATE, 0.5);
    io::write_bytes(&dir.join("speech.wav"), &wav::encode(&wav::WavFile::from_clip(audio.clone())))?;
    let heard = io::load_wav(&dir.join("speech.wav"))?;
    let envelope = rms_envelope(heard.clip(), detector.rate);
    io::write_bytes(
        &dir.join("speech_envelope.csv"),
        csv::write_envelope(detector.rate, &envelope, Some(6)).as_bytes(),
    )?;
    let detected = detect_onsets(&envelope, &detector)?;
    io::write_bytes(&dir.join("speech_detected.csv"), csv::write_timeline(&detected, None).as_bytes())?;
    let recovered = delays_decode(&detected, &code)
        .map_err(CliError::extraction)
        .and_then(|m| Ok(stegabot_core::message::morse_to_text(&m)?));
    let worst_detected = if detected.len() == sent.len() {
        sent.gaps().iter().zip(detected.gaps()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::NAN
    };
    Ok(check(
        "speech_delay_morse",
        "speech_timeline.csv",
        SHORT_MESSAGE,
        recovered,
        level_error,
        1e-9,
        format!(
            "{} utterances, {} detected, worst detected gap error {:.3} s",
            sent.len(),
            detected.len(),
            worst_detected
        ),
    ))
}

fn hello_wav(dir: &Path, seed: u64) -> Result<Check, CliError> {
    let cover = wav::WavFile::from_clip(hello_clip(seed));
    io::write_bytes(&dir.join("hello.wav"), &wav::encode(&cover))?;
    let frame = frame_message(LONG_MESSAGE)?;
    let stego = pcm_embed(cover.clip(), &frame, LsbLayout::default())?;
    let path = dir.join("hello_stego.wav");
    io::write_bytes(&path, &wav::encode(&cover.with_clip(stego)?))?;
    let read = io::load_wav(&path)?;
    let recovered = pcm_extract(read.clip(), LsbLayout::default()).map_err(CliError::extraction);
    let diff = max_abs_diff::<i16>(cover.clip().samples(), read.clip().samples());
    Ok(check(
        "wav_pcm_lsb",
        "hello_stego.wav",
        LONG_MESSAGE,
        recovered,
        diff,
        1.0,
        format!("{} bits in {:.1} s at {} Hz", frame.bit_len(), read.clip().duration(), WAV_RATE),
    ))
}

pub fn study(dir: &Path, seed: u64) -> Result<StudyReport, CliError> {
    io::create_dir(dir)?;
    let checks =
        vec![gripper(dir)?, face(dir, seed)?, joints(dir, seed)?, speech_delays(dir, seed)?, hello_wav(dir, seed)?];
    Ok(StudyReport { seed, passed: checks.iter().all(|c| c.passed), checks })
}

fn log_lines(r: &StudyReport) -> String {
    let mut out = format!("demo study, seed {}\n", r.seed);
    for c in &r.checks {
        out.push_str(&format!(
            "{} {:<20} {:<24} sent {:?} recovered {:?} max change {:.3e} (bound {:.3e}) {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.artifact,
            c.sent,
            c.recovered.as_deref().unwrap_or("-"),
            c.max_perturbation,
            c.bound,
            c.note
        ));
    }
    out.push_str(if r.passed { "all round trips succeeded\n" } else { "verification FAILED\n" });
    out
}

pub fn run(a: &DemoStudyArgs, fmt: Format) -> Result<String, CliError> {
    let report = study(&a.out, a.seed)?;
    io::write_bytes(&a.out.join("verification.log"), log_lines(&report).as_bytes())?;
    io::write_bytes(&a.out.join("demo_study.json"), io::to_json(&report).as_bytes())?;
    if !report.passed {
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        return Err(CliError::Extraction(format!("demo study checks failed: {}", failed.join(", "))));
    }
    Ok(match fmt {
        Format::Json => render(&report, fmt),
        Format::Text => log_lines(&report),
    })
}
