use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use stegabot_core::carriers::{FloatSeries, RasterImage};
use stegabot_core::formats::{csv, netpbm, wav};

use crate::{CarrierKind, CliError, Format};

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

pub fn write_bytes(path: &Path, data: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, data).map_err(|e| CliError::io(path, e))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

pub fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// JSON, or one `key  value` line per top-level field.
pub fn render<T: Serialize>(value: &T, fmt: Format) -> String {
    match fmt {
        Format::Json => to_json(value),
        Format::Text => render_text(&serde_json::to_value(value).expect("serializable report")),
    }
}

fn render_text(v: &Value) -> String {
    let scalar = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            map.iter().map(|(k, v)| format!("{k:<width$}  {}\n", scalar(v))).collect()
        }
        Value::Array(items) => items.iter().map(render_text).collect::<Vec<_>>().join("\n"),
        other => format!("{}\n", scalar(other)),
    }
}

/// Writes `text` to `out` if given, else returns it for stdout.
pub fn emit(out: Option<&Path>, text: String) -> Result<String, CliError> {
    match out {
        Some(p) => {
            write_bytes(p, text.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn carrier_kind(path: &Path, explicit: Option<CarrierKind>) -> Result<CarrierKind, CliError> {
    if let Some(k) = explicit {
        return Ok(k);
    }
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("pgm" | "ppm" | "pnm") => Ok(CarrierKind::Image),
        Some("wav") => Ok(CarrierKind::Pcm),
        Some("csv") => Ok(CarrierKind::Float),
        _ => Err(CliError::Usage(format!("cannot tell the carrier of {}; pass --carrier", path.display()))),
    }
}

pub fn load_image(path: &Path) -> Result<RasterImage, CliError> {
    Ok(netpbm::decode(&read_bytes(path)?)?)
}

pub fn load_wav(path: &Path) -> Result<wav::WavFile, CliError> {
    Ok(wav::decode(&read_bytes(path)?)?)
}

pub fn load_float(path: &Path, quantum: f64) -> Result<FloatSeries, CliError> {
    Ok(csv::read_float_series(&read_text(path)?, quantum)?)
}

/// What a numeric CSV holds, judged by its header row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    Trajectory,
    Timeline,
    Series,
}

pub fn csv_kind(text: &str) -> CsvKind {
    let header: Vec<String> = text
        .lines()
        .find(|l| !l.trim_start().starts_with('#'))
        .unwrap_or("")
        .split(',')
        .map(|c| c.trim().to_ascii_lowercase())
        .collect();
    match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["t", "x", "y"] => CsvKind::Trajectory,
        ["onset", "duration"] => CsvKind::Timeline,
        _ => CsvKind::Series,
    }
}
