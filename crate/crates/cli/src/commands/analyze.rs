use std::path::Path;

use stegabot_core::formats::csv;
use stegabot_core::steganalysis::{chi_square_lsb, reference_compare, DetectionReport, Signal};

use crate::io::{self, render, CsvKind};
use crate::{AnalyzeArgs, CliError, Format};

enum Loaded {
    Image(Vec<u8>),
    Pcm(Vec<i16>),
    Csv(Signal),
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    Ok(match ext.as_deref() {
        Some("pgm" | "ppm" | "pnm") => Loaded::Image(io::load_image(path)?.into_samples()),
        Some("wav") => Loaded::Pcm(io::load_wav(path)?.clip().samples().to_vec()),
        Some("csv") => {
            let text = io::read_text(path)?;
            Loaded::Csv(match io::csv_kind(&text) {
                CsvKind::Trajectory => Signal::Trajectory(csv::read_trajectory(&text)?),
                CsvKind::Timeline => Signal::Timeline(csv::read_timeline(&text)?),
                CsvKind::Series => {
                    let series = csv::read_float_series(&text, stegabot_core::carriers::DEFAULT_QUANTUM)?;
                    Signal::Floats(series.scalars().collect())
                }
            })
        }
        _ => return Err(CliError::Usage(format!("unsupported file type: {}", path.display()))),
    })
}

fn signal(l: Loaded) -> Signal {
    match l {
        Loaded::Image(b) => Signal::Bytes(b),
        Loaded::Pcm(s) => Signal::Samples(s),
        Loaded::Csv(s) => s,
    }
}

pub fn run(a: &AnalyzeArgs, fmt: Format) -> Result<String, CliError> {
    let suspect = load(&a.input)?;
    let report: DetectionReport = match &a.reference {
        Some(r) => reference_compare(&signal(load(r)?), &signal(suspect), a.tolerance)?,
        None => match suspect {
            Loaded::Image(bytes) => chi_square_lsb(&bytes)?,
            // pair-of-values over the low byte carries the same LSB statistics
            Loaded::Pcm(samples) => chi_square_lsb(&samples.iter().map(|&s| s as u8).collect::<Vec<_>>())?,
            Loaded::Csv(_) => {
                return Err(CliError::Usage("CSV signals can only be analyzed against a --reference".into()))
            }
        },
    };
    Ok(render(&report, fmt))
}
