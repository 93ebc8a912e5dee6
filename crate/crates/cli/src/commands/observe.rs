use serde::Serialize;
use stegabot_core::formats::csv;
use stegabot_core::observer::{observe_timeline, observe_trajectory, SensorSpec};

use crate::io::{self, render, CsvKind};
use crate::{CliError, Format, ObserveArgs};

#[derive(Debug, Serialize)]
struct ObserveSummary {
    signal: &'static str,
    input_samples: usize,
    output_samples: usize,
    sensor: Option<SensorSpec>,
    jitter_sigma: Option<f64>,
    seed: u64,
}

pub fn run(a: &ObserveArgs, fmt: Format) -> Result<String, CliError> {
    let text = io::read_text(&a.input)?;
    let summary = match io::csv_kind(&text) {
        CsvKind::Trajectory => {
            let traj = csv::read_trajectory(&text)?;
            let spec = match &a.config {
                Some(p) => io::read_json::<SensorSpec>(p)?,
                None => SensorSpec::by_name(&a.sensor)?,
            }
            .with_seed(a.seed);
            let seen = observe_trajectory(&traj, &spec)?;
            io::write_bytes(&a.out, csv::write_trajectory(&seen, None).as_bytes())?;
            ObserveSummary {
                signal: "trajectory",
                input_samples: traj.len(),
                output_samples: seen.len(),
                sensor: Some(spec),
                jitter_sigma: None,
                seed: a.seed,
            }
        }
        CsvKind::Timeline => {
            let tl = csv::read_timeline(&text)?;
            let seen = observe_timeline(&tl, a.jitter, a.seed)?;
            io::write_bytes(&a.out, csv::write_timeline(&seen, None).as_bytes())?;
            ObserveSummary {
                signal: "timeline",
                input_samples: tl.len(),
                output_samples: seen.len(),
                sensor: None,
                jitter_sigma: Some(a.jitter),
                seed: a.seed,
            }
        }
        CsvKind::Series => {
            return Err(CliError::Usage(format!(
                "{} is neither a trajectory (t,x,y) nor a timeline (onset,duration)",
                a.input.display()
            )))
        }
    };
    Ok(render(&summary, fmt))
}
