use serde::Serialize;
use stegabot_core::message::text_to_morse;
use stegabot_core::motion::{simulate, DriftCode, DriftSchedule, ForceField, RobotState, Vec2};
use stegabot_core::observer::{drift_decode_trials, SensorSpec};
use stegabot_core::parallel;
use stegabot_core::timing::{jitter_sweep, DelayCode, JitterStats};

use super::simulate::default_duration;
use crate::io::{self, render};
use crate::{Channel, CliError, Format, MonteCarloArgs};

#[derive(Debug, Serialize)]
struct TimingRow {
    #[serde(flatten)]
    stats: JitterStats,
    success_rate: f64,
    symbol_error_rate: f64,
}

#[derive(Debug, Serialize)]
struct MotionRow {
    sensor: String,
    noise_sigma: f64,
    rate: f64,
    trials: u64,
    decoded: u64,
    success_rate: f64,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum Rows {
    Timing(Vec<TimingRow>),
    Motion(Vec<MotionRow>),
}

#[derive(Debug, Serialize)]
struct Report {
    channel: &'static str,
    message: String,
    seed: u64,
    rows: Rows,
}

pub fn run(a: &MonteCarloArgs, fmt: Format) -> Result<String, CliError> {
    if a.trials == 0 {
        return Err(CliError::Usage("need at least one trial".into()));
    }
    let msg = text_to_morse(&a.message)?;
    let report = match a.channel {
        Channel::Timing => {
            let code = DelayCode::default();
            let durations = vec![0.3; msg.len() + 1];
            let stats =
                parallel::install(a.threads, || jitter_sweep(&msg, &code, &durations, &a.sigmas, a.trials, a.seed))?;
            let rows = stats
                .into_iter()
                .map(|s| TimingRow {
                    success_rate: s.success_rate(),
                    symbol_error_rate: s.symbol_error_rate(),
                    stats: s,
                })
                .collect();
            Report { channel: "timing", message: a.message.clone(), seed: a.seed, rows: Rows::Timing(rows) }
        }
        Channel::Motion => {
            let code = DriftCode::default();
            let field = ForceField::default();
            let schedule = DriftSchedule::new(&msg, &code)?;
            let start = RobotState::new(Vec2::ZERO, Vec2::new(0.0, field.goal.desired_speed));
            let truth = simulate(start, &field, &msg, &code, 0.02, default_duration(&schedule, &code))?;
            let mut rows = Vec::new();
            for name in &a.sensors {
                let spec = SensorSpec::by_name(name)?;
                let decoded = parallel::install(a.threads, || {
                    drift_decode_trials(&truth, field.goal.centerline, &code, &msg, &spec, a.trials, a.seed)
                })?;
                rows.push(MotionRow {
                    sensor: name.clone(),
                    noise_sigma: spec.noise_sigma,
                    rate: spec.rate,
                    trials: a.trials,
                    decoded,
                    success_rate: decoded as f64 / a.trials as f64,
                });
            }
            Report { channel: "motion", message: a.message.clone(), seed: a.seed, rows: Rows::Motion(rows) }
        }
    };
    let out = match fmt {
        Format::Json => render(&report, fmt),
        Format::Text => text_table(&report),
    };
    io::emit(a.out.as_deref(), out)
}

fn text_table(r: &Report) -> String {
    let mut out = String::new();
    match &r.rows {
        Rows::Timing(rows) => {
            out.push_str(&format!("{:>8} {:>8} {:>10} {:>10}\n", "sigma_s", "trials", "success", "ser"));
            for row in rows {
                out.push_str(&format!(
                    "{:>8.3} {:>8} {:>10.4} {:>10.4}\n",
                    row.stats.sigma, row.stats.trials, row.success_rate, row.symbol_error_rate
                ));
            }
        }
        Rows::Motion(rows) => {
            out.push_str(&format!("{:<16} {:>8} {:>8} {:>10}\n", "sensor", "sigma_m", "trials", "success"));
            for row in rows {
                out.push_str(&format!(
                    "{:<16} {:>8.3} {:>8} {:>10.4}\n",
                    row.sensor, row.noise_sigma, row.trials, row.success_rate
                ));
            }
        }
    }
    out
}
