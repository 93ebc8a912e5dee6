//! `stegabot` command-line front end. All file I/O happens here; the
//! commands are thin wrappers over `stegabot-core`.

pub mod commands;
mod error;
mod io;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "stegabot", version, about = "Hide, recover and detect messages in robot behaviour signals")]
pub struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CarrierKind {
    /// Binary PGM/PPM, LSB of each sample.
    Image,
    /// 16-bit mono WAV, LSB of each sample.
    Pcm,
    /// CSV `t,v1,...` with fixed-point parity per value.
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hide a message in an image, WAV or telemetry CSV.
    Embed(EmbedArgs),
    /// Recover a message hidden by `embed`.
    Extract(ExtractArgs),
    /// Choose proposition repetitions within a time budget.
    Plan(PlanArgs),
    /// Run a motion or timing scenario and decode what comes out.
    Simulate(SimulateArgs),
    /// Pass a trajectory or timeline through a sensor model.
    Observe(ObserveArgs),
    /// Run a detector on a suspect file.
    Analyze(AnalyzeArgs),
    /// Score a detector on a generated corpus.
    Evaluate(EvaluateArgs),
    /// Decode success over many noisy observations.
    Montecarlo(MonteCarloArgs),
    /// Regenerate the five study embeddings with a verification log.
    DemoStudy(DemoStudyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct LsbArgs {
    /// Index of the first carrier sample used.
    #[arg(long, default_value_t = 0)]
    pub offset: usize,
    /// Distance between used samples.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Step for float carriers.
    #[arg(long, default_value_t = stegabot_core::carriers::DEFAULT_QUANTUM)]
    pub quantum: f64,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub message: String,
    /// Defaults to the file extension: .pgm/.ppm, .wav, .csv.
    #[arg(long, value_enum)]
    pub carrier: Option<CarrierKind>,
    #[command(flatten)]
    pub lsb: LsbArgs,
    /// Refuse float embedding if the quantum exceeds this change.
    #[arg(long)]
    pub max_deviation: Option<f64>,
    /// Decimal places written to float CSVs.
    #[arg(long, default_value_t = 6)]
    pub decimals: usize,
    /// Fraction of embedded bits that are random padding (image and PCM).
    #[arg(long)]
    pub salt: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub carrier: Option<CarrierKind>,
    #[command(flatten)]
    pub lsb: LsbArgs,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// JSON list of propositions, or `{"propositions": [...], "utility": {...}}`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Time budget in seconds; otherwise derived from distance, speed and density.
    #[arg(long, conflicts_with_all = ["distance", "speed", "density"])]
    pub budget: Option<f64>,
    #[arg(long, requires_all = ["speed", "density"])]
    pub distance: Option<f64>,
    #[arg(long)]
    pub speed: Option<f64>,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario JSON with `"channel": "motion"` or `"channel": "timing"`.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ObserveArgs {
    /// Trajectory CSV `t,x,y` or timeline CSV `onset,duration`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Sensor preset for trajectories.
    #[arg(long, default_value = "gps_rtk")]
    pub sensor: String,
    /// Sensor spec JSON; replaces the preset.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Onset jitter for timelines, seconds.
    #[arg(long, default_value_t = 0.0)]
    pub jitter: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Known-good copy; enables reference comparison.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// JSON `{"corpus": {...}, "detector": {...}}`; both parts optional.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the corpus seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 means one per core.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Channel {
    Timing,
    Motion,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[arg(long, value_enum)]
    pub channel: Channel,
    #[arg(long, default_value = "SOS")]
    pub message: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Gap jitter levels for the timing channel, seconds.
    #[arg(long, value_delimiter = ',', default_value = "0,0.01,0.02,0.04,0.06")]
    pub sigmas: Vec<f64>,
    /// Sensor presets for the motion channel.
    #[arg(long, value_delimiter = ',', default_value = "gps_rtk,gps_dgps,gps_direct,camera_dashcam")]
    pub sensors: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemoStudyArgs {
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Runs one parsed invocation and returns what goes to stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    use commands::*;
    let fmt = cli.format;
    match &cli.command {
        Command::Embed(a) => embed::run(a, fmt),
        Command::Extract(a) => extract::run(a, fmt),
        Command::Plan(a) => plan::run(a, fmt),
        Command::Simulate(a) => simulate::run(a, fmt),
        Command::Observe(a) => observe::run(a, fmt),
        Command::Analyze(a) => analyze::run(a, fmt),
        Command::Evaluate(a) => evaluate::run(a, fmt),
        Command::Montecarlo(a) => montecarlo::run(a, fmt),
        Command::DemoStudy(a) => demo_study::run(a, fmt),
    }
}
