use serde::{Deserialize, Serialize};
use stegabot_core::steganalysis::{evaluate_detectors, ConfusionTable, CorpusSpec, Detector};

use crate::io::{self, render};
use crate::{CliError, EvaluateArgs, Format};

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct EvaluationConfig {
    #[serde(default)]
    pub corpus: CorpusSpec,
    #[serde(default = "default_detector")]
    pub detector: Detector,
}

fn default_detector() -> Detector {
    Detector::ReferenceCompare { tolerance: 0.0 }
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig { corpus: CorpusSpec::default(), detector: default_detector() }
    }
}

#[derive(Debug, Serialize)]
struct EvaluationReport {
    config: EvaluationConfig,
    table: ConfusionTable,
}

pub fn run(a: &EvaluateArgs, fmt: Format) -> Result<String, CliError> {
    let mut config = match &a.config {
        Some(p) => io::read_json::<EvaluationConfig>(p)?,
        None => EvaluationConfig::default(),
    };
    if let Some(seed) = a.seed {
        config.corpus.seed = seed;
    }
    let table = evaluate_detectors(&config.corpus, &config.detector, a.threads)?;
    let out = match fmt {
        Format::Json => render(&EvaluationReport { config, table }, fmt),
        Format::Text => table.to_string(),
    };
    io::emit(a.out.as_deref(), out)
}
