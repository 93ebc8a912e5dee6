use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use stegabot_core::scheduler::{
    plan_messages, success_probability, transmission_window, Proposition, TransmissionPlan, UtilityFunction,
};

use crate::io::{self, render};
use crate::{CliError, Format, PlanArgs};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PlanInput {
    List(Vec<Proposition>),
    Full {
        propositions: Vec<Proposition>,
        #[serde(default)]
        utility: UtilityFunction,
    },
}

#[derive(Debug, Serialize)]
struct PlanReport {
    budget: f64,
    utility: UtilityFunction,
    plan: TransmissionPlan,
    /// Chance each proposition gets through at least once.
    delivery: BTreeMap<String, f64>,
}

pub fn run(a: &PlanArgs, fmt: Format) -> Result<String, CliError> {
    let (props, utility) = match io::read_json::<PlanInput>(&a.input)? {
        PlanInput::List(p) => (p, UtilityFunction::default()),
        PlanInput::Full { propositions, utility } => (propositions, utility),
    };
    let budget = match (a.budget, a.distance, a.speed, a.density) {
        (Some(t), ..) => t,
        (None, Some(d), Some(v), Some(alpha)) => transmission_window(d, v, alpha)?,
        _ => return Err(CliError::Usage("give --budget or all of --distance, --speed, --density".into())),
    };
    let plan = plan_messages(&props, budget, &utility)?;
    let delivery = props
        .iter()
        .map(|p| Ok((p.id.clone(), success_probability(p.loss_prob, plan.count(&p.id) as i64)?)))
        .collect::<Result<_, CliError>>()?;
    let report = PlanReport { budget, utility, plan, delivery };
    io::emit(a.out.as_deref(), render(&report, fmt))
}
