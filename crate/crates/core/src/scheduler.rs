//! Choosing which propositions to send, and how often, inside a time budget.
//!
//! The objective is `max Σ vᵢ·f(xᵢ)` subject to `Σ tᵢ·xᵢ ≤ T` over
//! non-negative integer repetition counts `xᵢ`, with a saturating utility
//! `f`. [`plan_messages`] fills the budget greedily by marginal value
//! density, which is exact when every proposition costs the same time.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed when checking `used + tᵢ ≤ T`, absorbing float drift in
/// repeated additions.
pub const FEASIBILITY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("invalid proposition {id:?}: {reason}")]
    InvalidProposition { id: String, reason: String },
    #[error("no propositions to plan")]
    NoPropositions,
    #[error("domain error: {0}")]
    DomainError(String),
}

/// An atomic message fragment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proposition {
    pub id: String,
    pub text: String,
    /// Importance, dimensionless.
    pub value: f64,
    /// Seconds needed for one transmission.
    pub transmit_time: f64,
    /// Chance a single transmission is lost.
    pub loss_prob: f64,
}

impl Proposition {
    pub fn validate(&self) -> Result<(), PlanError> {
        let bad = |reason: &str| Err(PlanError::InvalidProposition { id: self.id.clone(), reason: reason.to_string() });
        if !(self.transmit_time > 0.0 && self.transmit_time.is_finite()) {
            return bad("transmit_time must be positive and finite");
        }
        if !(0.0..=1.0).contains(&self.loss_prob) {
            return bad("loss_prob must lie in [0, 1]");
        }
        if !(self.value >= 0.0 && self.value.is_finite()) {
            return bad("value must be non-negative and finite");
        }
        Ok(())
    }
}

/// Utility of sending a proposition `x` times.
pub trait Utility {
    fn value(&self, x: u32) -> f64;
}

impl<F: Fn(u32) -> f64> Utility for F {
    fn value(&self, x: u32) -> f64 {
        self(x)
    }
}

/// `f(0) = 0`, `f(x) = e^(-1/x)`: rises fast and levels off below 1.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InverseExp;

impl Utility for InverseExp {
    fn value(&self, x: u32) -> f64 {
        if x == 0 {
            0.0
        } else {
            (-1.0 / x as f64).exp()
        }
    }
}

/// `f(0) = 0`, `f(x) = level` for `x ≥ 1`: one transmission is all that counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub level: f64,
}

impl Default for Step {
    fn default() -> Self {
        Step { level: 1.0 }
    }
}

impl Utility for Step {
    fn value(&self, x: u32) -> f64 {
        if x == 0 {
            0.0
        } else {
            self.level
        }
    }
}

/// Serializable choice of built-in utility.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UtilityFunction {
    #[default]
    InverseExp,
    Step {
        level: f64,
    },
}

impl Utility for UtilityFunction {
    fn value(&self, x: u32) -> f64 {
        match *self {
            UtilityFunction::InverseExp => InverseExp.value(x),
            UtilityFunction::Step { level } => Step { level }.value(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmissionPlan {
    /// Repetitions per proposition id; every input id is present.
    pub counts: BTreeMap<String, u32>,
    pub used_time: f64,
    pub budget: f64,
    pub objective: f64,
}

impl TransmissionPlan {
    pub fn count(&self, id: &str) -> u32 {
        self.counts.get(id).copied().unwrap_or(0)
    }

    /// Recomputes `(Σ tᵢxᵢ, Σ vᵢf(xᵢ))` from the counts.
    pub fn evaluate(&self, props: &[Proposition], f: &impl Utility) -> (f64, f64) {
        evaluate_counts(props, |i| self.count(&props[i].id), f)
    }
}

fn evaluate_counts(props: &[Proposition], count: impl Fn(usize) -> u32, f: &impl Utility) -> (f64, f64) {
    props.iter().enumerate().fold((0.0, 0.0), |(t, obj), (i, p)| {
        let x = count(i);
        (t + p.transmit_time * x as f64, obj + p.value * f.value(x))
    })
}

/// Greedy marginal-density fill.
///
/// Each round adds one repetition of the proposition with the largest
/// `vᵢ·(f(xᵢ+1) − f(xᵢ)) / tᵢ` among those that still fit, ties going to the
/// lexicographically smaller id. Stops when nothing fits.
pub fn plan_messages(props: &[Proposition], budget: f64, f: &impl Utility) -> Result<TransmissionPlan, PlanError> {
    if props.is_empty() {
        return Err(PlanError::NoPropositions);
    }
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(PlanError::DomainError(format!("budget must be finite and >= 0, got {budget}")));
    }
    for p in props {
        p.validate()?;
    }

    let mut order: Vec<usize> = (0..props.len()).collect();
    order.sort_by(|&a, &b| props[a].id.cmp(&props[b].id));

    let mut counts = vec![0u32; props.len()];
    let mut used = 0.0;
    loop {
        let mut best: Option<(usize, f64)> = None;
        for &i in &order {
            let p = &props[i];
            if used + p.transmit_time > budget + FEASIBILITY_EPS {
                continue;
            }
            let x = counts[i];
            let density = p.value * (f.value(x + 1) - f.value(x)) / p.transmit_time;
            // strict comparison keeps the earlier (smaller) id on ties
            if best.is_none_or(|(_, d)| density > d) {
                best = Some((i, density));
            }
        }
        let Some((i, _)) = best else { break };
        counts[i] += 1;
        used = evaluate_counts(props, |k| counts[k], f).0;
    }

    let (used_time, objective) = evaluate_counts(props, |k| counts[k], f);
    Ok(TransmissionPlan {
        counts: props.iter().map(|p| p.id.clone()).zip(counts).collect(),
        used_time,
        budget,
        objective,
    })
}

/// `1 − pˣ`: chance at least one of `x` independent transmissions survives.
pub fn success_probability(loss_prob: f64, repetitions: i64) -> Result<f64, PlanError> {
    if !(0.0..=1.0).contains(&loss_prob) {
        return Err(PlanError::DomainError(format!("loss probability {loss_prob} outside [0, 1]")));
    }
    if repetitions < 0 {
        return Err(PlanError::DomainError(format!("negative repetition count {repetitions}")));
    }
    let exp = i32::try_from(repetitions).unwrap_or(i32::MAX);
    Ok(1.0 - loss_prob.powi(exp))
}

/// Seconds available for messaging before the next interruption: the
/// travel time `distance / speed` scaled by the message density `α`.
pub fn transmission_window(distance: f64, speed: f64, density: f64) -> Result<f64, PlanError> {
    if !(distance >= 0.0 && distance.is_finite()) {
        return Err(PlanError::DomainError(format!("distance must be >= 0, got {distance}")));
    }
    if !(speed > 0.0 && speed.is_finite()) {
        return Err(PlanError::DomainError(format!("speed must be > 0, got {speed}")));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(PlanError::DomainError(format!("density must lie in (0, 1], got {density}")));
    }
    Ok(density * distance / speed)
}
