//! Ball-in-a-box model: a noncontextual hidden-variable model with
//! measurement disturbance that mirrors the three-box paradox.
//!
//! The ball sits in one of four cells (front/back × left/right). Checking a
//! half and finding the ball there randomizes the other coordinate; not
//! finding it leaves the ball untouched. Pre-selection is "found in front",
//! post-selection is "found in back".

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hvt::{
    hvt_pps_probability, hvt_update, sample_trajectory, Distribution, HvtMeasurement, HvtScenario,
    IndicatorFunction, MonteCarloEstimate, OnticSpace, OutcomeKernel, TransitionMatrix,
};
use crate::qcore::Projector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoxState {
    FL,
    FR,
    BL,
    BR,
}

impl BoxState {
    pub const ALL: [BoxState; 4] = [BoxState::FL, BoxState::FR, BoxState::BL, BoxState::BR];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_front(self) -> bool {
        matches!(self, BoxState::FL | BoxState::FR)
    }

    pub fn is_left(self) -> bool {
        matches!(self, BoxState::FL | BoxState::BL)
    }

    pub fn label(self) -> &'static str {
        match self {
            BoxState::FL => "FL",
            BoxState::FR => "FR",
            BoxState::BL => "BL",
            BoxState::BR => "BR",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxAxis {
    Front,
    Back,
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxOutcome {
    Found,
    NotFound,
}

impl BoxOutcome {
    pub const ALL: [BoxOutcome; 2] = [BoxOutcome::Found, BoxOutcome::NotFound];

    pub fn label(self) -> &'static str {
        match self {
            BoxOutcome::Found => "found",
            BoxOutcome::NotFound => "notfound",
        }
    }
}

/// "Is the ball in this half?"
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoxProcedure {
    pub axis: BoxAxis,
}

impl BoxProcedure {
    pub const ALL: [BoxProcedure; 4] = [
        BoxProcedure { axis: BoxAxis::Front },
        BoxProcedure { axis: BoxAxis::Back },
        BoxProcedure { axis: BoxAxis::Left },
        BoxProcedure { axis: BoxAxis::Right },
    ];

    pub fn new(axis: BoxAxis) -> Self {
        BoxProcedure { axis }
    }

    pub fn name(self) -> &'static str {
        match self.axis {
            BoxAxis::Front => "check-front",
            BoxAxis::Back => "check-back",
            BoxAxis::Left => "check-left",
            BoxAxis::Right => "check-right",
        }
    }

    pub fn contains(self, s: BoxState) -> bool {
        match self.axis {
            BoxAxis::Front => s.is_front(),
            BoxAxis::Back => !s.is_front(),
            BoxAxis::Left => s.is_left(),
            BoxAxis::Right => !s.is_left(),
        }
    }

    fn randomizes_left_right(self) -> bool {
        matches!(self.axis, BoxAxis::Front | BoxAxis::Back)
    }

    /// Probability that finding the ball at `source` moves it to `target`.
    fn found_transition(self, target: BoxState, source: BoxState) -> f64 {
        if !self.contains(source) {
            return if target == source { 1.0 } else { 0.0 };
        }
        let kept = if self.randomizes_left_right() {
            target.is_front() == source.is_front()
        } else {
            target.is_left() == source.is_left()
        };
        if kept {
            0.5
        } else {
            0.0
        }
    }

    fn tag(self, found: bool) -> Projector {
        let cells: Vec<usize> = BoxState::ALL
            .iter()
            .filter(|&&s| self.contains(s) == found)
            .map(|s| s.index())
            .collect();
        Projector::basis_sum(4, &cells)
    }

    /// Outcomes `found` / `notfound`, tagged with the diagonal projectors of
    /// the corresponding cells in `C⁴` (basis order FL, FR, BL, BR).
    pub fn measurement(self, space: &OnticSpace) -> Result<HvtMeasurement> {
        let found_chi = IndicatorFunction::new(
            space,
            BoxState::ALL.iter().map(|&s| self.contains(s)).collect(),
        )?;
        let not_chi = IndicatorFunction::new(
            space,
            BoxState::ALL.iter().map(|&s| !self.contains(s)).collect(),
        )?;
        let d_found = TransitionMatrix::from_fn(space, |t, s| {
            self.found_transition(BoxState::ALL[t], BoxState::ALL[s])
        })?;
        let found = OutcomeKernel::new("found", found_chi, d_found, Some(self.tag(true)))?;
        let missed = OutcomeKernel::undisturbed("notfound", not_chi, Some(self.tag(false)))?;
        HvtMeasurement::new(self.name(), vec![found, missed])
    }
}

impl fmt::Display for BoxProcedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The assembled model.
#[derive(Clone, Debug)]
pub struct BoxModel {
    /// `μ_pre`, `χ_post` and the four procedures as intermediates.
    pub scenario: HvtScenario,
    /// Uniform distribution before pre-selection.
    pub prior: Distribution,
    /// check-front, whose `found` outcome is the pre-selection.
    pub pre: HvtMeasurement,
    /// check-back, whose `found` outcome is the post-selection.
    pub post: HvtMeasurement,
}

pub fn box_space() -> OnticSpace {
    OnticSpace::new(BoxState::ALL.iter().map(|s| s.label())).expect("distinct labels")
}

pub fn build_box_model() -> Result<BoxModel> {
    let space = box_space();
    let prior = Distribution::uniform(&space);
    let pre = BoxProcedure::new(BoxAxis::Front).measurement(&space)?;
    let post = BoxProcedure::new(BoxAxis::Back).measurement(&space)?;
    let mu_pre = hvt_update(&prior, &pre, "found")?;
    let chi_post = post.outcome("found")?.indicator().clone();
    let measurements = BoxProcedure::ALL
        .iter()
        .map(|p| p.measurement(&space))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoxModel {
        scenario: HvtScenario::new(mu_pre, chi_post, measurements)?,
        prior,
        pre,
        post,
    })
}

/// One row of the joint statistics table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointEntry {
    pub procedure: BoxProcedure,
    pub outcome: BoxOutcome,
    pub probability: f64,
}

/// Monte Carlo counterpart of [`JointEntry`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointEstimate {
    pub procedure: BoxProcedure,
    pub outcome: BoxOutcome,
    pub estimate: MonteCarloEstimate,
}

impl BoxModel {
    pub fn pps_probability(&self, procedure: BoxProcedure, outcome: BoxOutcome) -> Result<f64> {
        let m = self.scenario.measurement(procedure.name())?;
        hvt_pps_probability(&self.scenario, m, outcome.label())
    }

    /// `P(pre found ∧ intermediate outcome ∧ post found)` from the uniform
    /// prior, for every procedure and outcome.
    pub fn joint_statistics(&self) -> Result<Vec<JointEntry>> {
        let pre_found = self.pre.outcome("found")?;
        let after_pre = pre_found.apply(self.prior.weights());
        let chi_post = self.scenario.chi_post();
        let mut out = Vec::new();
        for procedure in BoxProcedure::ALL {
            let m = self.scenario.measurement(procedure.name())?;
            for outcome in BoxOutcome::ALL {
                let w = m.outcome(outcome.label())?.apply(&after_pre);
                let probability = w
                    .iter()
                    .enumerate()
                    .map(|(i, x)| chi_post.at(i) * x)
                    .sum();
                out.push(JointEntry {
                    procedure,
                    outcome,
                    probability,
                });
            }
        }
        Ok(out)
    }

    /// Samples `trials` full runs (prior → check-front → intermediate →
    /// check-back) per procedure and counts each joint event.
    pub fn simulate_joint(&self, trials: u64, seed: u64) -> Result<Vec<JointEstimate>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let found = self.pre.index_of("found")?;
        let post_found = self.post.index_of("found")?;
        let mut out = Vec::new();
        for procedure in BoxProcedure::ALL {
            let m = self.scenario.measurement(procedure.name())?;
            let mut counts = [0u64; 2];
            for _ in 0..trials {
                let t = sample_trajectory(&self.prior, &[&self.pre, m, &self.post], &mut rng);
                if t.outcomes[0] == found && t.outcomes[2] == post_found {
                    counts[t.outcomes[1]] += 1;
                }
            }
            for outcome in BoxOutcome::ALL {
                let idx = m.index_of(outcome.label())?;
                out.push(JointEstimate {
                    procedure,
                    outcome,
                    estimate: MonteCarloEstimate::from_counts(counts[idx], trials),
                });
            }
        }
        Ok(out)
    }
}

pub fn box_pps_probability(procedure: BoxProcedure, outcome: BoxOutcome) -> Result<f64> {
    build_box_model()?.pps_probability(procedure, outcome)
}

pub fn box_joint_statistics() -> Result<Vec<JointEntry>> {
    build_box_model()?.joint_statistics()
}
