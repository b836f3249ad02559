use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Distribution, HvtMeasurement, HvtScenario};
use crate::error::Result;

/// Frequency estimate with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub std_error: f64,
}

impl MonteCarloEstimate {
    pub fn from_counts(hits: u64, samples: u64) -> Self {
        let (estimate, std_error) = if samples == 0 {
            (f64::NAN, f64::NAN)
        } else {
            let p = hits as f64 / samples as f64;
            (p, (p * (1.0 - p) / samples as f64).sqrt())
        };
        MonteCarloEstimate {
            samples,
            hits,
            estimate,
            std_error,
        }
    }

    /// `|estimate - exact| <= sigmas * std_error`.
    pub fn agrees_with(&self, exact: f64, sigmas: f64) -> bool {
        (self.estimate - exact).abs() <= sigmas * self.std_error
    }
}

fn draw<R: Rng + ?Sized>(weights: impl Iterator<Item = f64>, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    // rounding left u just above the total mass
    last
}

/// Outcome indices observed along one sampled run, and the final state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub outcomes: Vec<usize>,
    pub final_state: usize,
}

/// Draws an initial state from `start`, then for each measurement reads
/// the outcome from the indicators and draws the post-measurement state
/// from that outcome's disturbance column.
pub fn sample_trajectory<R: Rng + ?Sized>(
    start: &Distribution,
    measurements: &[&HvtMeasurement],
    rng: &mut R,
) -> Trajectory {
    let n = start.space().len();
    let mut state = draw(start.weights().iter().copied(), rng);
    let mut outcomes = Vec::with_capacity(measurements.len());
    for m in measurements {
        let j = m.outcome_at(state);
        let d = m.outcomes()[j].disturbance();
        state = draw((0..n).map(|t| d.get(t, state)), rng);
        outcomes.push(j);
    }
    Trajectory {
        outcomes,
        final_state: state,
    }
}

/// Samples `trials` runs `μ_pre → m → χ_post`, keeps those passing
/// post-selection, and estimates the frequency of outcome `k` among them.
pub fn simulate_pps<R: Rng + ?Sized>(
    s: &HvtScenario,
    m: &HvtMeasurement,
    k: &str,
    trials: u64,
    rng: &mut R,
) -> Result<MonteCarloEstimate> {
    s.space().ensure_same(m.space())?;
    let ki = m.index_of(k)?;
    let (mut accepted, mut hits) = (0u64, 0u64);
    for _ in 0..trials {
        let t = sample_trajectory(s.mu_pre(), &[m], rng);
        if s.chi_post().values()[t.final_state] {
            accepted += 1;
            if t.outcomes[0] == ki {
                hits += 1;
            }
        }
    }
    Ok(MonteCarloEstimate::from_counts(hits, accepted))
}
