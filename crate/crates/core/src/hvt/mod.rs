//! Finite hidden-variable models.
//!
//! Transition matrices are always indexed `(target, source)`: entry
//! `D(λ, ω)` is the probability of moving from `ω` to `λ`, and every
//! column (fixed source) sums to one.

mod sample;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{clamp_probability, Projector, CONSTRUCTION_TOL, ZERO_PROBABILITY};

pub use sample::{sample_trajectory, simulate_pps, MonteCarloEstimate, Trajectory};

/// Normalization tolerance for distributions and transition columns.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Ordered set of ontic state labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnticSpace {
    labels: Arc<Vec<String>>,
}

impl OnticSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Invalid("ontic space needs at least one state".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(OnticSpace {
            labels: Arc::new(labels),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    fn ensure_same(&self, other: &OnticSpace) -> Result<()> {
        if Arc::ptr_eq(&self.labels, &other.labels) || self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

/// Probability distribution over an ontic space.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    space: OnticSpace,
    weights: Vec<f64>,
}

impl Distribution {
    pub fn new(space: &OnticSpace, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: weights.len(),
            });
        }
        for (i, &w) in weights.iter().enumerate() {
            if w.is_nan() || w < 0.0 {
                return Err(Error::NegativeWeight {
                    label: space.label(i).to_string(),
                    value: w,
                });
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::NotNormalized(total));
        }
        Ok(Distribution {
            space: space.clone(),
            weights,
        })
    }

    /// Uniform over the named states, zero elsewhere.
    pub fn uniform_over(space: &OnticSpace, labels: &[&str]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Invalid("uniform distribution over no states".into()));
        }
        let mut w = vec![0.0; space.len()];
        for l in labels {
            w[space.index(l)?] = 1.0 / labels.len() as f64;
        }
        Distribution::new(space, w)
    }

    pub fn uniform(space: &OnticSpace) -> Self {
        let n = space.len();
        Distribution {
            space: space.clone(),
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn point(space: &OnticSpace, label: &str) -> Result<Self> {
        let mut w = vec![0.0; space.len()];
        w[space.index(label)?] = 1.0;
        Distribution::new(space, w)
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, label: &str) -> Result<f64> {
        Ok(self.weights[self.space.index(label)?])
    }
}

/// `{0,1}`-valued response function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorFunction {
    space: OnticSpace,
    values: Vec<bool>,
}

impl IndicatorFunction {
    pub fn new(space: &OnticSpace, values: Vec<bool>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        Ok(IndicatorFunction {
            space: space.clone(),
            values,
        })
    }

    /// Accepts only the exact values 0 and 1.
    pub fn from_values(space: &OnticSpace, values: &[f64]) -> Result<Self> {
        let bits = values
            .iter()
            .map(|&v| {
                if v == 0.0 {
                    Ok(false)
                } else if v == 1.0 {
                    Ok(true)
                } else {
                    Err(Error::Invalid(format!("indicator value {v} is not 0 or 1")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        IndicatorFunction::new(space, bits)
    }

    /// Indicator of the named states.
    pub fn of_states(space: &OnticSpace, labels: &[&str]) -> Result<Self> {
        let mut v = vec![false; space.len()];
        for l in labels {
            v[space.index(l)?] = true;
        }
        IndicatorFunction::new(space, v)
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn at(&self, index: usize) -> f64 {
        if self.values[index] {
            1.0
        } else {
            0.0
        }
    }
}

/// Column-stochastic disturbance kernel `D(target, source)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    space: OnticSpace,
    entries: Vec<f64>,
}

impl TransitionMatrix {
    /// `rows[target][source]`.
    pub fn new(space: &OnticSpace, rows: &[Vec<f64>]) -> Result<Self> {
        let n = space.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        let entries: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_entries(space, entries)
    }

    pub fn from_fn(space: &OnticSpace, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let n = space.len();
        let entries = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::from_entries(space, entries)
    }

    fn from_entries(space: &OnticSpace, entries: Vec<f64>) -> Result<Self> {
        let n = space.len();
        for (i, &e) in entries.iter().enumerate() {
            if e.is_nan() || e < 0.0 {
                return Err(Error::NegativeWeight {
                    label: format!("{}<-{}", space.label(i / n), space.label(i % n)),
                    value: e,
                });
            }
        }
        for source in 0..n {
            let sum: f64 = (0..n).map(|t| entries[t * n + source]).sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotStochastic {
                    source_state: space.label(source).to_string(),
                    sum,
                });
            }
        }
        Ok(TransitionMatrix {
            space: space.clone(),
            entries,
        })
    }

    pub fn identity(space: &OnticSpace) -> Self {
        let n = space.len();
        let entries = (0..n * n)
            .map(|i| if i / n == i % n { 1.0 } else { 0.0 })
            .collect();
        TransitionMatrix {
            space: space.clone(),
            entries,
        }
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn get(&self, target: usize, source: usize) -> f64 {
        self.entries[target * self.space.len() + source]
    }

    /// Row-major `rows[target][source]`.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.space.len())
            .map(<[f64]>::to_vec)
            .collect()
    }
}

/// One measurement outcome: indicator `χ`, disturbance `D`, and the
/// composite `Γ(λ,ω) = D(λ,ω) χ(ω)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeKernel {
    label: String,
    indicator: IndicatorFunction,
    disturbance: TransitionMatrix,
    tag: Option<Projector>,
}

impl OutcomeKernel {
    pub fn new(
        label: impl Into<String>,
        indicator: IndicatorFunction,
        disturbance: TransitionMatrix,
        tag: Option<Projector>,
    ) -> Result<Self> {
        indicator.space.ensure_same(&disturbance.space)?;
        let kernel = OutcomeKernel {
            label: label.into(),
            indicator,
            disturbance,
            tag,
        };
        kernel.check_marginal()?;
        Ok(kernel)
    }

    /// Bayesian conditioning only: `D = identity`.
    pub fn undisturbed(
        label: impl Into<String>,
        indicator: IndicatorFunction,
        tag: Option<Projector>,
    ) -> Result<Self> {
        let d = TransitionMatrix::identity(&indicator.space);
        OutcomeKernel::new(label, indicator, d, tag)
    }

    /// `Σ_λ Γ(λ,ω) = χ(ω)` for every source `ω`.
    pub fn check_marginal(&self) -> Result<()> {
        let n = self.space().len();
        for source in 0..n {
            let marginal: f64 = (0..n).map(|t| self.gamma(t, source)).sum();
            let dev = (marginal - self.indicator.at(source)).abs();
            if dev > STOCHASTIC_TOL {
                return Err(Error::MarginalIdentity {
                    state: self.space().label(source).to_string(),
                    deviation: dev,
                });
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> &OnticSpace {
        &self.indicator.space
    }

    pub fn indicator(&self) -> &IndicatorFunction {
        &self.indicator
    }

    pub fn disturbance(&self) -> &TransitionMatrix {
        &self.disturbance
    }

    pub fn tag(&self) -> Option<&Projector> {
        self.tag.as_ref()
    }

    pub fn gamma(&self, target: usize, source: usize) -> f64 {
        self.disturbance.get(target, source) * self.indicator.at(source)
    }

    /// `Σ_ω Γ(λ,ω) w(ω)` for an unnormalized weight vector `w`.
    pub fn apply(&self, weights: &[f64]) -> Vec<f64> {
        let n = self.space().len();
        (0..n)
            .map(|t| (0..n).map(|s| self.gamma(t, s) * weights[s]).sum())
            .collect()
    }
}

/// Sharp measurement in a hidden-variable model.
#[derive(Clone, Debug, PartialEq)]
pub struct HvtMeasurement {
    name: String,
    outcomes: Vec<OutcomeKernel>,
}

impl HvtMeasurement {
    pub fn new(name: impl Into<String>, outcomes: Vec<OutcomeKernel>) -> Result<Self> {
        let name = name.into();
        let Some(first) = outcomes.first() else {
            return Err(Error::Invalid(format!("measurement `{name}` has no outcomes")));
        };
        let space = first.space().clone();
        for (i, o) in outcomes.iter().enumerate() {
            space.ensure_same(o.space())?;
            if outcomes[..i].iter().any(|p| p.label == o.label) {
                return Err(Error::DuplicateLabel(o.label.clone()));
            }
        }
        for state in 0..space.len() {
            let hits = outcomes.iter().filter(|o| o.indicator.values[state]).count();
            if hits != 1 {
                return Err(Error::IndicatorsNotComplete {
                    measurement: name,
                    state: space.label(state).to_string(),
                });
            }
        }
        Ok(HvtMeasurement { name, outcomes })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &OnticSpace {
        self.outcomes[0].space()
    }

    pub fn outcomes(&self) -> &[OutcomeKernel] {
        &self.outcomes
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.outcomes
            .iter()
            .position(|o| o.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn outcome(&self, label: &str) -> Result<&OutcomeKernel> {
        Ok(&self.outcomes[self.index_of(label)?])
    }

    /// The outcome whose indicator fires at `state`.
    pub fn outcome_at(&self, state: usize) -> usize {
        self.outcomes
            .iter()
            .position(|o| o.indicator.values[state])
            .expect("indicators are complete")
    }

    /// `Γ_¬k = Σ_{j≠k} Γ_j`, row-major `(target, source)`.
    pub fn gamma_complement(&self, k: usize) -> Vec<Vec<f64>> {
        let n = self.space().len();
        let mut out = vec![vec![0.0; n]; n];
        for (j, o) in self.outcomes.iter().enumerate() {
            if j == k {
                continue;
            }
            for (t, row) in out.iter_mut().enumerate() {
                for (s, cell) in row.iter_mut().enumerate() {
                    *cell += o.gamma(t, s);
                }
            }
        }
        out
    }
}

/// Pre-selected distribution, post-selection indicator and the available
/// intermediate measurements.
#[derive(Clone, Debug, PartialEq)]
pub struct HvtScenario {
    space: OnticSpace,
    mu_pre: Distribution,
    chi_post: IndicatorFunction,
    measurements: Vec<HvtMeasurement>,
}

impl HvtScenario {
    pub fn new(
        mu_pre: Distribution,
        chi_post: IndicatorFunction,
        measurements: Vec<HvtMeasurement>,
    ) -> Result<Self> {
        let space = mu_pre.space.clone();
        space.ensure_same(&chi_post.space)?;
        for (i, m) in measurements.iter().enumerate() {
            space.ensure_same(m.space())?;
            if measurements[..i].iter().any(|o| o.name == m.name) {
                return Err(Error::DuplicateLabel(m.name.clone()));
            }
        }
        Ok(HvtScenario {
            space,
            mu_pre,
            chi_post,
            measurements,
        })
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn mu_pre(&self) -> &Distribution {
        &self.mu_pre
    }

    pub fn chi_post(&self) -> &IndicatorFunction {
        &self.chi_post
    }

    pub fn measurements(&self) -> &[HvtMeasurement] {
        &self.measurements
    }

    pub fn measurement(&self, name: &str) -> Result<&HvtMeasurement> {
        self.measurements
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// The same scenario with every disturbance replaced by the identity.
    pub fn without_disturbance(&self) -> Result<HvtScenario> {
        let measurements = self
            .measurements
            .iter()
            .map(|m| {
                let outcomes = m
                    .outcomes
                    .iter()
                    .map(|o| OutcomeKernel::undisturbed(o.label.clone(), o.indicator.clone(), o.tag.clone()))
                    .collect::<Result<Vec<_>>>()?;
                HvtMeasurement::new(m.name.clone(), outcomes)
            })
            .collect::<Result<Vec<_>>>()?;
        HvtScenario::new(self.mu_pre.clone(), self.chi_post.clone(), measurements)
    }
}

/// `p_μ(X = j) = Σ_λ χ_j(λ) μ(λ)`.
pub fn hvt_outcome_probability(mu: &Distribution, m: &HvtMeasurement, j: &str) -> Result<f64> {
    mu.space.ensure_same(m.space())?;
    let kernel = m.outcome(j)?;
    let p: f64 = mu
        .weights
        .iter()
        .enumerate()
        .map(|(i, w)| kernel.indicator.at(i) * w)
        .sum();
    clamp_probability(p, STOCHASTIC_TOL)
}

/// `μ(λ | X = j) ∝ Σ_ω Γ_j(λ,ω) μ(ω)`.
pub fn hvt_update(mu: &Distribution, m: &HvtMeasurement, j: &str) -> Result<Distribution> {
    mu.space.ensure_same(m.space())?;
    let unnormalized = m.outcome(j)?.apply(&mu.weights);
    let total: f64 = unnormalized.iter().sum();
    if total <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(total));
    }
    Distribution::new(&mu.space, unnormalized.into_iter().map(|w| w / total).collect())
}

fn post_weighted(s: &HvtScenario, gamma: impl Fn(usize, usize) -> f64) -> f64 {
    let n = s.space.len();
    let mut total = 0.0;
    for t in 0..n {
        if !s.chi_post.values[t] {
            continue;
        }
        for src in 0..n {
            total += gamma(t, src) * s.mu_pre.weights[src];
        }
    }
    total
}

/// Unnormalized `(Σ χ_post Γ_k μ_pre, Σ χ_post (Γ_k + Γ_¬k) μ_pre)`.
pub fn hvt_pps_terms(s: &HvtScenario, m: &HvtMeasurement, k: &str) -> Result<(f64, f64)> {
    s.space.ensure_same(m.space())?;
    let ki = m.index_of(k)?;
    let kernel = &m.outcomes[ki];
    let num = post_weighted(s, |t, src| kernel.gamma(t, src));
    let not_k = m.gamma_complement(ki);
    let rest = post_weighted(s, |t, src| not_k[t][src]);
    Ok((num, num + rest))
}

/// PPS probability rule for hidden-variable models.
pub fn hvt_pps_probability(s: &HvtScenario, m: &HvtMeasurement, k: &str) -> Result<f64> {
    let (num, den) = hvt_pps_terms(s, m, k)?;
    if den <= ZERO_PROBABILITY {
        return Err(Error::ImpossiblePostSelection(den));
    }
    clamp_probability(num / den, STOCHASTIC_TOL)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRef {
    pub measurement: String,
    pub outcome: String,
}

impl std::fmt::Display for OutcomeRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.measurement, self.outcome)
    }
}

/// Two outcomes with the same projector but different indicators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicatorMismatch {
    pub first: OutcomeRef,
    pub second: OutcomeRef,
    /// Ontic states where the indicators differ.
    pub states: Vec<String>,
}

/// Two outcomes with the same projector but different `Γ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelMismatch {
    pub first: OutcomeRef,
    pub second: OutcomeRef,
    pub target: String,
    pub source: String,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoncontextualityReport<V> {
    pub pairs_compared: usize,
    pub violations: Vec<V>,
}

impl<V> NoncontextualityReport<V> {
    pub fn is_noncontextual(&self) -> bool {
        self.violations.is_empty()
    }
}

fn tagged_outcomes(model: &[HvtMeasurement]) -> Result<Vec<(OutcomeRef, &OutcomeKernel, &Projector)>> {
    let mut out = Vec::new();
    for m in model {
        for o in &m.outcomes {
            let tag = o.tag.as_ref().ok_or_else(|| Error::MissingTag {
                measurement: m.name.clone(),
                outcome: o.label.clone(),
            })?;
            out.push((
                OutcomeRef {
                    measurement: m.name.clone(),
                    outcome: o.label.clone(),
                },
                o,
                tag,
            ));
        }
    }
    if let Some((_, first, _)) = out.first() {
        let space = first.space().clone();
        for (_, o, _) in &out {
            space.ensure_same(o.space())?;
        }
    }
    Ok(out)
}

/// Outcomes tagged with equal projectors must share one indicator function.
pub fn check_measurement_noncontextuality(
    model: &[HvtMeasurement],
) -> Result<NoncontextualityReport<IndicatorMismatch>> {
    let tagged = tagged_outcomes(model)?;
    let mut report = NoncontextualityReport {
        pairs_compared: 0,
        violations: Vec::new(),
    };
    for i in 0..tagged.len() {
        for j in (i + 1)..tagged.len() {
            let (ref a, ka, pa) = tagged[i];
            let (ref b, kb, pb) = tagged[j];
            if !pa.approx_eq(pb, CONSTRUCTION_TOL) {
                continue;
            }
            report.pairs_compared += 1;
            let states: Vec<String> = (0..ka.space().len())
                .filter(|&s| ka.indicator.values[s] != kb.indicator.values[s])
                .map(|s| ka.space().label(s).to_string())
                .collect();
            if !states.is_empty() {
                report.violations.push(IndicatorMismatch {
                    first: a.clone(),
                    second: b.clone(),
                    states,
                });
            }
        }
    }
    Ok(report)
}

/// Outcomes tagged with equal projectors (equal Lüders maps) must share one
/// `Γ`. Disturbance entries on sources where `χ = 0` are masked by `Γ`.
pub fn check_transformation_noncontextuality(
    model: &[HvtMeasurement],
) -> Result<NoncontextualityReport<KernelMismatch>> {
    let tagged = tagged_outcomes(model)?;
    let mut report = NoncontextualityReport {
        pairs_compared: 0,
        violations: Vec::new(),
    };
    for i in 0..tagged.len() {
        for j in (i + 1)..tagged.len() {
            let (ref a, ka, pa) = tagged[i];
            let (ref b, kb, pb) = tagged[j];
            if !pa.approx_eq(pb, CONSTRUCTION_TOL) {
                continue;
            }
            report.pairs_compared += 1;
            let n = ka.space().len();
            let mut worst: Option<(usize, usize, f64)> = None;
            for t in 0..n {
                for s in 0..n {
                    let dev = (ka.gamma(t, s) - kb.gamma(t, s)).abs();
                    if dev > STOCHASTIC_TOL && worst.is_none_or(|(_, _, w)| dev > w) {
                        worst = Some((t, s, dev));
                    }
                }
            }
            if let Some((t, s, deviation)) = worst {
                report.violations.push(KernelMismatch {
                    first: a.clone(),
                    second: b.clone(),
                    target: ka.space().label(t).to_string(),
                    source: ka.space().label(s).to_string(),
                    deviation,
                });
            }
        }
    }
    Ok(report)
}
