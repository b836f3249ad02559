use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::conditions::ValueAssignment;
use super::paradox::{projector_table, ProjectorInfo};
use super::projector_set::{ProjectorId, ProjectorSet};
use super::search::{search_deterministic_assignments, SearchOptions, DEFAULT_DEPTH};
use crate::abl::{abl_profile, classify_zero_one, PpsScenario, ZERO_ONE_TOL};
use crate::error::{Error, Result};
use crate::hvt::{
    hvt_pps_probability, Distribution, HvtMeasurement, HvtScenario, IndicatorFunction,
    OnticSpace, OutcomeKernel,
};
use crate::qcore::{Pvm, CONSTRUCTION_TOL};

/// Default cap on the number of ontic states a disturbance search builds.
pub const DEFAULT_MAX_ONTIC: usize = 20;

const FEASIBILITY_TOL: f64 = 1e-9;

/// A support (candidate state indices) and its weights.
type Solution = (Vec<usize>, Vec<f64>);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PvmDependenceCertificate {
    pub measurement_a: String,
    pub measurement_b: String,
    pub outcome: String,
    pub projector: String,
    pub p_a: f64,
    pub p_b: f64,
    pub difference: f64,
    /// `difference > 1e-9`: an undisturbed-complement model (one whose
    /// `Γ_¬k` is the same in both contexts) would predict equal values.
    pub certified: bool,
}

/// Compares the ABL value of one projector reached through two PVMs.
/// `outcome` must name the same projector in both.
pub fn pvm_dependence_certificate(
    scenario: &PpsScenario,
    m1: &Pvm,
    m2: &Pvm,
    outcome: &str,
) -> Result<PvmDependenceCertificate> {
    let (p1, p2) = (m1.projector(outcome)?, m2.projector(outcome)?);
    if !p1.approx_eq(p2, CONSTRUCTION_TOL) {
        return Err(Error::SharedProjectorMismatch(format!(
            "{}/{outcome} is {} but {}/{outcome} is {}",
            m1.name(),
            p1.describe(),
            m2.name(),
            p2.describe()
        )));
    }
    let p_a = scenario.abl_probability(m1, outcome)?;
    let p_b = scenario.abl_probability(m2, outcome)?;
    let difference = (p_a - p_b).abs();
    Ok(PvmDependenceCertificate {
        measurement_a: m1.name().to_string(),
        measurement_b: m2.name().to_string(),
        outcome: outcome.to_string(),
        projector: p1.describe(),
        p_a,
        p_b,
        difference,
        certified: difference > FEASIBILITY_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DisturbanceOptions {
    pub max_ontic: usize,
    pub depth: usize,
    /// Distance from 0 or 1 within which an ABL value becomes a target.
    pub tolerance: f64,
}

impl Default for DisturbanceOptions {
    fn default() -> Self {
        DisturbanceOptions {
            max_ontic: DEFAULT_MAX_ONTIC,
            depth: DEFAULT_DEPTH,
            tolerance: ZERO_ONE_TOL,
        }
    }
}

/// A 0/1 ABL value a candidate model has to reproduce.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AblTarget {
    pub measurement: String,
    pub outcome: String,
    pub value: f64,
}

/// A deterministic assignment used as an ontic state: the identities it
/// sends to 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OnticAssignment {
    pub label: String,
    pub true_projectors: Vec<ProjectorId>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetCheck {
    pub target: AblTarget,
    pub model_value: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibleModel {
    /// Ontic states carrying weight, with their weights.
    pub support: Vec<(String, f64)>,
    pub checks: Vec<TargetCheck>,
    #[serde(skip)]
    pub model: HvtScenario,
}

/// Why one pre- and post-selected state cannot carry weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateObstruction {
    pub state: String,
    /// Indices into the clash list of the targets this state contradicts.
    pub contradicts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfeasibilityCertificate {
    /// A minimal infeasible subset of the targets.
    pub clash: Vec<AblTarget>,
    /// No 0/1 assignment on the closure gives the clash projectors the
    /// clash values at all, whatever the selections.
    pub excluded_by_conditions: bool,
    pub obstructions: Vec<StateObstruction>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Feasibility {
    Feasible(FeasibleModel),
    Infeasible(InfeasibilityCertificate),
}

#[derive(Clone, Debug, Serialize)]
pub struct DisturbanceReport {
    pub projectors: Vec<ProjectorInfo>,
    pub states: Vec<OnticAssignment>,
    /// States with both selection indicators equal to 1.
    pub candidates: Vec<String>,
    pub targets: Vec<AblTarget>,
    pub supports_tried: usize,
    pub result: Feasibility,
}

impl DisturbanceReport {
    pub fn is_feasible(&self) -> bool {
        matches!(self.result, Feasibility::Feasible(_))
    }
}

struct Setup {
    closure: ProjectorSet,
    states: Vec<ValueAssignment>,
    pre: ProjectorId,
    post: ProjectorId,
    /// Per measurement, per outcome.
    outcome_ids: Vec<Vec<ProjectorId>>,
}

/// Looks for a disturbance-free noncontextual model reproducing every 0/1
/// ABL value of `measurements`.
///
/// Ontic states are the deterministic assignments on the closure of the
/// measurement projectors together with `Π_pre` and `Π_post`. Weights are
/// sought over states with `χ_pre = χ_post = 1`; supports are enumerated
/// in increasing size and lexicographic order and the weights solved for
/// exactly on each.
pub fn disturbance_necessity_search(
    scenario: &PpsScenario,
    measurements: &[Pvm],
    opts: DisturbanceOptions,
) -> Result<DisturbanceReport> {
    let profile = abl_profile(scenario, measurements)?;
    if profile.entries.is_empty() || profile.all_impossible() {
        return Err(Error::ImpossiblePostSelection(0.0));
    }
    let setup = build_setup(scenario, measurements, opts)?;
    let mut targets = Vec::new();
    let mut target_ids = Vec::new();
    for e in &profile.entries {
        let Some(p) = e.value.probability() else { continue };
        let Some(bit) = classify_zero_one(p, opts.tolerance) else { continue };
        let k = measurements[e.measurement].index_of(&e.outcome)?;
        targets.push(AblTarget {
            measurement: e.measurement_name.clone(),
            outcome: e.outcome.clone(),
            value: if bit { 1.0 } else { 0.0 },
        });
        target_ids.push(setup.outcome_ids[e.measurement][k]);
    }

    let labels: Vec<String> = (0..setup.states.len()).map(|i| format!("λ{i}")).collect();
    let states = setup
        .states
        .iter()
        .zip(&labels)
        .map(|(s, label)| OnticAssignment {
            label: label.clone(),
            true_projectors: s.defined().filter(|&(_, x)| x == 1.0).map(|(id, _)| id).collect(),
        })
        .collect();
    let candidates: Vec<usize> = (0..setup.states.len())
        .filter(|&i| {
            setup.states[i].get(setup.pre) == Some(1.0) && setup.states[i].get(setup.post) == Some(1.0)
        })
        .collect();

    let chi = |state: usize, id: ProjectorId| setup.states[state].get(id).unwrap_or(0.0);
    let all: Vec<usize> = (0..targets.len()).collect();
    let (solution, supports_tried) = solve_weights(&candidates, &all, &targets, &target_ids, &chi);

    let result = match solution {
        Some((support, mut weights)) => {
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            let model = build_model(&setup, measurements, &labels, &support, &weights)?;
            let checks = verify_hvt_targets(&model, &targets)?;
            if let Some(bad) = checks.iter().find(|c| c.deviation > FEASIBILITY_TOL) {
                return Err(Error::Invalid(format!(
                    "constructed model misses {}/{} by {:e}",
                    bad.target.measurement, bad.target.outcome, bad.deviation
                )));
            }
            Feasibility::Feasible(FeasibleModel {
                support: support.iter().zip(&weights).map(|(&s, &w)| (labels[s].clone(), w)).collect(),
                checks,
                model,
            })
        }
        None => {
            let clash_idx = minimal_clash(&candidates, &targets, &target_ids, &chi);
            let clash: Vec<AblTarget> = clash_idx.iter().map(|&t| targets[t].clone()).collect();
            let mut fixed = ValueAssignment::empty(setup.closure.len());
            for &t in &clash_idx {
                fixed.set(target_ids[t], targets[t].value);
            }
            let excluded_by_conditions = search_deterministic_assignments(
                &setup.closure,
                &fixed,
                SearchOptions {
                    depth: 0,
                    max_free: None,
                },
            )?
            .assignments
            .is_empty();
            let obstructions = candidates
                .iter()
                .map(|&s| StateObstruction {
                    state: labels[s].clone(),
                    contradicts: clash_idx
                        .iter()
                        .enumerate()
                        .filter(|&(_, &t)| chi(s, target_ids[t]) != targets[t].value)
                        .map(|(i, _)| i)
                        .collect(),
                })
                .collect();
            Feasibility::Infeasible(InfeasibilityCertificate {
                clash,
                excluded_by_conditions,
                obstructions,
            })
        }
    };
    Ok(DisturbanceReport {
        projectors: projector_table(&setup.closure),
        states,
        candidates: candidates.iter().map(|&i| labels[i].clone()).collect(),
        targets,
        supports_tried,
        result,
    })
}

fn build_setup(scenario: &PpsScenario, measurements: &[Pvm], opts: DisturbanceOptions) -> Result<Setup> {
    let mut ps = ProjectorSet::new(scenario.dim());
    let mut outcome_ids = Vec::new();
    for m in measurements {
        let ids = m
            .outcomes()
            .map(|(label, p)| ps.insert(p.clone(), Some(&format!("{}/{label}", m.name()))))
            .collect::<Result<Vec<_>>>()?;
        outcome_ids.push(ids);
    }
    let pre = ps.insert(scenario.pre().clone(), Some("pre"))?;
    let post = ps.insert(scenario.post().clone(), Some("post"))?;
    let found = search_deterministic_assignments(
        &ps,
        &ValueAssignment::empty(ps.len()),
        SearchOptions {
            depth: opts.depth,
            ..SearchOptions::default()
        },
    )?;
    // an ontic state must give every measurement exactly one outcome
    let states: Vec<ValueAssignment> = found
        .assignments
        .into_iter()
        .filter(|a| {
            outcome_ids
                .iter()
                .all(|ids| ids.iter().filter(|&&id| a.get(id) == Some(1.0)).count() == 1)
        })
        .collect();
    if states.len() > opts.max_ontic {
        return Err(Error::OnticCapExceeded {
            count: states.len(),
            cap: opts.max_ontic,
        });
    }
    Ok(Setup {
        closure: found.closure,
        states,
        pre,
        post,
        outcome_ids,
    })
}

/// Nonnegative weights on `candidates` with unit sum and
/// `Σ_λ (χ_t(λ) - p_t) w(λ) = 0` for each target index in `active`.
fn solve_weights(
    candidates: &[usize],
    active: &[usize],
    targets: &[AblTarget],
    target_ids: &[ProjectorId],
    chi: &dyn Fn(usize, ProjectorId) -> f64,
) -> (Option<Solution>, usize) {
    let rows = active.len() + 1;
    let mut tried = 0;
    // a feasible system has a basic solution on linearly independent columns
    for size in 1..=rows.min(candidates.len()) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            tried += 1;
            let support: Vec<usize> = combo.iter().map(|&c| candidates[c]).collect();
            let a = DMatrix::from_fn(rows, size, |r, c| {
                if r == active.len() {
                    1.0
                } else {
                    let t = active[r];
                    chi(support[c], target_ids[t]) - targets[t].value
                }
            });
            let mut b = DVector::zeros(rows);
            b[active.len()] = 1.0;
            if let Some(w) = solve_on_support(a, &b) {
                return (Some((support, w)), tried);
            }
            if !next_combination(&mut combo, candidates.len()) {
                break;
            }
        }
    }
    (None, tried)
}

fn solve_on_support(a: DMatrix<f64>, b: &DVector<f64>) -> Option<Vec<f64>> {
    let svd = a.clone().svd(true, true);
    if svd.rank(FEASIBILITY_TOL) < a.ncols() {
        return None;
    }
    let w = svd.solve(b, FEASIBILITY_TOL).ok()?;
    let residual = (&a * &w - b).amax();
    if residual > FEASIBILITY_TOL || w.iter().any(|&x| x < -FEASIBILITY_TOL) {
        return None;
    }
    Some(w.iter().map(|&x| x.max(0.0)).collect())
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Deletion filter: drops each target whose removal keeps the system
/// infeasible, trying the 0-valued ones first.
fn minimal_clash(
    candidates: &[usize],
    targets: &[AblTarget],
    target_ids: &[ProjectorId],
    chi: &dyn Fn(usize, ProjectorId) -> f64,
) -> Vec<usize> {
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by_key(|&t| (targets[t].value != 0.0, t));
    let mut kept: Vec<usize> = (0..targets.len()).collect();
    for t in order {
        let trial: Vec<usize> = kept.iter().copied().filter(|&x| x != t).collect();
        if solve_weights(candidates, &trial, targets, target_ids, chi).0.is_none() {
            kept = trial;
        }
    }
    kept
}

fn build_model(
    setup: &Setup,
    measurements: &[Pvm],
    labels: &[String],
    support: &[usize],
    weights: &[f64],
) -> Result<HvtScenario> {
    let space = OnticSpace::new(labels.iter().cloned())?;
    let indicator = |id: ProjectorId| {
        let values: Vec<bool> = setup.states.iter().map(|s| s.get(id) == Some(1.0)).collect();
        IndicatorFunction::new(&space, values)
    };
    let mut mu = vec![0.0; labels.len()];
    for (&s, &w) in support.iter().zip(weights) {
        mu[s] = w;
    }
    let hvt_measurements = measurements
        .iter()
        .zip(&setup.outcome_ids)
        .map(|(m, ids)| {
            let kernels = m
                .outcomes()
                .zip(ids)
                .map(|((label, p), &id)| OutcomeKernel::undisturbed(label, indicator(id)?, Some(p.clone())))
                .collect::<Result<Vec<_>>>()?;
            HvtMeasurement::new(m.name(), kernels)
        })
        .collect::<Result<Vec<_>>>()?;
    HvtScenario::new(Distribution::new(&space, mu)?, indicator(setup.post)?, hvt_measurements)
}

/// Evaluates `model` on each target with the hidden-variable PPS rule.
pub fn verify_hvt_targets(model: &HvtScenario, targets: &[AblTarget]) -> Result<Vec<TargetCheck>> {
    targets
        .iter()
        .map(|t| {
            let m = model.measurement(&t.measurement)?;
            let model_value = hvt_pps_probability(model, m, &t.outcome)?;
            Ok(TargetCheck {
                target: t.clone(),
                model_value,
                deviation: (model_value - t.value).abs(),
            })
        })
        .collect()
}
