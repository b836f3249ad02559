use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::conditions::{
    check_with_tolerance, derive_forced_values, ConditionId, ConditionViolation, DerivedValue,
    ValueAssignment,
};
use super::projector_set::{closure, ProjectorId, ProjectorSet};
use super::search::DEFAULT_DEPTH;
use crate::abl::{abl_profile, classify_zero_one, AblProfile, PpsScenario, ZERO_ONE_TOL};
use crate::error::{Error, Result};
use crate::qcore::Pvm;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParadoxConfig {
    pub depth: usize,
    /// Distance from 0 or 1 within which an ABL value counts as certain.
    pub tolerance: f64,
    /// Adds `Π_pre` and `Π_post` to the projector set (unassigned). Off by
    /// default: they are conditioning events, not intermediate outcomes.
    pub include_selection_projectors: bool,
}

impl Default for ParadoxConfig {
    fn default() -> Self {
        ParadoxConfig {
            depth: DEFAULT_DEPTH,
            tolerance: ZERO_ONE_TOL,
            include_selection_projectors: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    LogicalParadox,
    Consistent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::LogicalParadox => "logical-paradox",
            Verdict::Consistent => "consistent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// An intermediate outcome the ABL rule assigns 0 or 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertainOutcome {
    pub measurement: String,
    pub outcome: String,
    pub projector: ProjectorId,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectorInfo {
    pub id: ProjectorId,
    pub name: String,
    pub aliases: Vec<String>,
}

pub(crate) fn projector_table(ps: &ProjectorSet) -> Vec<ProjectorInfo> {
    ps.ids()
        .map(|id| ProjectorInfo {
            id,
            name: ps.describe(id),
            aliases: ps.aliases(id).to_vec(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParadoxReport {
    pub dim: usize,
    pub profile: AblProfile,
    /// The 0/1-classified part of the profile.
    pub certain: Vec<CertainOutcome>,
    /// Every identity in the closed set.
    pub projectors: Vec<ProjectorInfo>,
    /// Identities added by the closure.
    pub closure_added: Vec<ProjectorId>,
    /// Values forced by equality conditions from the certain ones.
    pub derived: Vec<DerivedValue>,
    pub violations: Vec<ConditionViolation>,
    pub evaluated: usize,
    pub skipped: usize,
    pub verdict: Verdict,
}

impl ParadoxReport {
    pub fn name(&self, id: ProjectorId) -> &str {
        &self.projectors[id.0].name
    }

    /// Names of every witness of `v`.
    pub fn witness_names(&self, v: &ConditionViolation) -> Vec<&str> {
        v.witnesses.iter().map(|&id| self.name(id)).collect()
    }
}

/// Classifies the ABL profile, identifies equal projectors across contexts,
/// closes the set, propagates forced values and checks the algebraic
/// conditions.
pub fn detect_logical_paradox(
    scenario: &PpsScenario,
    measurements: &[Pvm],
    config: ParadoxConfig,
) -> Result<ParadoxReport> {
    let profile = abl_profile(scenario, measurements)?;
    if profile.entries.is_empty() || profile.all_impossible() {
        return Err(Error::ImpossiblePostSelection(0.0));
    }
    let mut ps = ProjectorSet::new(scenario.dim());
    let mut assignment = ValueAssignment::empty(0);
    let mut certain = Vec::new();
    let mut violations = Vec::new();
    for entry in &profile.entries {
        let Some(p) = entry.value.probability() else { continue };
        let Some(bit) = classify_zero_one(p, config.tolerance) else { continue };
        let value = if bit { 1.0 } else { 0.0 };
        let pvm = &measurements[entry.measurement];
        let alias = format!("{}/{}", entry.measurement_name, entry.outcome);
        let id = ps.insert(pvm.projector(&entry.outcome)?.clone(), Some(&alias))?;
        match assignment.get(id) {
            Some(prev) if prev != value => violations.push(ConditionViolation {
                condition: ConditionId::Mnc,
                witnesses: vec![id],
                lhs: prev,
                rhs: value,
            }),
            Some(_) => {}
            None => assignment.set(id, value),
        }
        certain.push(CertainOutcome {
            measurement: entry.measurement_name.clone(),
            outcome: entry.outcome.clone(),
            projector: id,
            value,
        });
    }
    if config.include_selection_projectors {
        ps.insert(scenario.pre().clone(), Some("pre"))?;
        ps.insert(scenario.post().clone(), Some("post"))?;
    }
    let base = ps.len();
    let closed = closure(&ps, config.depth);
    let closure_added = (base..closed.len()).map(ProjectorId).collect();

    if certain.is_empty() {
        return Ok(ParadoxReport {
            dim: scenario.dim(),
            profile,
            certain,
            projectors: projector_table(&closed),
            closure_added,
            derived: Vec::new(),
            violations,
            evaluated: 0,
            skipped: 0,
            verdict: Verdict::Inconclusive,
        });
    }

    assignment.resize(closed.len());
    let derived = derive_forced_values(&closed, &mut assignment);
    let report = check_with_tolerance(&closed, &assignment, config.tolerance);
    for mut v in report.violations {
        v.witnesses = with_provenance(&v.witnesses, &derived);
        violations.push(v);
    }
    let verdict = if violations.is_empty() {
        Verdict::Consistent
    } else {
        Verdict::LogicalParadox
    };
    Ok(ParadoxReport {
        dim: scenario.dim(),
        profile,
        certain,
        projectors: projector_table(&closed),
        closure_added,
        derived,
        violations,
        evaluated: report.evaluated,
        skipped: report.skipped,
        verdict,
    })
}

/// `ids` followed by the transitive sources of any derived ones.
fn with_provenance(ids: &[ProjectorId], derived: &[DerivedValue]) -> Vec<ProjectorId> {
    let mut out: Vec<ProjectorId> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut queue: Vec<ProjectorId> = ids.to_vec();
    let mut i = 0;
    while i < queue.len() {
        let id = queue[i];
        i += 1;
        if !seen.insert(id) {
            continue;
        }
        out.push(id);
        if let Some(d) = derived.iter().find(|d| d.id == id) {
            queue.extend(d.sources.iter().copied());
        }
    }
    out
}
