use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::projector_set::{ProjectorId, ProjectorSet};

/// Tolerance on the equalities and bounds of the algebraic conditions.
pub const CONDITION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionId {
    /// `0 ≤ p(P) ≤ 1`
    Ac0,
    /// `p(I - P) = 1 - p(P)`
    Ac1,
    /// `p(I) = 1`, `p(0) = 0`
    Ac2,
    /// `p(PQ) ≤ p(P)` for commuting `P, Q`
    Ac3,
    /// `p(P + Q - PQ) = p(P) + p(Q) - p(PQ)` for commuting `P, Q`
    Ac4,
    /// One projector received two different values from different contexts.
    Mnc,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionId::Ac0 => "ac0",
            ConditionId::Ac1 => "ac1",
            ConditionId::Ac2 => "ac2",
            ConditionId::Ac3 => "ac3",
            ConditionId::Ac4 => "ac4",
            ConditionId::Mnc => "mnc",
        };
        f.write_str(s)
    }
}

/// One instance of an algebraic condition over concrete identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Constraint {
    Bounds(ProjectorId),
    Complement { p: ProjectorId, complement: ProjectorId },
    Unit(ProjectorId),
    Null(ProjectorId),
    MeetBelow { meet: ProjectorId, p: ProjectorId },
    Join { p: ProjectorId, q: ProjectorId, meet: ProjectorId, join: ProjectorId },
}

impl Constraint {
    pub(crate) fn condition(&self) -> ConditionId {
        match self {
            Constraint::Bounds(_) => ConditionId::Ac0,
            Constraint::Complement { .. } => ConditionId::Ac1,
            Constraint::Unit(_) | Constraint::Null(_) => ConditionId::Ac2,
            Constraint::MeetBelow { .. } => ConditionId::Ac3,
            Constraint::Join { .. } => ConditionId::Ac4,
        }
    }

    pub(crate) fn ids(&self) -> Vec<ProjectorId> {
        match *self {
            Constraint::Bounds(a) | Constraint::Unit(a) | Constraint::Null(a) => vec![a],
            Constraint::Complement { p, complement } => vec![p, complement],
            Constraint::MeetBelow { meet, p } => vec![meet, p],
            Constraint::Join { p, q, meet, join } => vec![join, p, q, meet],
        }
    }

    /// Linear form `Σ c·x = rhs` for the equality conditions.
    fn linear(&self) -> Option<(Vec<(ProjectorId, f64)>, f64)> {
        match *self {
            Constraint::Complement { p, complement } => Some((vec![(p, 1.0), (complement, 1.0)], 1.0)),
            Constraint::Unit(i) => Some((vec![(i, 1.0)], 1.0)),
            Constraint::Null(z) => Some((vec![(z, 1.0)], 0.0)),
            Constraint::Join { p, q, meet, join } => Some((
                vec![(join, 1.0), (p, -1.0), (q, -1.0), (meet, 1.0)],
                0.0,
            )),
            Constraint::Bounds(_) | Constraint::MeetBelow { .. } => None,
        }
    }

    /// `None` when some value is undefined, else `Some(Err((lhs, rhs)))` on
    /// violation.
    fn evaluate(&self, v: &ValueAssignment, tol: f64) -> Option<Result<(), (f64, f64)>> {
        let vals = self
            .ids()
            .iter()
            .map(|&id| v.get(id))
            .collect::<Option<Vec<f64>>>()?;
        let outcome = match *self {
            Constraint::Bounds(_) => {
                let p = vals[0];
                if p < -tol {
                    Err((p, 0.0))
                } else if p > 1.0 + tol {
                    Err((p, 1.0))
                } else {
                    Ok(())
                }
            }
            Constraint::MeetBelow { .. } => {
                if vals[0] > vals[1] + tol {
                    Err((vals[0], vals[1]))
                } else {
                    Ok(())
                }
            }
            _ => {
                let (terms, rhs) = self.linear().expect("equality");
                // report as `lhs = value of the first term`, `rhs = what the
                // other terms force it to be`
                let (first, c0) = terms[0];
                let lhs = v.get(first)?;
                let rest: f64 = terms[1..]
                    .iter()
                    .map(|&(id, c)| v.get(id).map(|x| c * x))
                    .sum::<Option<f64>>()?;
                let forced = (rhs - rest) / c0;
                if (lhs - forced).abs() > tol {
                    Err((lhs, forced))
                } else {
                    Ok(())
                }
            }
        };
        Some(outcome)
    }
}

/// Every condition instance expressible within `ps`.
pub(crate) fn enumerate_constraints(ps: &ProjectorSet) -> Vec<Constraint> {
    let d = ps.dim();
    let mut out = Vec::new();
    for id in ps.ids() {
        out.push(Constraint::Bounds(id));
    }
    if let Some(i) = ps.find(&crate::qcore::Projector::identity(d)) {
        out.push(Constraint::Unit(i));
    }
    if let Some(z) = ps.find(&crate::qcore::Projector::zero(d)) {
        out.push(Constraint::Null(z));
    }
    for id in ps.ids() {
        if let Some(c) = ps.find(&ps.projector(id).complement()) {
            if id < c {
                out.push(Constraint::Complement { p: id, complement: c });
            }
        }
    }
    for (p, q) in ps.commuting_pairs() {
        let (pp, qq) = (ps.projector(p), ps.projector(q));
        let meet = pp.meet(qq).ok().and_then(|m| ps.find(&m));
        let join = pp.join(qq).ok().and_then(|j| ps.find(&j));
        if let Some(meet) = meet {
            out.push(Constraint::MeetBelow { meet, p });
            out.push(Constraint::MeetBelow { meet, p: q });
            if let Some(join) = join {
                out.push(Constraint::Join { p, q, meet, join });
            }
        }
    }
    // one meet can arise from several pairs
    let mut seen = HashSet::new();
    out.retain(|c| seen.insert(*c));
    out
}

/// Probability (or 0/1 value) per projector identity; `None` = unassigned.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueAssignment {
    values: Vec<Option<f64>>,
}

impl ValueAssignment {
    pub fn empty(len: usize) -> Self {
        ValueAssignment {
            values: vec![None; len],
        }
    }

    pub fn from_values(values: Vec<Option<f64>>) -> Self {
        ValueAssignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, id: ProjectorId) -> Option<f64> {
        self.values.get(id.0).copied().flatten()
    }

    pub fn set(&mut self, id: ProjectorId, value: f64) {
        if id.0 >= self.values.len() {
            self.values.resize(id.0 + 1, None);
        }
        self.values[id.0] = Some(value);
    }

    pub fn unset(&mut self, id: ProjectorId) {
        if let Some(v) = self.values.get_mut(id.0) {
            *v = None;
        }
    }

    pub fn resize(&mut self, len: usize) {
        self.values.resize(len, None);
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn defined(&self) -> impl Iterator<Item = (ProjectorId, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|x| (ProjectorId(i), x)))
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionViolation {
    pub condition: ConditionId,
    /// Projectors the violated instance is stated over, followed by any
    /// projectors whose values the derived ones were computed from.
    pub witnesses: Vec<ProjectorId>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub violations: Vec<ConditionViolation>,
    /// Instances with every value defined.
    pub evaluated: usize,
    /// Instances skipped because some value was undefined.
    pub skipped: usize,
}

impl ConditionReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every algebraic-condition instance over `ps` against `v`.
/// Instances touching unassigned identities are skipped and counted.
pub fn check_algebraic_conditions(ps: &ProjectorSet, v: &ValueAssignment) -> ConditionReport {
    check_with_tolerance(ps, v, CONDITION_TOL)
}

pub fn check_with_tolerance(ps: &ProjectorSet, v: &ValueAssignment, tol: f64) -> ConditionReport {
    let mut report = ConditionReport::default();
    for c in enumerate_constraints(ps) {
        match c.evaluate(v, tol) {
            None => report.skipped += 1,
            Some(res) => {
                report.evaluated += 1;
                if let Err((lhs, rhs)) = res {
                    report.violations.push(ConditionViolation {
                        condition: c.condition(),
                        witnesses: c.ids(),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    report
}

pub(crate) fn constraint_holds(c: &Constraint, v: &ValueAssignment, tol: f64) -> bool {
    !matches!(c.evaluate(v, tol), Some(Err(_)))
}

/// A value forced by an equality condition from already-known values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedValue {
    pub id: ProjectorId,
    pub value: f64,
    pub rule: ConditionId,
    pub sources: Vec<ProjectorId>,
}

/// Fills unassigned identities whose value is forced by an equality
/// condition (ac1, ac2, ac4) with exactly one unknown, until nothing
/// changes. Known values are never overwritten; conflicts are left for
/// [`check_algebraic_conditions`] to report.
pub fn derive_forced_values(ps: &ProjectorSet, v: &mut ValueAssignment) -> Vec<DerivedValue> {
    v.resize(ps.len());
    let constraints = enumerate_constraints(ps);
    let mut derived = Vec::new();
    loop {
        let mut changed = false;
        for c in &constraints {
            let Some((terms, rhs)) = c.linear() else { continue };
            let mut unknown: Option<ProjectorId> = None;
            let mut coeff = 0.0;
            let mut known = 0.0;
            let mut solvable = true;
            for &(id, k) in &terms {
                match v.get(id) {
                    Some(x) => known += k * x,
                    None => match unknown {
                        None => {
                            unknown = Some(id);
                            coeff += k;
                        }
                        Some(u) if u == id => coeff += k,
                        Some(_) => solvable = false,
                    },
                }
            }
            let Some(u) = unknown else { continue };
            if !solvable || coeff == 0.0 {
                continue;
            }
            let value = (rhs - known) / coeff;
            v.set(u, value);
            let mut sources: Vec<ProjectorId> = terms.iter().map(|&(id, _)| id).filter(|&id| id != u).collect();
            sources.dedup();
            derived.push(DerivedValue {
                id: u,
                value,
                rule: c.condition(),
                sources,
            });
            changed = true;
        }
        if !changed {
            break;
        }
    }
    derived
}
