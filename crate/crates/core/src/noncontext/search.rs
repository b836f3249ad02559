use serde::{Deserialize, Serialize};

use super::conditions::{constraint_holds, enumerate_constraints, Constraint, ValueAssignment, CONDITION_TOL};
use super::projector_set::{closure, ProjectorSet};
use crate::error::{Error, Result};

/// Default refusal threshold on the number of free identities.
pub const DEFAULT_MAX_FREE: usize = 30;
pub const DEFAULT_DEPTH: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Closure depth applied before searching.
    pub depth: usize,
    /// `None` lifts the cap.
    pub max_free: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            depth: DEFAULT_DEPTH,
            max_free: Some(DEFAULT_MAX_FREE),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    /// The closed set the assignments are defined over. Identities of the
    /// input set keep their numbers.
    pub closure: ProjectorSet,
    /// Every complete 0/1 assignment satisfying all conditions, in
    /// lexicographic order (0 before 1, lowest identity first).
    pub assignments: Vec<ValueAssignment>,
}

/// Exhaustive backtracking over 0/1 values on the closure of `ps`,
/// extending `fixed`. An empty result means no noncontextual 0/1 valuation
/// exists for this set under the given constraints.
pub fn search_deterministic_assignments(
    ps: &ProjectorSet,
    fixed: &ValueAssignment,
    opts: SearchOptions,
) -> Result<SearchResult> {
    let closed = closure(ps, opts.depth);
    let mut start = fixed.clone();
    if start.len() > closed.len() {
        return Err(Error::Invalid(format!(
            "fixed assignment has {} entries but the set has {}",
            start.len(),
            closed.len()
        )));
    }
    start.resize(closed.len());
    let free: Vec<usize> = (0..closed.len())
        .filter(|&i| start.values()[i].is_none())
        .collect();
    if let Some(cap) = opts.max_free {
        if free.len() > cap {
            return Err(Error::SearchSpaceTooLarge {
                free: free.len(),
                cap,
            });
        }
    }
    let mut position = vec![None; closed.len()];
    for (k, &id) in free.iter().enumerate() {
        position[id] = Some(k);
    }
    // each constraint is checked once, when its last free identity is set
    let mut upfront = Vec::new();
    let mut buckets: Vec<Vec<Constraint>> = vec![Vec::new(); free.len()];
    for c in enumerate_constraints(&closed) {
        match c.ids().iter().filter_map(|id| position[id.0]).max() {
            Some(k) => buckets[k].push(c),
            None => upfront.push(c),
        }
    }
    let mut assignments = Vec::new();
    if upfront.iter().all(|c| constraint_holds(c, &start, CONDITION_TOL)) {
        backtrack(0, &free, &buckets, &mut start, &mut assignments);
    }
    Ok(SearchResult {
        closure: closed,
        assignments,
    })
}

fn backtrack(
    k: usize,
    free: &[usize],
    buckets: &[Vec<Constraint>],
    current: &mut ValueAssignment,
    out: &mut Vec<ValueAssignment>,
) {
    if k == free.len() {
        out.push(current.clone());
        return;
    }
    let id = super::ProjectorId(free[k]);
    for value in [0.0, 1.0] {
        current.set(id, value);
        if buckets[k].iter().all(|c| constraint_holds(c, current, CONDITION_TOL)) {
            backtrack(k + 1, free, buckets, current, out);
        }
    }
    current.unset(id);
}
