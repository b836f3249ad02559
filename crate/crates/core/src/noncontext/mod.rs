//! Algebraic conditions on probability assignments over projectors, 0/1
//! assignment search, logical PPS paradox detection and the two
//! certificates about noncontextual hidden-variable reproductions of ABL.

mod certificates;
mod conditions;
mod paradox;
mod projector_set;
mod search;

pub use certificates::{
    disturbance_necessity_search, pvm_dependence_certificate, verify_hvt_targets, AblTarget,
    DisturbanceOptions, DisturbanceReport, Feasibility, FeasibleModel, InfeasibilityCertificate,
    OnticAssignment, PvmDependenceCertificate, StateObstruction, TargetCheck, DEFAULT_MAX_ONTIC,
};
pub use conditions::{
    check_algebraic_conditions, check_with_tolerance, derive_forced_values, ConditionId,
    ConditionReport, ConditionViolation, DerivedValue, ValueAssignment, CONDITION_TOL,
};
pub use paradox::{
    detect_logical_paradox, CertainOutcome, ParadoxConfig, ParadoxReport, ProjectorInfo, Verdict,
};
pub use projector_set::{closure, ProjectorId, ProjectorSet};
pub use search::{
    search_deterministic_assignments, SearchOptions, SearchResult, DEFAULT_DEPTH, DEFAULT_MAX_FREE,
};

#[cfg(test)]
mod tests;
