use std::fmt::Write as _;

use serde_json::json;

use super::files::{HvtModelFile, LoadedScenario, ScenarioFile};
use super::report::prob;
use super::{exit, AblArgs, DisturbanceArgs, Failure, HvtArgs, Inputs, KsArgs, Outcome, ParadoxArgs, ToyboxArgs};
use crate::abl::ZERO_ONE_TOL;
use crate::hvt::hvt_pps_terms;
use crate::noncontext::{
    detect_logical_paradox, disturbance_necessity_search, search_deterministic_assignments,
    DisturbanceOptions, Feasibility, ParadoxConfig, ProjectorSet, SearchOptions, ValueAssignment,
    Verdict, DEFAULT_DEPTH, DEFAULT_MAX_ONTIC,
};
use crate::toybox::build_box_model;

pub const DEFAULT_TRIALS: u64 = 100_000;

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report data serializes")
}

fn load_scenario(path: &std::path::Path, inputs: &mut Inputs) -> Result<LoadedScenario, Failure> {
    let text = inputs.read(path)?;
    Ok(ScenarioFile::parse(&text)?.load()?)
}

pub fn abl(a: &AblArgs, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let loaded = load_scenario(&a.scenario, inputs)?;
    let pvm = loaded.pvm(&a.pvm)?;
    let p = loaded.scenario.abl_probability(pvm, &a.outcome)?;
    Ok(Outcome {
        code: exit::OK,
        human: format!("p({}/{} | pre, post) = {}\n", a.pvm, a.outcome, prob(p)),
        results: json!({
            "measurement": a.pvm,
            "outcome": a.outcome,
            "probability": p,
        }),
    })
}

pub fn paradox(a: &ParadoxArgs, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let loaded = load_scenario(&a.scenario, inputs)?;
    let config = ParadoxConfig {
        depth: a.depth.or(loaded.options.depth).unwrap_or(DEFAULT_DEPTH),
        tolerance: a.tolerance.or(loaded.options.tolerance).unwrap_or(ZERO_ONE_TOL),
        include_selection_projectors: false,
    };
    let r = detect_logical_paradox(&loaded.scenario, &loaded.pvms, config)?;
    let mut h = String::new();
    writeln!(h, "verdict: {}", r.verdict).unwrap();
    writeln!(h, "ABL profile:").unwrap();
    for e in &r.profile.entries {
        let v = match e.value.probability() {
            Some(p) => prob(p),
            None => "impossible".to_string(),
        };
        writeln!(h, "  {}/{}  {v}", e.measurement_name, e.outcome).unwrap();
    }
    if !r.derived.is_empty() {
        writeln!(h, "derived values:").unwrap();
        for d in &r.derived {
            let from: Vec<&str> = d.sources.iter().map(|&s| r.name(s)).collect();
            write!(h, "  p({}) = {}  by {}", r.name(d.id), prob(d.value), d.rule).unwrap();
            if from.is_empty() {
                writeln!(h).unwrap();
            } else {
                writeln!(h, " from {}", from.join(", ")).unwrap();
            }
        }
    }
    if !r.violations.is_empty() {
        writeln!(h, "violations:").unwrap();
        for v in &r.violations {
            writeln!(
                h,
                "  {}  lhs {}  rhs {}  on {}",
                v.condition,
                prob(v.lhs),
                prob(v.rhs),
                r.witness_names(v).join(", ")
            )
            .unwrap();
        }
    }
    writeln!(h, "conditions evaluated: {}, skipped: {}", r.evaluated, r.skipped).unwrap();
    let code = match r.verdict {
        Verdict::Consistent => exit::OK,
        Verdict::LogicalParadox => exit::PARADOX,
        Verdict::Inconclusive => exit::INCONCLUSIVE,
    };
    Ok(Outcome {
        code,
        human: h,
        results: to_value(&r),
    })
}

pub fn hvt(a: &HvtArgs, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let text = inputs.read(&a.model)?;
    let model = HvtModelFile::parse(&text)?.load()?;
    let m = model.measurement(&a.measurement)?;
    let (num, den) = hvt_pps_terms(&model, m, &a.outcome)?;
    let p = crate::hvt::hvt_pps_probability(&model, m, &a.outcome)?;
    Ok(Outcome {
        code: exit::OK,
        human: format!("p({}/{} | pre, post) = {}\n", a.measurement, a.outcome, prob(p)),
        results: json!({
            "measurement": a.measurement,
            "outcome": a.outcome,
            "numerator": num,
            "denominator": den,
            "probability": p,
        }),
    })
}

pub fn disturbance(a: &DisturbanceArgs, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let loaded = load_scenario(&a.scenario, inputs)?;
    let opts = DisturbanceOptions {
        max_ontic: a.max_ontic.or(loaded.options.max_ontic).unwrap_or(DEFAULT_MAX_ONTIC),
        depth: a.depth.or(loaded.options.depth).unwrap_or(DEFAULT_DEPTH),
        tolerance: a.tolerance.or(loaded.options.tolerance).unwrap_or(ZERO_ONE_TOL),
    };
    let r = disturbance_necessity_search(&loaded.scenario, &loaded.pvms, opts)?;
    let mut h = String::new();
    let mut results = json!({ "report": to_value(&r) });
    match &r.result {
        Feasibility::Feasible(f) => {
            writeln!(h, "FEASIBLE").unwrap();
            writeln!(h, "ontic states: {}, pre- and post-selected: {}", r.states.len(), r.candidates.len()).unwrap();
            for (state, w) in &f.support {
                writeln!(h, "  μ_pre({state}) = {}", prob(*w)).unwrap();
            }
            for c in &f.checks {
                writeln!(
                    h,
                    "  {}/{}  target {}  model {}",
                    c.target.measurement,
                    c.target.outcome,
                    prob(c.target.value),
                    prob(c.model_value)
                )
                .unwrap();
            }
            results["model"] = to_value(&HvtModelFile::from_scenario(&f.model));
        }
        Feasibility::Infeasible(cert) => {
            writeln!(h, "INFEASIBLE").unwrap();
            writeln!(h, "ontic states: {}, pre- and post-selected: {}", r.states.len(), r.candidates.len()).unwrap();
            writeln!(h, "clash:").unwrap();
            for t in &cert.clash {
                writeln!(h, "  {}/{} = {}", t.measurement, t.outcome, prob(t.value)).unwrap();
            }
            if cert.excluded_by_conditions {
                writeln!(h, "no noncontextual 0/1 assignment takes these values").unwrap();
            }
            for o in &cert.obstructions {
                let failed: Vec<String> = o
                    .contradicts
                    .iter()
                    .map(|&i| format!("{}/{}", cert.clash[i].measurement, cert.clash[i].outcome))
                    .collect();
                writeln!(h, "  {} contradicts {}", o.state, failed.join(", ")).unwrap();
            }
        }
    }
    Ok(Outcome {
        code: exit::OK,
        human: h,
        results,
    })
}

pub fn ks(a: &KsArgs, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let loaded = load_scenario(&a.scenario, inputs)?;
    let mut ps = ProjectorSet::new(loaded.scenario.dim());
    for m in &loaded.pvms {
        for (label, p) in m.outcomes() {
            ps.insert(p.clone(), Some(&format!("{}/{label}", m.name())))?;
        }
    }
    let opts = SearchOptions {
        depth: a.depth.or(loaded.options.depth).unwrap_or(DEFAULT_DEPTH),
        max_free: (a.max_free > 0).then_some(a.max_free),
    };
    let found = search_deterministic_assignments(&ps, &ValueAssignment::empty(ps.len()), opts)?;
    let base = ps.len();
    let named = |id: usize| {
        let c = &found.closure;
        let pid = crate::noncontext::ProjectorId(id);
        format!("{} ({})", c.describe(pid), c.aliases(pid).join(" = "))
    };
    let mut h = String::new();
    writeln!(
        h,
        "{} assignments over {} projectors ({} after closure)",
        found.assignments.len(),
        base,
        found.closure.len()
    )
    .unwrap();
    let mut listed = Vec::new();
    for (i, v) in found.assignments.iter().enumerate() {
        let on: Vec<usize> = (0..base).filter(|&id| v.values()[id] == Some(1.0)).collect();
        let names: Vec<String> = on.iter().map(|&id| named(id)).collect();
        writeln!(h, "  {}: {}", i + 1, names.join(", ")).unwrap();
        listed.push(v.values().iter().map(|x| x.unwrap_or(f64::NAN)).collect::<Vec<f64>>());
    }
    let projectors: Vec<_> = found
        .closure
        .ids()
        .map(|id| json!({ "id": id, "name": found.closure.describe(id), "aliases": found.closure.aliases(id) }))
        .collect();
    Ok(Outcome {
        code: exit::OK,
        human: h,
        results: json!({ "projectors": projectors, "assignments": listed }),
    })
}

pub fn toybox(a: &ToyboxArgs) -> Result<Outcome, Failure> {
    let trials = a.trials.unwrap_or(DEFAULT_TRIALS);
    let seed = a.seed.unwrap_or(0);
    let model = build_box_model()?;
    let joint = model.joint_statistics()?;
    let sampled = model.simulate_joint(trials, seed)?;
    let mut h = String::new();
    writeln!(h, "trials per procedure: {trials}, seed: {seed}").unwrap();
    writeln!(
        h,
        "{:<12} {:<9} {:>15} {:>15} {:>15} {:>15} {:>15}",
        "procedure", "outcome", "pps exact", "pps sampled", "joint exact", "joint sampled", "std error"
    )
    .unwrap();
    let mut rows = Vec::new();
    for (j, s) in joint.iter().zip(&sampled) {
        // `None` where the procedure never lets the post-selection succeed
        let exact = match model.pps_probability(j.procedure, j.outcome) {
            Ok(p) => Some(p),
            Err(crate::Error::ImpossiblePostSelection(_)) => None,
            Err(e) => return Err(e.into()),
        };
        // conditional estimate from the same runs: hits of this outcome over
        // hits of either outcome of the procedure
        let selected: u64 = sampled
            .iter()
            .filter(|x| x.procedure == j.procedure)
            .map(|x| x.estimate.hits)
            .sum();
        let conditional = (selected > 0).then(|| s.estimate.hits as f64 / selected as f64);
        writeln!(
            h,
            "{:<12} {:<9} {:>15} {:>15} {:>15} {:>15} {:>15}",
            j.procedure.name(),
            j.outcome.label(),
            exact.map_or("impossible".to_string(), prob),
            conditional.map_or("-".to_string(), prob),
            prob(j.probability),
            prob(s.estimate.estimate),
            prob(s.estimate.std_error)
        )
        .unwrap();
        rows.push(json!({
            "procedure": j.procedure.name(),
            "outcome": j.outcome.label(),
            "pps_exact": exact,
            "pps_sampled": conditional,
            "joint_exact": j.probability,
            "joint_sampled": s.estimate,
        }));
    }
    Ok(Outcome {
        code: exit::OK,
        human: h,
        results: json!({ "trials": trials, "seed": seed, "rows": rows }),
    })
}
