use super::*;
use crate::abl::PpsScenario;
use crate::fixtures::three_box;
use crate::qcore::{CMatrix, Projector, Pvm};
use crate::random::{haar_unitary, random_pvm, random_rank_one};
use crate::toybox::{build_box_model, BoxAxis, BoxProcedure};
use crate::Error;
use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn set_of(dim: usize, ps: &[Projector]) -> ProjectorSet {
    let mut out = ProjectorSet::new(dim);
    for p in ps {
        out.insert(p.clone(), None).unwrap();
    }
    out
}

fn column(u: &CMatrix, c: usize) -> Vec<Complex64> {
    (0..u.dim()).map(|r| u.get(r, c)).collect()
}

fn span_of(u: &CMatrix, cols: std::ops::Range<usize>) -> Projector {
    let vecs: Vec<_> = cols.map(|c| column(u, c)).collect();
    Projector::from_span(u.dim(), &vecs).unwrap()
}

#[test]
fn closure_of_two_basis_projectors() {
    let ps = set_of(3, &[Projector::basis(3, 0), Projector::basis(3, 1)]);
    let c = closure(&ps, 1);
    for p in [
        Projector::zero(3),
        Projector::identity(3),
        Projector::basis_sum(3, &[0, 1]),
        Projector::basis_sum(3, &[1, 2]),
        Projector::basis_sum(3, &[0, 2]),
    ] {
        assert!(c.find(&p).is_some(), "missing {}", p.describe());
    }
    // identities of the input keep their numbers
    assert_eq!(c.find(&Projector::basis(3, 0)), Some(ProjectorId(0)));
    assert_eq!(c.find(&Projector::basis(3, 1)), Some(ProjectorId(1)));
}

#[test]
fn closure_of_three_box_contexts() {
    let tb = three_box();
    let ps = set_of(3, &[tb.m.projectors(), tb.n.projectors()].concat());
    assert_eq!(ps.len(), 4);
    let c = closure(&ps, 2);
    assert!(c.find(&Projector::basis(3, 2)).is_some());
    assert!(c.find(&Projector::basis_sum(3, &[0, 1])).is_some());
}

#[test]
fn closure_of_empty_set() {
    let c = closure(&ProjectorSet::new(2), 3);
    assert_eq!(c.len(), 2);
    assert!(c.find(&Projector::identity(2)).is_some());
    assert!(c.find(&Projector::zero(2)).is_some());
}

#[test]
fn unification_uses_canonical_representative() {
    let mut ps = ProjectorSet::new(2);
    let a = ps.insert(Projector::basis(2, 0), Some("x")).unwrap();
    let b = ps.insert(Projector::basis(2, 0), Some("y")).unwrap();
    assert_eq!(a, b);
    assert_eq!(ps.aliases(a), ["x", "y"]);
    assert!(matches!(
        ps.insert(Projector::basis(3, 0), None),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn both_orthogonal_projectors_true_is_violation() {
    let ps = closure(&set_of(3, &[Projector::basis(3, 0), Projector::basis(3, 1)]), 1);
    let mut v = ValueAssignment::empty(ps.len());
    v.set(ProjectorId(0), 1.0);
    v.set(ProjectorId(1), 1.0);
    let derived = derive_forced_values(&ps, &mut v);
    let join = ps.find(&Projector::basis_sum(3, &[0, 1])).unwrap();
    assert!(derived.iter().any(|d| d.id == join && d.value == 2.0));
    let report = check_algebraic_conditions(&ps, &v);
    assert!(report
        .violations
        .iter()
        .any(|x| x.condition == ConditionId::Ac0 && x.witnesses == [join] && x.lhs == 2.0));
}

#[test]
fn unit_assigned_zero_violates_ac2() {
    let ps = set_of(2, &[Projector::identity(2)]);
    let mut v = ValueAssignment::empty(1);
    v.set(ProjectorId(0), 0.0);
    let report = check_algebraic_conditions(&ps, &v);
    assert!(report.violations.iter().any(|x| x.condition == ConditionId::Ac2));
}

#[test]
fn one_hot_on_a_pvm_is_consistent() {
    let ps = closure(&set_of(3, &(0..3).map(|i| Projector::basis(3, i)).collect::<Vec<_>>()), 2);
    for hot in 0..3 {
        let mut v = ValueAssignment::empty(ps.len());
        for i in 0..3 {
            v.set(ProjectorId(i), if i == hot { 1.0 } else { 0.0 });
        }
        derive_forced_values(&ps, &mut v);
        let report = check_algebraic_conditions(&ps, &v);
        assert!(report.is_consistent(), "{:?}", report.violations);
        assert_eq!(report.skipped, 0);
    }
}

#[test]
fn partial_assignment_skips_and_counts() {
    let ps = closure(&set_of(2, &[Projector::basis(2, 0)]), 1);
    let v = ValueAssignment::empty(ps.len());
    let report = check_algebraic_conditions(&ps, &v);
    assert_eq!(report.evaluated, 0);
    assert!(report.skipped > 0);
}

#[test]
fn rank_one_pvm_has_three_assignments() {
    let ps = set_of(3, &(0..3).map(|i| Projector::basis(3, i)).collect::<Vec<_>>());
    let found = search_deterministic_assignments(&ps, &ValueAssignment::empty(3), SearchOptions::default()).unwrap();
    assert_eq!(found.assignments.len(), 3);
    for a in &found.assignments {
        let hot: Vec<f64> = (0..3).map(|i| a.get(ProjectorId(i)).unwrap()).collect();
        assert_eq!(hot.iter().sum::<f64>(), 1.0);
    }
    // lexicographic: 0 before 1 on the lowest identity
    assert_eq!(found.assignments[0].get(ProjectorId(0)), Some(0.0));
    assert_eq!(found.assignments[2].get(ProjectorId(0)), Some(1.0));
}

#[test]
fn three_box_fixed_certainties_have_no_completion() {
    let tb = three_box();
    let ps = set_of(3, &[tb.m.projectors(), tb.n.projectors()].concat());
    let mut fixed = ValueAssignment::empty(4);
    fixed.set(ps.find(&Projector::basis(3, 0)).unwrap(), 1.0);
    fixed.set(ps.find(&Projector::basis(3, 1)).unwrap(), 1.0);
    let found = search_deterministic_assignments(&ps, &fixed, SearchOptions::default()).unwrap();
    assert!(found.assignments.is_empty());
    let free = search_deterministic_assignments(&ps, &ValueAssignment::empty(4), SearchOptions::default()).unwrap();
    assert_eq!(free.assignments.len(), 3);
}

#[test]
fn search_refuses_large_spaces() {
    let tb = three_box();
    let ps = set_of(3, &[tb.m.projectors(), tb.n.projectors()].concat());
    let opts = SearchOptions {
        depth: 2,
        max_free: Some(3),
    };
    assert!(matches!(
        search_deterministic_assignments(&ps, &ValueAssignment::empty(4), opts),
        Err(Error::SearchSpaceTooLarge { cap: 3, .. })
    ));
}

#[test]
fn three_box_is_a_logical_paradox() {
    let tb = three_box();
    let report = detect_logical_paradox(&tb.scenario, &[tb.m.clone(), tb.n.clone()], ParadoxConfig::default()).unwrap();
    assert_eq!(report.verdict, Verdict::LogicalParadox);
    assert_eq!(report.certain.len(), 4);
    let named = report.violations.iter().any(|v| {
        let names = report.witness_names(v);
        matches!(v.condition, ConditionId::Ac0 | ConditionId::Ac4)
            && names.contains(&"|1⟩⟨1|")
            && names.contains(&"|2⟩⟨2|")
    });
    assert!(named, "{:#?}", report.violations);
}

#[test]
fn selected_state_measured_in_its_own_basis_is_consistent() {
    let pre = Projector::basis(3, 0);
    let scenario = PpsScenario::new(pre.clone(), pre.clone()).unwrap();
    let m = Pvm::from_projectors("M", vec![pre.clone(), pre.complement()]).unwrap();
    let report = detect_logical_paradox(&scenario, &[m], ParadoxConfig::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Consistent);
    assert!(report.violations.is_empty());
}

#[test]
fn interior_profile_is_inconclusive() {
    let tb = three_box();
    let report = detect_logical_paradox(&tb.scenario, &[tb.fine.clone()], ParadoxConfig::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Inconclusive);
    assert!(report.certain.is_empty());
}

#[test]
fn impossible_everywhere_is_an_error() {
    let scenario = PpsScenario::new(Projector::basis(3, 0), Projector::basis(3, 1)).unwrap();
    let tb = three_box();
    assert!(matches!(
        detect_logical_paradox(&scenario, &[tb.m], ParadoxConfig::default()),
        Err(Error::ImpossiblePostSelection(_))
    ));
}

#[test]
fn selection_projectors_can_be_included() {
    let tb = three_box();
    let config = ParadoxConfig {
        include_selection_projectors: true,
        ..ParadoxConfig::default()
    };
    let report = detect_logical_paradox(&tb.scenario, &[tb.m, tb.n], config).unwrap();
    assert_eq!(report.verdict, Verdict::LogicalParadox);
    assert!(report.projectors.iter().any(|p| p.aliases.contains(&"pre".to_string())));
}

#[test]
fn verdict_ignores_measurement_order() {
    let tb = three_box();
    let cfg = ParadoxConfig::default();
    let orders = [
        vec![tb.m.clone(), tb.n.clone()],
        vec![tb.n.clone(), tb.m.clone()],
        vec![tb.fine.clone(), tb.n.clone(), tb.m.clone()],
        vec![tb.m.clone(), tb.fine.clone(), tb.n.clone()],
    ];
    for ms in &orders {
        assert_eq!(detect_logical_paradox(&tb.scenario, ms, cfg).unwrap().verdict, Verdict::LogicalParadox);
    }
}

#[test]
fn verdict_survives_unitary_conjugation() {
    let tb = three_box();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let u = haar_unitary(3, &mut rng);
        let s = tb.scenario.conjugate_by(&u).unwrap();
        let paradox = [tb.m.conjugate_by(&u).unwrap(), tb.n.conjugate_by(&u).unwrap()];
        let fine = [tb.fine.conjugate_by(&u).unwrap()];
        let cfg = ParadoxConfig::default();
        assert_eq!(detect_logical_paradox(&s, &paradox, cfg).unwrap().verdict, Verdict::LogicalParadox);
        assert_eq!(detect_logical_paradox(&s, &fine, cfg).unwrap().verdict, Verdict::Inconclusive);
    }
}

#[test]
fn single_contexts_never_violate() {
    let tb = three_box();
    for m in [&tb.m, &tb.n, &tb.fine] {
        let r = detect_logical_paradox(&tb.scenario, std::slice::from_ref(m), ParadoxConfig::default()).unwrap();
        assert_ne!(r.verdict, Verdict::LogicalParadox, "{}", m.name());
    }
    // random contexts containing the pre-selected ray, so certainties occur
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let d = rng.random_range(2..=4);
        let u = haar_unitary(d, &mut rng);
        let pre = span_of(&u, 0..1);
        let post = random_rank_one(d, &mut rng).unwrap();
        let Ok(scenario) = PpsScenario::new(pre.clone(), post) else { continue };
        let m = Pvm::from_projectors("M", vec![pre, span_of(&u, 1..d)]).unwrap();
        let r = detect_logical_paradox(&scenario, &[m], ParadoxConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
    }
}

#[test]
fn coarse_and_fine_contexts_differ_by_two_thirds() {
    let tb = three_box();
    let c = pvm_dependence_certificate(&tb.scenario, &tb.m, &tb.fine, "1").unwrap();
    assert_abs_diff_eq!(c.p_a, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(c.p_b, 1.0 / 3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(c.difference, 2.0 / 3.0, epsilon = 1e-9);
    assert!(c.certified);
    assert_eq!(c.projector, "|1⟩⟨1|");
}

#[test]
fn same_context_gives_no_certificate() {
    let tb = three_box();
    let c = pvm_dependence_certificate(&tb.scenario, &tb.m, &tb.m, "1").unwrap();
    assert_eq!(c.difference, 0.0);
    assert!(!c.certified);
}

#[test]
fn mismatched_shared_projector_is_rejected() {
    let tb = three_box();
    assert!(matches!(
        pvm_dependence_certificate(&tb.scenario, &tb.m, &tb.n, "1"),
        Err(Error::SharedProjectorMismatch(_))
    ));
}

#[test]
fn no_post_selection_means_no_context_dependence() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..60 {
        let d = rng.random_range(3..=5);
        let u = haar_unitary(d, &mut rng);
        let pre = random_rank_one(d, &mut rng).unwrap();
        let scenario = PpsScenario::new(pre, Projector::identity(d)).unwrap();
        let coarse = Pvm::from_projectors("A", vec![span_of(&u, 0..1), span_of(&u, 1..d)]).unwrap();
        let fine = Pvm::from_projectors("B", vec![span_of(&u, 0..1), span_of(&u, 1..2), span_of(&u, 2..d)]).unwrap();
        let c = pvm_dependence_certificate(&scenario, &coarse, &fine, "1").unwrap();
        assert!(c.difference <= 1e-9, "{}", c.difference);
        assert!(!c.certified);
    }
}

#[test]
fn three_box_needs_disturbance() {
    let tb = three_box();
    let report = disturbance_necessity_search(&tb.scenario, &[tb.m, tb.n], DisturbanceOptions::default()).unwrap();
    assert_eq!(report.targets.len(), 4);
    assert!(report.states.len() <= DEFAULT_MAX_ONTIC);
    let Feasibility::Infeasible(cert) = &report.result else {
        panic!("expected infeasible")
    };
    let clash: Vec<(&str, &str, f64)> = cert
        .clash
        .iter()
        .map(|t| (t.measurement.as_str(), t.outcome.as_str(), t.value))
        .collect();
    assert_eq!(clash, [("M", "1", 1.0), ("N", "1", 1.0)]);
    assert!(cert.excluded_by_conditions);
    assert!(!cert.obstructions.is_empty());
    assert!(cert.obstructions.iter().all(|o| !o.contradicts.is_empty()));
}

#[test]
fn single_context_is_reproducible_without_disturbance() {
    let tb = three_box();
    for m in [tb.m, tb.n, tb.fine] {
        let name = m.name().to_string();
        let report = disturbance_necessity_search(&tb.scenario, &[m], DisturbanceOptions::default()).unwrap();
        let Feasibility::Feasible(model) = &report.result else {
            panic!("{name} should be feasible")
        };
        assert!(model.checks.iter().all(|c| c.deviation <= 1e-9));
        assert_abs_diff_eq!(model.support.iter().map(|s| s.1).sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn ontic_cap_is_enforced() {
    let tb = three_box();
    let opts = DisturbanceOptions {
        max_ontic: 2,
        ..DisturbanceOptions::default()
    };
    assert!(matches!(
        disturbance_necessity_search(&tb.scenario, &[tb.m, tb.n], opts),
        Err(Error::OnticCapExceeded { cap: 2, .. })
    ));
}

#[test]
fn toy_box_reproduces_its_own_certainties() {
    let model = build_box_model().unwrap();
    let targets: Vec<AblTarget> = [BoxAxis::Left, BoxAxis::Right]
        .iter()
        .map(|&axis| AblTarget {
            measurement: BoxProcedure::new(axis).name().to_string(),
            outcome: "found".to_string(),
            value: 1.0,
        })
        .collect();
    let checks = verify_hvt_targets(&model.scenario, &targets).unwrap();
    assert!(checks.iter().all(|c| c.deviation <= 1e-12));
}

#[test]
fn feasible_models_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut feasible = 0;
    for i in 0..40 {
        let d = rng.random_range(2..=3);
        let u = haar_unitary(d, &mut rng);
        let pre = span_of(&u, 0..1);
        let post = random_rank_one(d, &mut rng).unwrap();
        let Ok(scenario) = PpsScenario::new(pre.clone(), post) else { continue };
        let m = if i % 2 == 0 {
            Pvm::from_projectors("M", vec![pre, span_of(&u, 1..d)]).unwrap()
        } else {
            random_pvm("M", d, 2, &mut rng).unwrap()
        };
        let report = disturbance_necessity_search(&scenario, &[m], DisturbanceOptions::default()).unwrap();
        if let Feasibility::Feasible(model) = &report.result {
            feasible += 1;
            let recheck = verify_hvt_targets(&model.model, &report.targets).unwrap();
            assert!(recheck.iter().all(|c| c.deviation <= 1e-9));
        }
    }
    assert!(feasible > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn searched_assignments_satisfy_conditions(seed in any::<u64>(), d in 2usize..=4, k in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_pvm("A", d, k.min(d), &mut rng).unwrap();
        let mut projectors = a.projectors().to_vec();
        if d == 4 {
            // a second context sharing the first outcome
            projectors.push(a.projectors()[0].complement());
        }
        let ps = set_of(d, &projectors);
        let found = search_deterministic_assignments(&ps, &ValueAssignment::empty(ps.len()), SearchOptions::default()).unwrap();
        prop_assert!(!found.assignments.is_empty());
        for v in &found.assignments {
            prop_assert!(v.is_complete());
            prop_assert!(check_algebraic_conditions(&found.closure, v).is_consistent());
        }
    }
}
