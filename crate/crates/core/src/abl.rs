//! Pre- and post-selected scenarios and the ABL probability rule with
//! Lüders-rule intermediate measurements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{luders_sum, CMatrix, DensityOperator, Projector, Pvm, ZERO_PROBABILITY};

/// Values within this distance of 0 or 1 are treated as exactly 0 or 1.
pub const ZERO_ONE_TOL: f64 = 1e-9;

/// Returns `Some(false)` / `Some(true)` when `p` is within `tol` of 0 / 1.
pub fn classify_zero_one(p: f64, tol: f64) -> Option<bool> {
    if p.abs() <= tol {
        Some(false)
    } else if (p - 1.0).abs() <= tol {
        Some(true)
    } else {
        None
    }
}

/// Pre-selection on `Π_pre` (applied to `I/d`) and post-selection on `Π_post`.
#[derive(Clone, Debug, PartialEq)]
pub struct PpsScenario {
    pre: Projector,
    post: Projector,
}

impl PpsScenario {
    pub fn new(pre: Projector, post: Projector) -> Result<Self> {
        if pre.dim() != post.dim() {
            return Err(Error::DimensionMismatch {
                expected: pre.dim(),
                found: post.dim(),
            });
        }
        Ok(PpsScenario { pre, post })
    }

    pub fn dim(&self) -> usize {
        self.pre.dim()
    }

    pub fn pre(&self) -> &Projector {
        &self.pre
    }

    pub fn post(&self) -> &Projector {
        &self.post
    }

    /// State right after pre-selection, `Π_pre / Tr Π_pre`.
    pub fn pre_state(&self) -> Result<DensityOperator> {
        DensityOperator::from_projector(&self.pre)
    }

    pub fn conjugate_by(&self, unitary: &CMatrix) -> Result<PpsScenario> {
        PpsScenario::new(self.pre.conjugate_by(unitary)?, self.post.conjugate_by(unitary)?)
    }

    /// ABL probability of `outcome` for the intermediate measurement `pvm`.
    pub fn abl_probability(&self, pvm: &Pvm, outcome: &str) -> Result<f64> {
        abl_probability(&AblQuery::new(self, pvm, outcome)?)
    }
}

/// One intermediate measurement outcome to evaluate within a scenario.
#[derive(Clone, Debug)]
pub struct AblQuery<'a> {
    scenario: &'a PpsScenario,
    measurement: &'a Pvm,
    outcome: usize,
}

impl<'a> AblQuery<'a> {
    pub fn new(scenario: &'a PpsScenario, measurement: &'a Pvm, outcome: &str) -> Result<Self> {
        if measurement.dim() != scenario.dim() {
            return Err(Error::DimensionMismatch {
                expected: scenario.dim(),
                found: measurement.dim(),
            });
        }
        let outcome = measurement.index_of(outcome)?;
        Ok(AblQuery {
            scenario,
            measurement,
            outcome,
        })
    }

    pub fn outcome_label(&self) -> &str {
        &self.measurement.labels()[self.outcome]
    }
}

/// Numerator and denominator of the ABL ratio, evaluated on the
/// normalized pre-selected state.
fn abl_terms(query: &AblQuery<'_>) -> Result<(f64, f64)> {
    let rho = query.scenario.pre_state()?;
    let post = query.scenario.post.matrix();
    let pvm = query.measurement;
    let k = query.outcome;
    let hit = luders_sum(rho.matrix(), pvm, std::iter::once(k));
    let miss = luders_sum(rho.matrix(), pvm, (0..pvm.len()).filter(|&j| j != k));
    let num = (post * &hit).trace().re;
    let rest = (post * &miss).trace().re;
    Ok((num, num + rest))
}

/// `Tr(Π_post E_k(Π_pre)) / [Tr(Π_post E_k(Π_pre)) + Tr(Π_post E_¬k(Π_pre))]`
/// with `E_k(ρ) = P_k ρ P_k`. Results within [`ZERO_ONE_TOL`] of 0 or 1 are
/// snapped.
pub fn abl_probability(query: &AblQuery<'_>) -> Result<f64> {
    let (num, den) = abl_terms(query)?;
    if den <= ZERO_PROBABILITY {
        return Err(Error::ImpossiblePostSelection(den));
    }
    let p = num / den;
    match classify_zero_one(p, ZERO_ONE_TOL) {
        Some(true) => Ok(1.0),
        Some(false) => Ok(0.0),
        None if (0.0..=1.0).contains(&p) => Ok(p),
        None => Err(Error::ProbabilityOutOfRange(p)),
    }
}

/// Result of one profile entry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum AblValue {
    Probability(f64),
    ImpossiblePostSelection,
}

impl AblValue {
    pub fn probability(&self) -> Option<f64> {
        match self {
            AblValue::Probability(p) => Some(*p),
            AblValue::ImpossiblePostSelection => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblEntry {
    pub measurement: usize,
    pub measurement_name: String,
    pub outcome: String,
    pub value: AblValue,
}

/// ABL probabilities for every outcome of every listed measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblProfile {
    pub entries: Vec<AblEntry>,
}

impl AblProfile {
    pub fn get(&self, measurement_name: &str, outcome: &str) -> Option<AblValue> {
        self.entries
            .iter()
            .find(|e| e.measurement_name == measurement_name && e.outcome == outcome)
            .map(|e| e.value)
    }

    pub fn all_impossible(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.value == AblValue::ImpossiblePostSelection)
    }
}

pub fn abl_profile(scenario: &PpsScenario, measurements: &[Pvm]) -> Result<AblProfile> {
    let mut entries = Vec::new();
    for (mi, pvm) in measurements.iter().enumerate() {
        for label in pvm.labels() {
            let query = AblQuery::new(scenario, pvm, label)?;
            let value = match abl_probability(&query) {
                Ok(p) => AblValue::Probability(p),
                Err(Error::ImpossiblePostSelection(_)) => AblValue::ImpossiblePostSelection,
                Err(e) => return Err(e),
            };
            entries.push(AblEntry {
                measurement: mi,
                measurement_name: pvm.name().to_string(),
                outcome: label.clone(),
                value,
            });
        }
    }
    Ok(AblProfile { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::three_box;
    use crate::qcore::born_probability;
    use crate::random::{random_pvm, random_rank_one};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force ABL with pure states: |⟨ψ|P_k|φ⟩|² over Σ_j |⟨ψ|P_j|φ⟩|².
    fn abl_pure_oracle(
        phi: &[num_complex::Complex64],
        psi: &[num_complex::Complex64],
        pvm: &Pvm,
        k: usize,
    ) -> f64 {
        let amp = |p: &Projector| -> f64 {
            let d = phi.len();
            let mut s = num_complex::Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    s += psi[i].conj() * p.matrix().get(i, j) * phi[j];
                }
            }
            s.norm_sqr()
        };
        let terms: Vec<f64> = pvm.projectors().iter().map(amp).collect();
        terms[k] / terms.iter().sum::<f64>()
    }

    #[test]
    fn three_box_values() {
        let tb = three_box();
        assert_eq!(tb.scenario.abl_probability(&tb.m, "1").unwrap(), 1.0);
        assert_eq!(tb.scenario.abl_probability(&tb.m, "2").unwrap(), 0.0);
        assert_eq!(tb.scenario.abl_probability(&tb.n, "1").unwrap(), 1.0);
        let fine = tb.scenario.abl_probability(&tb.fine, "1").unwrap();
        // each term |<psi|j><j|phi>|^2 = 1/9, ratio (1/9)/(3/9)
        assert_abs_diff_eq!(fine, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn profile_matches_oracle_on_three_box() {
        let tb = three_box();
        let prof = abl_profile(&tb.scenario, &[tb.m.clone(), tb.n.clone()]).unwrap();
        assert_eq!(prof.get("M", "1"), Some(AblValue::Probability(1.0)));
        assert_eq!(prof.get("M", "2"), Some(AblValue::Probability(0.0)));
        assert_eq!(prof.get("N", "1"), Some(AblValue::Probability(1.0)));
        assert_eq!(prof.get("N", "2"), Some(AblValue::Probability(0.0)));
        let prof = abl_profile(&tb.scenario, &[tb.fine.clone()]).unwrap();
        for e in &prof.entries {
            assert_abs_diff_eq!(e.value.probability().unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn trivial_pvm_gives_one() {
        for d in 1..5 {
            let s = PpsScenario::new(Projector::basis(d, 0), Projector::identity(d)).unwrap();
            let triv = Pvm::from_projectors("T", vec![Projector::identity(d)]).unwrap();
            let prof = abl_profile(&s, &[triv]).unwrap();
            assert_eq!(prof.entries.len(), 1);
            assert_eq!(prof.entries[0].value, AblValue::Probability(1.0));
        }
    }

    #[test]
    fn impossible_post_selection_is_recorded() {
        let s = PpsScenario::new(Projector::basis(3, 0), Projector::basis(3, 1)).unwrap();
        let m = Pvm::from_projectors("M", vec![Projector::basis(3, 0), Projector::basis_sum(3, &[1, 2])])
            .unwrap();
        assert!(matches!(
            s.abl_probability(&m, "1"),
            Err(Error::ImpossiblePostSelection(_))
        ));
        let prof = abl_profile(&s, &[m]).unwrap();
        assert!(prof.all_impossible());
    }

    #[test]
    fn label_and_dimension_errors() {
        let tb = three_box();
        assert!(matches!(
            tb.scenario.abl_probability(&tb.m, "9"),
            Err(Error::UnknownLabel(_))
        ));
        let small = Pvm::from_projectors("S", vec![Projector::identity(2)]).unwrap();
        assert!(matches!(
            tb.scenario.abl_probability(&small, "1"),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_pure_cases_match_oracle_and_time_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let d = rng.random_range(2..=5);
            let phi = crate::random::random_vector(d, &mut rng);
            let psi = crate::random::random_vector(d, &mut rng);
            let pre = Projector::from_span(d, &[phi.clone()]).unwrap();
            let post = Projector::from_span(d, &[psi.clone()]).unwrap();
            let k = rng.random_range(2..=d);
            let pvm = random_pvm("R", d, k, &mut rng).unwrap();
            let fwd = PpsScenario::new(pre.clone(), post.clone()).unwrap();
            let bwd = PpsScenario::new(post, pre).unwrap();
            for (j, label) in pvm.labels().iter().enumerate() {
                let p = fwd.abl_probability(&pvm, label).unwrap();
                assert_abs_diff_eq!(p, abl_pure_oracle(&phi, &psi, &pvm, j), epsilon = 1e-9);
                assert_abs_diff_eq!(p, bwd.abl_probability(&pvm, label).unwrap(), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn born_reduction_on_random_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let d = rng.random_range(2..=5);
            let pre = random_rank_one(d, &mut rng).unwrap();
            let s = PpsScenario::new(pre.clone(), Projector::identity(d)).unwrap();
            let pvm = random_pvm("R", d, rng.random_range(2..=d), &mut rng).unwrap();
            let rho = DensityOperator::from_projector(&pre).unwrap();
            for (label, p) in pvm.outcomes() {
                let born = born_probability(&rho, p).unwrap();
                assert_abs_diff_eq!(s.abl_probability(&pvm, label).unwrap(), born, epsilon = 1e-9);
            }
        }
    }
}
