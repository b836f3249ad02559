//! Finite-dimensional quantum states, projectors, PVMs and Lüders-rule
//! measurement maps.
//!
//! All values are validated on construction and immutable afterwards.
//! Construction tolerances are [`CONSTRUCTION_TOL`]; identities derived
//! from valid inputs are expected to hold within [`IDENTITY_TOL`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used to validate projectors, PVMs and density operators.
pub const CONSTRUCTION_TOL: f64 = 1e-10;
/// Tolerance for identities that follow from valid inputs.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Probabilities at or below this are treated as exactly zero.
pub const ZERO_PROBABILITY: f64 = 1e-12;
/// Minimum relative residual accepted by the span constructor.
pub const SPAN_PIVOT: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<Complex64>);

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix(DMatrix::from_element(dim, dim, ZERO))
    }

    pub fn identity(dim: usize) -> Self {
        CMatrix(DMatrix::identity(dim, dim))
    }

    /// Builds a matrix from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
        }
        Ok(CMatrix(DMatrix::from_fn(dim, dim, |i, j| rows[i][j])))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        CMatrix(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    /// `|v⟩⟨v|` for the given (not necessarily normalized) vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        CMatrix(DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub(crate) fn from_inner(m: DMatrix<Complex64>) -> Self {
        CMatrix(m)
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        CMatrix(self.0.map(|z| z * s))
    }

    /// Largest entry modulus, `‖A‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        (self - other).max_abs()
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.dim() == other.dim() && self.max_abs_diff(other) <= tol
    }

    pub fn commutator(&self, other: &CMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, unitary: &CMatrix) -> Self {
        &(unitary * self) * &unitary.adjoint()
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.0 + self.0.adjoint()).map(|z| z * 0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    fn check_same_dim(&self, other: &CMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

/// Hermitian idempotent operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    matrix: CMatrix,
}

impl Projector {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        if herm > CONSTRUCTION_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let idem = (&matrix * &matrix).max_abs_diff(&matrix);
        if idem > CONSTRUCTION_TOL {
            return Err(Error::NotIdempotent(idem));
        }
        Ok(Projector { matrix })
    }

    /// Projector onto the span of `vectors`, orthonormalized with modified
    /// Gram-Schmidt plus one reorthogonalization pass. An empty span gives
    /// the zero projector.
    pub fn from_span(dim: usize, vectors: &[Vec<Complex64>]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let basis = orthonormalize(dim, vectors)?;
        let mut m = CMatrix::zeros(dim);
        for e in &basis {
            m = &m + &CMatrix::outer(e);
        }
        Projector::new(m)
    }

    /// Rank-1 projector onto computational basis state `index` (0-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        Self::basis_sum(dim, &[index])
    }

    /// Diagonal projector onto the given computational basis states.
    pub fn basis_sum(dim: usize, indices: &[usize]) -> Self {
        let mut diag = vec![0.0; dim];
        for &i in indices {
            diag[i] = 1.0;
        }
        Projector {
            matrix: CMatrix::from_real_diagonal(&diag),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projector {
            matrix: CMatrix::identity(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Projector {
            matrix: CMatrix::zeros(dim),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.max_abs() <= CONSTRUCTION_TOL
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .approx_eq(&CMatrix::identity(self.dim()), CONSTRUCTION_TOL)
    }

    /// `I - P`.
    pub fn complement(&self) -> Self {
        Projector {
            matrix: &CMatrix::identity(self.dim()) - &self.matrix,
        }
    }

    pub fn approx_eq(&self, other: &Projector, tol: f64) -> bool {
        self.matrix.approx_eq(&other.matrix, tol)
    }

    pub fn commutes_with(&self, other: &Projector, tol: f64) -> bool {
        self.dim() == other.dim() && self.matrix.commutator(&other.matrix).max_abs() <= tol
    }

    /// `PQ` for commuting projectors, revalidated as a projector.
    pub fn meet(&self, other: &Projector) -> Result<Projector> {
        self.matrix.check_same_dim(&other.matrix)?;
        Projector::new(symmetrize(&(&self.matrix * &other.matrix)))
    }

    /// `P + Q - PQ` for commuting projectors, revalidated as a projector.
    pub fn join(&self, other: &Projector) -> Result<Projector> {
        self.matrix.check_same_dim(&other.matrix)?;
        let pq = &self.matrix * &other.matrix;
        Projector::new(symmetrize(&(&(&self.matrix + &other.matrix) - &pq)))
    }

    /// `U P U†`.
    pub fn conjugate_by(&self, unitary: &CMatrix) -> Result<Projector> {
        self.matrix.check_same_dim(unitary)?;
        Projector::new(symmetrize(&self.matrix.conjugate_by(unitary)))
    }

    /// Short human-readable name. Diagonal 0/1 projectors are written in
    /// 1-based ket notation, e.g. `|1⟩⟨1|+|3⟩⟨3|`.
    pub fn describe(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if self.is_identity() {
            return "I".into();
        }
        let d = self.dim();
        let mut kets = Vec::new();
        let mut diagonal01 = true;
        'outer: for i in 0..d {
            for j in 0..d {
                let z = self.matrix.get(i, j);
                let want = if i == j {
                    if (z - ONE).norm() <= CONSTRUCTION_TOL {
                        kets.push(format!("|{}⟩⟨{}|", i + 1, i + 1));
                        continue;
                    }
                    ZERO
                } else {
                    ZERO
                };
                if (z - want).norm() > CONSTRUCTION_TOL {
                    diagonal01 = false;
                    break 'outer;
                }
            }
        }
        if diagonal01 {
            return kets.join("+");
        }
        if self.rank() == 1 {
            // Column with the largest diagonal entry, phase fixed so the
            // leading component is real and positive.
            let k = (0..d)
                .max_by(|&a, &b| self.matrix.get(a, a).re.total_cmp(&self.matrix.get(b, b).re))
                .unwrap_or(0);
            let norm = self.matrix.get(k, k).re.sqrt();
            let v: Vec<Complex64> = (0..d).map(|i| self.matrix.get(i, k) / norm).collect();
            return format!("|{}⟩⟨·|", format_vector(&v));
        }
        format!("P[rank {}]", self.rank())
    }
}

impl fmt::Display for Projector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn format_vector(v: &[Complex64]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|z| {
            if z.im.abs() <= 1e-12 {
                format!("{:.4}", z.re)
            } else {
                format!("{:.4}{:+.4}i", z.re, z.im)
            }
        })
        .collect();
    format!("({})", parts.join(", "))
}

/// Removes the anti-Hermitian rounding residue left by products.
fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + &m.adjoint()).scale(0.5)
}

fn orthonormalize(dim: usize, vectors: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let original = norm(v);
        let mut w = v.clone();
        for _pass in 0..2 {
            for e in &basis {
                let c = inner(e, &w);
                for (wi, ei) in w.iter_mut().zip(e) {
                    *wi -= c * ei;
                }
            }
        }
        let residual = norm(&w);
        let pivot = if original > 0.0 {
            residual / original
        } else {
            0.0
        };
        if pivot < SPAN_PIVOT {
            return Err(Error::RankDeficient(pivot));
        }
        basis.push(w.into_iter().map(|z| z / residual).collect());
    }
    Ok(basis)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Projector-valued measure: labelled, mutually orthogonal projectors
/// summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Pvm {
    name: String,
    labels: Vec<String>,
    projectors: Vec<Projector>,
}

impl Pvm {
    pub fn new(name: impl Into<String>, outcomes: Vec<(String, Projector)>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::Invalid("a PVM needs at least one outcome".into()));
        }
        let dim = outcomes[0].1.dim();
        let mut labels = Vec::with_capacity(outcomes.len());
        let mut projectors = Vec::with_capacity(outcomes.len());
        for (label, p) in outcomes {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if labels.contains(&label) {
                return Err(Error::DuplicateLabel(label));
            }
            labels.push(label);
            projectors.push(p);
        }
        let mut sum = CMatrix::zeros(dim);
        for p in &projectors {
            sum = &sum + p.matrix();
        }
        let dev = sum.max_abs_diff(&CMatrix::identity(dim));
        if dev > CONSTRUCTION_TOL {
            return Err(Error::Incomplete(dev));
        }
        for i in 0..projectors.len() {
            for j in (i + 1)..projectors.len() {
                let dev = (projectors[i].matrix() * projectors[j].matrix()).max_abs();
                if dev > CONSTRUCTION_TOL {
                    return Err(Error::NotOrthogonal {
                        first: i,
                        second: j,
                        deviation: dev,
                    });
                }
            }
        }
        Ok(Pvm {
            name: name.into(),
            labels,
            projectors,
        })
    }

    /// PVM with outcome labels `"1"`, `"2"`, ... in order.
    pub fn from_projectors(name: impl Into<String>, projectors: Vec<Projector>) -> Result<Self> {
        let outcomes = projectors
            .into_iter()
            .enumerate()
            .map(|(i, p)| ((i + 1).to_string(), p))
            .collect();
        Pvm::new(name, outcomes)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn outcomes(&self) -> impl Iterator<Item = (&str, &Projector)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.projectors.iter())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn projector(&self, label: &str) -> Result<&Projector> {
        Ok(&self.projectors[self.index_of(label)?])
    }

    /// Same labels and name, every projector conjugated by `unitary`.
    pub fn conjugate_by(&self, unitary: &CMatrix) -> Result<Pvm> {
        let outcomes = self
            .outcomes()
            .map(|(l, p)| Ok((l.to_string(), p.conjugate_by(unitary)?)))
            .collect::<Result<Vec<_>>>()?;
        Pvm::new(self.name.clone(), outcomes)
    }
}

/// Positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        if herm > CONSTRUCTION_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::BadTrace(tr));
        }
        let min = matrix.hermitian_eigenvalues()[0];
        if min < -CONSTRUCTION_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(DensityOperator { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            matrix: CMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn pure(v: &[Complex64]) -> Result<Self> {
        let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v.is_empty() || n2 <= ZERO_PROBABILITY {
            return Err(Error::Invalid("pure state needs a nonzero vector".into()));
        }
        DensityOperator::new(CMatrix::outer(v).scale(1.0 / n2))
    }

    /// `Π / Tr Π`, the state after Lüders pre-selection of `I/d` on `Π`.
    pub fn from_projector(p: &Projector) -> Result<Self> {
        let tr = p.matrix().trace().re;
        if tr <= ZERO_PROBABILITY {
            return Err(Error::ZeroProbability(tr));
        }
        DensityOperator::new(p.matrix().scale(1.0 / tr))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// Clamps `value` onto `[0, 1]` when within `tol` of the interval,
/// erroring otherwise.
pub fn clamp_probability(value: f64, tol: f64) -> Result<f64> {
    if !value.is_finite() || value < -tol || value > 1.0 + tol {
        return Err(Error::ProbabilityOutOfRange(value));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Born rule, `Tr(P ρ)`.
pub fn born_probability(rho: &DensityOperator, p: &Projector) -> Result<f64> {
    check_dims(rho.dim(), p.dim())?;
    let value = (p.matrix() * rho.matrix()).trace().re;
    clamp_probability(value, CONSTRUCTION_TOL)
}

/// Lüders rule, `PρP / Tr(PρP)`.
pub fn luders_update(rho: &DensityOperator, p: &Projector) -> Result<DensityOperator> {
    check_dims(rho.dim(), p.dim())?;
    let sigma = symmetrize(&(&(p.matrix() * rho.matrix()) * p.matrix()));
    let tr = sigma.trace().re;
    if tr <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(tr));
    }
    DensityOperator::new(sigma.scale(1.0 / tr))
}

/// `Σ_{j ∈ subset} P_j A P_j` over the named outcomes of `pvm`.
///
/// `operator` may be unnormalized. Repeated labels count once.
pub fn cp_map_apply(operator: &CMatrix, pvm: &Pvm, subset: &[&str]) -> Result<CMatrix> {
    check_dims(pvm.dim(), operator.dim())?;
    let indices = subset
        .iter()
        .map(|l| pvm.index_of(l))
        .collect::<Result<BTreeSet<_>>>()?;
    Ok(luders_sum(operator, pvm, indices.into_iter()))
}

pub(crate) fn luders_sum(
    operator: &CMatrix,
    pvm: &Pvm,
    indices: impl Iterator<Item = usize>,
) -> CMatrix {
    let mut out = CMatrix::zeros(operator.dim());
    for i in indices {
        let p = pvm.projectors()[i].matrix();
        out = &out + &(&(p * operator) * p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn phi() -> Vec<Complex64> {
        vec![c(1.0), c(1.0), c(1.0)]
    }

    #[test]
    fn born_on_maximally_mixed() {
        let rho = DensityOperator::maximally_mixed(3);
        let p = Projector::basis(3, 0);
        assert_abs_diff_eq!(born_probability(&rho, &p).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn born_on_uniform_superposition() {
        let rho = DensityOperator::pure(&phi()).unwrap();
        // |<1|phi>|^2 computed directly from the amplitude 1/sqrt(3).
        let amp = 1.0 / 3f64.sqrt();
        let p = Projector::basis(3, 0);
        assert_abs_diff_eq!(born_probability(&rho, &p).unwrap(), amp * amp, epsilon = 1e-12);
        assert_eq!(born_probability(&rho, &Projector::identity(3)).unwrap(), 1.0);
    }

    #[test]
    fn born_rejects_dimension_mismatch() {
        let rho = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            born_probability(&rho, &Projector::basis(3, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn luders_examples() {
        let rho = DensityOperator::maximally_mixed(3);
        let p1 = Projector::basis(3, 0);
        let out = luders_update(&rho, &p1).unwrap();
        assert!(out.matrix().approx_eq(p1.matrix(), 1e-12));

        let rho = DensityOperator::pure(&phi()).unwrap();
        let p23 = Projector::basis_sum(3, &[1, 2]);
        let out = luders_update(&rho, &p23).unwrap();
        let v = DensityOperator::pure(&[c(0.0), c(1.0), c(1.0)]).unwrap();
        assert!(out.matrix().approx_eq(v.matrix(), 1e-12));

        let rho = DensityOperator::pure(&[c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!(matches!(
            luders_update(&rho, &Projector::basis(3, 1)),
            Err(Error::ZeroProbability(_))
        ));
    }

    #[test]
    fn cp_map_examples() {
        let fine = Pvm::from_projectors(
            "F",
            (0..3).map(|i| Projector::basis(3, i)).collect(),
        )
        .unwrap();
        let rho = DensityOperator::maximally_mixed(3);
        let all = cp_map_apply(rho.matrix(), &fine, &["1", "2", "3"]).unwrap();
        assert_abs_diff_eq!(all.trace().re, 1.0, epsilon = 1e-12);
        let none = cp_map_apply(rho.matrix(), &fine, &[]).unwrap();
        assert_eq!(none.max_abs(), 0.0);

        let m = Pvm::from_projectors(
            "M",
            vec![Projector::basis(3, 0), Projector::basis_sum(3, &[1, 2])],
        )
        .unwrap();
        let rho = DensityOperator::pure(&phi()).unwrap();
        let out = cp_map_apply(rho.matrix(), &m, &["2"]).unwrap();
        // P2 phi = (0,1,1)/sqrt3, so the result is |v><v| * 2/3 with v = (0,1,1)/sqrt2.
        let expected = DensityOperator::pure(&[c(0.0), c(1.0), c(1.0)])
            .unwrap()
            .matrix()
            .scale(2.0 / 3.0);
        assert!(out.approx_eq(&expected, 1e-12));
        assert!(matches!(
            cp_map_apply(rho.matrix(), &m, &["7"]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn span_constructor_orthonormalizes_and_rejects_dependence() {
        let p = Projector::from_span(3, &[vec![c(1.0), c(1.0), c(0.0)], vec![c(1.0), c(0.0), c(0.0)]])
            .unwrap();
        assert!(p.approx_eq(&Projector::basis_sum(3, &[0, 1]), 1e-12));
        let err = Projector::from_span(3, &[vec![c(1.0), c(1.0), c(0.0)], vec![c(2.0), c(2.0), c(0.0)]]);
        assert!(matches!(err, Err(Error::RankDeficient(_))));
        assert!(Projector::from_span(3, &[]).unwrap().is_zero());
    }

    #[test]
    fn validation_rejects_perturbations() {
        let mut rows = Projector::basis(3, 0).matrix().rows();
        rows[0][0] += c(1e-6);
        let perturbed = CMatrix::from_rows(&rows).unwrap();
        assert!(matches!(Projector::new(perturbed), Err(Error::NotIdempotent(_))));

        let mut rows = Projector::basis(3, 0).matrix().rows();
        rows[0][1] = Complex64::new(0.0, 1e-6);
        let perturbed = CMatrix::from_rows(&rows).unwrap();
        assert!(matches!(Projector::new(perturbed), Err(Error::NotHermitian(_))));

        let incomplete = Pvm::from_projectors("X", vec![Projector::basis(2, 0)]);
        assert!(matches!(incomplete, Err(Error::Incomplete(_))));
        let overlap = Pvm::from_projectors(
            "Y",
            vec![Projector::basis(2, 0), Projector::basis(2, 0), Projector::zero(2)],
        );
        assert!(overlap.is_err());
    }

    #[test]
    fn density_validation() {
        assert!(matches!(
            DensityOperator::new(CMatrix::identity(2)),
            Err(Error::BadTrace(_))
        ));
        let neg = CMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityOperator::new(neg), Err(Error::NotPositive(_))));
    }

    #[test]
    fn describe_names() {
        assert_eq!(Projector::basis(3, 0).describe(), "|1⟩⟨1|");
        assert_eq!(Projector::basis_sum(3, &[0, 2]).describe(), "|1⟩⟨1|+|3⟩⟨3|");
        assert_eq!(Projector::identity(3).describe(), "I");
        assert_eq!(Projector::zero(3).describe(), "0");
        let p = Projector::from_span(2, &[vec![c(1.0), c(1.0)]]).unwrap();
        assert_eq!(p.describe(), "|(0.7071, 0.7071)⟩⟨·|");
    }
}
