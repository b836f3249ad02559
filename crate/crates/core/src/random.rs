//! Random unitaries, states and PVMs for randomized checks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::qcore::{CMatrix, Projector, Pvm};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Gaussian vector (not normalized).
pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    (0..dim).map(|_| gaussian(rng)).collect()
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the diagonal
/// phases of R absorbed into Q.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    CMatrix::from_inner(q)
}

/// Rank-1 projector onto a Haar-random pure state.
pub fn random_rank_one<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Projector> {
    Projector::from_span(dim, &[random_vector(dim, rng)])
}

/// PVM with outcomes spanned by a random partition of the columns of a
/// Haar unitary into `outcomes` nonempty groups (`2 <= outcomes <= dim`).
pub fn random_pvm<R: Rng + ?Sized>(
    name: &str,
    dim: usize,
    outcomes: usize,
    rng: &mut R,
) -> Result<Pvm> {
    let outcomes = outcomes.clamp(1, dim);
    let u = haar_unitary(dim, rng);
    // first `outcomes` columns seed each group, the rest are scattered
    let mut groups: Vec<Vec<usize>> = (0..outcomes).map(|i| vec![i]).collect();
    for col in outcomes..dim {
        let g = rng.random_range(0..outcomes);
        groups[g].push(col);
    }
    let projectors = groups
        .iter()
        .map(|cols| {
            let vecs: Vec<Vec<Complex64>> = cols
                .iter()
                .map(|&c| (0..dim).map(|r| u.get(r, c)).collect())
                .collect();
            Projector::from_span(dim, &vecs)
        })
        .collect::<Result<Vec<_>>>()?;
    Pvm::from_projectors(name, projectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..6 {
            let u = haar_unitary(d, &mut rng);
            let uu = &u * &u.adjoint();
            assert!(uu.approx_eq(&CMatrix::identity(d), 1e-12));
        }
    }

    #[test]
    fn random_pvm_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..6 {
            for k in 2..=d {
                let pvm = random_pvm("R", d, k, &mut rng).unwrap();
                assert_eq!(pvm.len(), k);
            }
        }
    }
}
