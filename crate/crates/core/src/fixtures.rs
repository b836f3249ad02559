//! Built-in scenarios.

use num_complex::Complex64;

use crate::abl::PpsScenario;
use crate::qcore::{Projector, Pvm};

/// The three-box scenario: pre-selection on `(|1⟩+|2⟩+|3⟩)/√3`,
/// post-selection on `(|1⟩+|2⟩-|3⟩)/√3`.
#[derive(Clone, Debug)]
pub struct ThreeBox {
    pub scenario: PpsScenario,
    /// `{|1⟩⟨1|, |2⟩⟨2|+|3⟩⟨3|}`: "is the particle in box 1?"
    pub m: Pvm,
    /// `{|2⟩⟨2|, |1⟩⟨1|+|3⟩⟨3|}`: "is the particle in box 2?"
    pub n: Pvm,
    /// `{|1⟩⟨1|, |2⟩⟨2|, |3⟩⟨3|}`: which box.
    pub fine: Pvm,
}

pub fn three_box() -> ThreeBox {
    let r = |x: f64| Complex64::new(x, 0.0);
    let pre = Projector::from_span(3, &[vec![r(1.0), r(1.0), r(1.0)]]).expect("pre");
    let post = Projector::from_span(3, &[vec![r(1.0), r(1.0), r(-1.0)]]).expect("post");
    let m = Pvm::from_projectors("M", vec![Projector::basis(3, 0), Projector::basis_sum(3, &[1, 2])])
        .expect("M");
    let n = Pvm::from_projectors("N", vec![Projector::basis(3, 1), Projector::basis_sum(3, &[0, 2])])
        .expect("N");
    let fine = Pvm::from_projectors("F", (0..3).map(|i| Projector::basis(3, i)).collect())
        .expect("F");
    ThreeBox {
        scenario: PpsScenario::new(pre, post).expect("scenario"),
        m,
        n,
        fine,
    }
}
