//! The same projector |1⟩⟨1| measured as part of a coarse and a fine PVM
//! gets different ABL probabilities, so a model whose response to "not 1"
//! ignores the rest of the PVM cannot reproduce both.

use ppslab::fixtures::three_box;
use ppslab::noncontext::pvm_dependence_certificate;

fn main() -> ppslab::Result<()> {
    let tb = three_box();
    let c = pvm_dependence_certificate(&tb.scenario, &tb.m, &tb.fine, "1")?;
    println!("projector {}", c.projector);
    println!("  in {}: {:.12}", c.measurement_a, c.p_a);
    println!("  in {}: {:.12}", c.measurement_b, c.p_b);
    println!("  difference {:.12}, certified: {}", c.difference, c.certified);

    let same = pvm_dependence_certificate(&tb.scenario, &tb.m, &tb.m, "1")?;
    println!("M against itself: difference {}, certified: {}", same.difference, same.certified);
    Ok(())
}
