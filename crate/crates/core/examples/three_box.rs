//! ABL probabilities in the three-box scenario.
//!
//! Asking "is it in box 1?" and "is it in box 2?" both get the answer yes
//! with certainty, while a which-box measurement gives each box 1/3.

use ppslab::abl::abl_profile;
use ppslab::fixtures::three_box;
use ppslab::qcore::born_probability;

fn main() -> ppslab::Result<()> {
    let tb = three_box();
    let profile = abl_profile(&tb.scenario, &[tb.m.clone(), tb.n.clone(), tb.fine.clone()])?;
    for e in &profile.entries {
        let pvm = [&tb.m, &tb.n, &tb.fine][e.measurement];
        let p = e.value.probability().expect("three-box post-selection is possible");
        println!(
            "{}/{}  {:<18} {:.12}",
            e.measurement_name,
            e.outcome,
            pvm.projector(&e.outcome)?.describe(),
            p
        );
    }

    // without the post-selection the same question is a plain Born probability
    let rho = tb.scenario.pre_state()?;
    println!("Born p(|1⟩⟨1|) = {:.12}", born_probability(&rho, tb.m.projector("1")?)?);
    Ok(())
}
