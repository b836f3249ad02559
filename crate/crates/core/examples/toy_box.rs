//! The ball-in-a-box model: a classical model with measurement disturbance
//! that reproduces the three-box certainties.
//!
//! Usage: `cargo run --example toy_box [trials] [seed]`

use ppslab::hvt::check_measurement_noncontextuality;
use ppslab::toybox::{build_box_model, BoxAxis, BoxOutcome, BoxProcedure};

fn main() -> ppslab::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(100_000);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);

    let model = build_box_model()?;
    println!("μ_pre = {:?}", model.scenario.mu_pre().weights());
    for axis in [BoxAxis::Left, BoxAxis::Right] {
        let p = model.pps_probability(BoxProcedure::new(axis), BoxOutcome::Found)?;
        println!("p({} found | pre, post) = {p}", BoxProcedure::new(axis).name());
    }

    let exact = model.joint_statistics()?;
    let sampled = model.simulate_joint(trials, seed)?;
    println!("{:<12} {:<9} {:>8} {:>10} {:>8}", "procedure", "outcome", "exact", "sampled", "z");
    for (e, s) in exact.iter().zip(&sampled) {
        let z = if s.estimate.std_error > 0.0 {
            (s.estimate.estimate - e.probability) / s.estimate.std_error
        } else {
            0.0
        };
        println!(
            "{:<12} {:<9} {:>8.5} {:>10.5} {:>8.2}",
            e.procedure.name(),
            e.outcome.label(),
            e.probability,
            s.estimate.estimate,
            z
        );
    }

    // with the disturbance switched off the post-selection can never succeed
    // after a left or right check
    let frozen = model.scenario.without_disturbance()?;
    let m = frozen.measurement(BoxProcedure::new(BoxAxis::Left).name())?;
    println!("undisturbed: {:?}", ppslab::hvt::hvt_pps_probability(&frozen, m, "found"));

    let mnc = check_measurement_noncontextuality(model.scenario.measurements())?;
    println!("measurement noncontextual: {} ({} pairs)", mnc.is_noncontextual(), mnc.pairs_compared);
    Ok(())
}
