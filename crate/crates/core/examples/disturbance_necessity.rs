//! Searches for a hidden-variable model without disturbance that reproduces
//! the certain ABL values: none exists for both three-box contexts together,
//! one does for each context alone.

use ppslab::fixtures::three_box;
use ppslab::hvt::hvt_pps_probability;
use ppslab::noncontext::{disturbance_necessity_search, DisturbanceOptions, Feasibility};

fn main() -> ppslab::Result<()> {
    let tb = three_box();
    let opts = DisturbanceOptions::default();

    let r = disturbance_necessity_search(&tb.scenario, &[tb.m.clone(), tb.n.clone()], opts)?;
    println!("[M, N]: {} ontic states, {} supports tried", r.states.len(), r.supports_tried);
    if let Feasibility::Infeasible(cert) = &r.result {
        for t in &cert.clash {
            println!("  clash: {}/{} = {}", t.measurement, t.outcome, t.value);
        }
        println!("  excluded by the algebraic conditions: {}", cert.excluded_by_conditions);
    }

    for pvm in [&tb.m, &tb.n] {
        let r = disturbance_necessity_search(&tb.scenario, std::slice::from_ref(pvm), opts)?;
        let Feasibility::Feasible(f) = &r.result else {
            unreachable!("single contexts are feasible")
        };
        println!("[{}]: feasible with support {:?}", pvm.name(), f.support);
        let m = f.model.measurement(pvm.name())?;
        for label in pvm.labels() {
            println!("  model p({}/{label}) = {}", pvm.name(), hvt_pps_probability(&f.model, m, label)?);
        }
    }
    Ok(())
}
