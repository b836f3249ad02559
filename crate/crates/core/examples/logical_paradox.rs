//! Detects the logical paradox in the three-box scenario and shows that each
//! context on its own is consistent.

use ppslab::fixtures::three_box;
use ppslab::noncontext::{detect_logical_paradox, ParadoxConfig};

fn main() -> ppslab::Result<()> {
    let tb = three_box();
    let cfg = ParadoxConfig::default();

    let report = detect_logical_paradox(&tb.scenario, &[tb.m.clone(), tb.n.clone()], cfg)?;
    println!("[M, N]: {}", report.verdict);
    for c in &report.certain {
        println!("  {}/{} = {}  ({})", c.measurement, c.outcome, c.value, report.name(c.projector));
    }
    for d in &report.derived {
        println!("  derived p({}) = {} by {}", report.name(d.id), d.value, d.rule);
    }
    for v in &report.violations {
        println!("  {} violated: {} vs {} on {:?}", v.condition, v.lhs, v.rhs, report.witness_names(v));
    }

    for m in [&tb.m, &tb.n, &tb.fine] {
        let r = detect_logical_paradox(&tb.scenario, std::slice::from_ref(m), cfg)?;
        println!("[{}] alone: {}", m.name(), r.verdict);
    }
    Ok(())
}
