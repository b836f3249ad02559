//! Enumerates noncontextual 0/1 assignments on small projector sets.

use ppslab::fixtures::three_box;
use ppslab::noncontext::{search_deterministic_assignments, ProjectorSet, SearchOptions, ValueAssignment};
use ppslab::qcore::Projector;

fn main() -> ppslab::Result<()> {
    let mut ps = ProjectorSet::new(3);
    for i in 0..3 {
        ps.insert(Projector::basis(3, i), None)?;
    }
    let found = search_deterministic_assignments(&ps, &ValueAssignment::empty(3), SearchOptions::default())?;
    println!("rank-1 basis: {} assignments", found.assignments.len());

    let tb = three_box();
    let mut ps = ProjectorSet::new(3);
    for pvm in [&tb.m, &tb.n] {
        for (label, p) in pvm.outcomes() {
            ps.insert(p.clone(), Some(&format!("{}/{label}", pvm.name())))?;
        }
    }
    let free = search_deterministic_assignments(&ps, &ValueAssignment::empty(ps.len()), SearchOptions::default())?;
    println!("three-box contexts: {} assignments", free.assignments.len());
    for v in &free.assignments {
        let on: Vec<String> = v
            .defined()
            .filter(|&(id, x)| x == 1.0 && id.0 < ps.len())
            .map(|(id, _)| free.closure.aliases(id).join("="))
            .collect();
        println!("  true: {}", on.join(", "));
    }

    let mut fixed = ValueAssignment::empty(ps.len());
    fixed.set(ps.find(&Projector::basis(3, 0)).expect("|1⟩⟨1|"), 1.0);
    fixed.set(ps.find(&Projector::basis(3, 1)).expect("|2⟩⟨2|"), 1.0);
    let none = search_deterministic_assignments(&ps, &fixed, SearchOptions::default())?;
    println!("with |1⟩⟨1| = |2⟩⟨2| = 1: {} assignments", none.assignments.len());
    Ok(())
}
