//! Carrying a collection up a safe-deletion sequence.

use std::collections::BTreeMap;

use bagcons::consistency::{global_consistent, lift_collection, tseitin_counterexample, GlobalMode};
use bagcons::{Attribute, Hypergraph};

fn main() -> bagcons::Result<()> {
    let d0 = tseitin_counterexample(&Hypergraph::cycle(3))?;
    let h1 = Hypergraph::from_names(
        &["A1", "A2", "A3", "B", "C"],
        &[&["A1", "A2", "B"], &["A2", "A3"], &["A1", "A3", "C"], &["A2"], &["C"]],
    )?;
    let ops = h1.deletion_sequence_to(d0.hypergraph())?;
    for op in &ops {
        println!("{op}");
    }
    let defaults = BTreeMap::from([(Attribute::new("B")?, "b".to_string())]);
    let d1 = lift_collection(&d0, &h1, &ops, &defaults)?;
    println!("{d1}");
    let report = global_consistent(&d1, GlobalMode::Oracle);
    println!("pairwise {}, global {}", report.pairwise, report.global.name());
    Ok(())
}
