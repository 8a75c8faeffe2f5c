//! Every cyclic schema carries pairwise consistent, globally inconsistent
//! relations.

use bagcons::consistency::{counterexample_for, global_consistent, tseitin_counterexample, GlobalMode};
use bagcons::Hypergraph;

fn main() -> bagcons::Result<()> {
    let c3 = tseitin_counterexample(&Hypergraph::cycle(3))?;
    println!("{c3}");
    let report = global_consistent(&c3, GlobalMode::Oracle);
    println!("pairwise {}, global {}", report.pairwise, report.global.name());

    let h = Hypergraph::from_names(
        &["A", "B", "C", "D", "E"],
        &[&["A", "B", "E"], &["B", "C"], &["C", "D"], &["D", "A"]],
    )?;
    let bad = h.find_bad_witness().expect("cyclic");
    println!("bad witness of {h}: {}", bad.to_json());
    let db = counterexample_for(&h)?;
    let report = global_consistent(&db, GlobalMode::Oracle);
    println!("lifted: pairwise {}, global {}", report.pairwise, report.global.name());
    Ok(())
}
