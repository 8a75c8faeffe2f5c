//! Pairwise consistent bags over an acyclic schema always have a global
//! witness, and it can be built along a join tree.

use bagcons::consistency::{acyclic_global_witness, global_consistent, GlobalMode};
use bagcons::oracle::verify_bounds;
use bagcons::{Bag, BagDatabase};

fn main() -> bagcons::Result<()> {
    let db = BagDatabase::from_bags(vec![
        Bag::from_rows(&["A", "B"], &[(&["1", "x"], 2), (&["2", "y"], 1)])?,
        Bag::from_rows(&["B", "C"], &[(&["x", "p"], 1), (&["x", "q"], 1), (&["y", "p"], 1)])?,
        Bag::from_rows(&["C", "D"], &[(&["p", "0"], 2), (&["q", "1"], 1)])?,
    ])?;
    let report = global_consistent(&db, GlobalMode::Auto);
    println!("{}", report.to_json());

    let w = acyclic_global_witness(&db)?.expect("pairwise consistent");
    println!("witness:\n{w}");
    println!("bounds: {}", verify_bounds(&db, &w)?.to_json());
    Ok(())
}
