//! Exhaustive search: every witness of a small database.

use bagcons::oracle::{enumerate_witnesses, is_minimal_witness, solve_feasibility, Feasibility};
use bagcons::{Bag, BagDatabase, OracleBudget};

fn main() -> bagcons::Result<()> {
    let r = Bag::from_rows(&["A", "B"], &[(&["0", "0"], 1), (&["1", "0"], 1)])?;
    let s = Bag::from_rows(&["B", "C"], &[(&["0", "0"], 1), (&["0", "1"], 1)])?;
    let db = BagDatabase::from_bags(vec![r, s])?;
    let budget = OracleBudget::default();

    let all = enumerate_witnesses(&db, &budget)?;
    println!("{} witnesses", all.len());
    for w in &all {
        println!("minimal: {}\n{w}", is_minimal_witness(w, &db, &budget)?);
    }

    let tight = OracleBudget { max_nodes: 1, ..budget };
    if let Feasibility::Exhausted(why) = solve_feasibility(&db, &tight) {
        println!("with one search node: {why}");
    }
    Ok(())
}
