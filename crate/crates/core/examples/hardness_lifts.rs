//! Growing a cycle or a clique complement by one vertex keeps the answer
//! to the consistency question.

use bagcons::consistency::{
    clique_hardness_lift, clique_lift_witness, cycle_hardness_lift, cycle_lift_witness,
    global_consistent, GlobalMode,
};
use bagcons::oracle::check_witness;
use bagcons::{Bag, BagDatabase, Hypergraph};

fn main() -> bagcons::Result<()> {
    let w = Bag::from_rows(&["A1", "A2", "A3"], &[(&["0", "0", "1"], 2), (&["1", "0", "0"], 1)])?;
    let c3 = Hypergraph::cycle(3);
    let d = BagDatabase::new(c3.clone(), c3.edges().iter().map(|e| w.marginal(e)).collect::<Result<_, _>>()?)?;

    let c4 = cycle_hardness_lift(&d)?;
    println!("{c4}");
    let w4 = cycle_lift_witness(&d, &w)?;
    println!("carried witness valid: {}", check_witness(&w4, &c4)?);

    let h3 = Hypergraph::clique_complement(3);
    let d = BagDatabase::new(h3.clone(), h3.edges().iter().map(|e| w.marginal(e)).collect::<Result<_, _>>()?)?;
    let h4 = clique_hardness_lift(&d)?;
    let w4 = clique_lift_witness(&d, &w)?;
    println!("H4 lift: {} bags, witness valid: {}", h4.len(), check_witness(&w4, &h4)?);
    println!("oracle on H4 lift: {}", global_consistent(&h4, GlobalMode::Oracle).global.name());
    Ok(())
}
