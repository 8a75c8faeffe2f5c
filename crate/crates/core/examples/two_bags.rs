//! Pairwise consistency of two bags via max flow, and a small witness.

use bagcons::consistency::{minimal_two_bag_witness, pairwise_consistent, two_bag_witness};
use bagcons::Bag;

fn main() -> bagcons::Result<()> {
    let r = Bag::from_rows(&["A", "B"], &[(&["a1", "b1"], 2), (&["a2", "b1"], 1), (&["a2", "b2"], 3)])?;
    let s = Bag::from_rows(&["B", "C"], &[(&["b1", "c1"], 3), (&["b2", "c1"], 1), (&["b2", "c2"], 2)])?;
    println!("R =\n{r}\nS =\n{s}");
    println!("consistent: {}", pairwise_consistent(&r, &s));

    let w = two_bag_witness(&r, &s).expect("marginals on B agree");
    println!("a witness ({} tuples):\n{w}", w.support_size());
    let m = minimal_two_bag_witness(&r, &s).unwrap();
    println!("a minimal witness ({} tuples):\n{m}", m.support_size());

    // the naive guess does not work
    let join = r.join(&s);
    println!("R join S has total {} but R has total {}", join.total(), r.total());
    Ok(())
}
