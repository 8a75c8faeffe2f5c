//! Acyclicity, join trees and bad witnesses for a few schemas.

use bagcons::Hypergraph;

fn show(name: &str, h: &Hypergraph) {
    println!("{name}: {h}");
    println!("  chordal {}, conformal {}, acyclic {}", h.is_chordal(), h.is_conformal(), h.is_acyclic());
    if let Some(tree) = h.join_tree() {
        println!("  join tree: {}", tree.to_json());
    }
    if let Some(bad) = h.find_bad_witness() {
        println!("  bad witness: {}", bad.to_json());
    }
}

fn main() -> bagcons::Result<()> {
    show("P5", &Hypergraph::path(5));
    show("C4", &Hypergraph::cycle(4));
    show("H4", &Hypergraph::clique_complement(4));
    let h = Hypergraph::from_names(
        &["A", "B", "C", "D", "E"],
        &[&["A", "B", "C"], &["C", "D"], &["D", "E", "A"], &["B", "E"]],
    )?;
    show("custom", &h);
    let r = h.reduce();
    println!("reduced: {r}");
    for op in h.deletion_sequence_to(&r)? {
        println!("  {op}");
    }
    Ok(())
}
