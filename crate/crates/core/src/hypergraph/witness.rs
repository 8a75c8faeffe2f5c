use serde_json::{json, Value};

use super::{Hypergraph, SafeDeletionOp};
use crate::bag::{Attribute, Schema};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessShape {
    /// `R(H[W])` is the cycle `C_n`.
    Cycle,
    /// `R(H[W])` is `H_n`, all `(n-1)`-subsets of `W`.
    CliqueComplement,
}

impl WitnessShape {
    pub fn name(&self) -> &'static str {
        match self {
            WitnessShape::Cycle => "cycle",
            WitnessShape::CliqueComplement => "clique-complement",
        }
    }
}

/// A vertex set `W` certifying that a hypergraph is cyclic, together with a
/// safe-deletion sequence transforming the hypergraph into `R(H[W])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadWitness {
    pub vertices: Schema,
    pub shape: WitnessShape,
    pub ops: Vec<SafeDeletionOp>,
    /// `W` listed in cyclic order for cycles, sorted otherwise.
    pub enumeration: Vec<Attribute>,
}

impl BadWitness {
    /// Replays the operations on `h` and checks the result has the claimed
    /// shape on exactly `W`.
    pub fn verify(&self, h: &Hypergraph) -> bool {
        let Ok(steps) = h.replay(&self.ops) else {
            return false;
        };
        let end = steps.last().expect("replay returns the start");
        if end.vertices() != &self.vertices || end.reduce() != *end {
            return false;
        }
        match self.shape {
            WitnessShape::Cycle => self.vertices.len() >= 4 && end.is_cycle_shape(),
            WitnessShape::CliqueComplement => {
                self.vertices.len() >= 3 && end.is_clique_complement_shape()
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let ops: Vec<Value> = self.ops.iter().map(SafeDeletionOp::to_json).collect();
        let order: Vec<&str> = self.enumeration.iter().map(Attribute::name).collect();
        json!({
            "shape": self.shape.name(),
            "vertices": self.vertices.names(),
            "enumeration": order,
            "ops": ops,
        })
    }
}

impl Hypergraph {
    /// Shrinks the vertex set while `bad` keeps holding on the induced
    /// hypergraph, scanning in sorted order and restarting after each
    /// successful deletion.
    fn minimize_vertices(&self, bad: impl Fn(&Hypergraph) -> bool) -> Schema {
        let mut w = self.vertices.clone();
        'outer: loop {
            let current = w.clone();
            for a in current.iter() {
                let candidate = current.without(a);
                let sub = self.induced(&candidate).expect("subset of vertices");
                if bad(&sub) {
                    w = candidate;
                    continue 'outer;
                }
            }
            return w;
        }
    }

    /// Finds a minimal non-chordal (cycle) or non-conformal
    /// (clique-complement) vertex set, preferring the cycle case. `None`
    /// when the hypergraph is chordal and conformal, i.e. acyclic.
    pub fn find_bad_witness(&self) -> Option<BadWitness> {
        let shape = if !self.is_chordal() {
            WitnessShape::Cycle
        } else if !self.is_conformal() {
            WitnessShape::CliqueComplement
        } else {
            return None;
        };
        let w = match shape {
            WitnessShape::Cycle => self.minimize_vertices(|h| !h.is_chordal()),
            WitnessShape::CliqueComplement => self.minimize_vertices(|h| !h.is_conformal()),
        };
        let target = self.induced(&w).expect("subset of vertices").reduce();
        let ops = self
            .deletion_sequence_to(&target)
            .expect("R(H[W]) is reachable by safe deletions");
        let enumeration = match shape {
            WitnessShape::Cycle => target
                .cycle_order()
                .expect("a minimal non-chordal set induces a cycle"),
            WitnessShape::CliqueComplement => w.iter().cloned().collect(),
        };
        let witness = BadWitness {
            vertices: w,
            shape,
            ops,
            enumeration,
        };
        debug_assert!(witness.verify(self), "{self}");
        Some(witness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_shapes() {
        let w = Hypergraph::cycle(5).find_bad_witness().unwrap();
        assert_eq!(w.shape, WitnessShape::Cycle);
        assert_eq!(w.vertices.len(), 5);
        assert!(w.verify(&Hypergraph::cycle(5)));

        let w = Hypergraph::clique_complement(4).find_bad_witness().unwrap();
        assert_eq!(w.shape, WitnessShape::CliqueComplement);
        assert_eq!(w.vertices.len(), 4);

        assert!(Hypergraph::path(6).find_bad_witness().is_none());

        let w = Hypergraph::cycle(3).find_bad_witness().unwrap();
        assert_eq!(w.shape, WitnessShape::CliqueComplement);
    }

    #[test]
    fn embedded_cycle_is_extracted() {
        // a 4-cycle A-B-C-D with a pendant edge and a covering triangle elsewhere
        let h = Hypergraph::from_names(
            &["A", "B", "C", "D", "E", "F"],
            &[&["A", "B"], &["B", "C"], &["C", "D"], &["D", "A", "E"], &["E", "F"]],
        )
        .unwrap();
        let w = h.find_bad_witness().unwrap();
        assert_eq!(w.shape, WitnessShape::Cycle);
        assert_eq!(w.vertices, Schema::from_names(["A", "B", "C", "D"]).unwrap());
        assert!(w.verify(&h));
        assert_eq!(w.enumeration.len(), 4);
    }

    #[test]
    fn verify_rejects_tampered_ops() {
        let h = Hypergraph::cycle(4);
        let mut w = h.find_bad_witness().unwrap();
        w.ops.push(SafeDeletionOp::DeleteVertex(Attribute::new("A1").unwrap()));
        assert!(!w.verify(&h));
    }
}
