//! Consistency of bags (multisets) over hypergraph schemas.
//!
//! The crate decides pairwise and global consistency of bag databases,
//! builds small witnesses over acyclic schemas through an integral max-flow
//! core, classifies schema hypergraphs, and generates counterexample and
//! hardness-reduction instances. A brute-force integer-feasibility oracle
//! provides ground truth on small instances.
//!
//! ```
//! use bagcons::{Bag, consistency};
//!
//! let r = Bag::from_rows(&["A", "B"], &[(&["1", "2"], 1), (&["2", "2"], 1)]).unwrap();
//! let s = Bag::from_rows(&["B", "C"], &[(&["2", "1"], 1), (&["2", "2"], 1)]).unwrap();
//! assert!(consistency::pairwise_consistent(&r, &s));
//! let w = consistency::minimal_two_bag_witness(&r, &s).unwrap();
//! assert_eq!(w.support_size(), 2);
//! ```

pub mod bag;
pub mod cli;
pub mod consistency;
pub mod error;
pub mod flow;
pub mod hypergraph;
mod json;
pub mod oracle;

pub use bag::{Attribute, Bag, Multiplicity, Schema, SizeNorms, Tuple};
pub use consistency::BagDatabase;
pub use error::{Error, Result};
pub use hypergraph::{BadWitness, Hypergraph, JoinTree, SafeDeletionOp};
pub use oracle::OracleBudget;
