//! Consistency deciders and witness constructors.
//!
//! Two bags are consistent iff their marginals on the shared attributes
//! agree; a witness is read off a saturated flow of [`FlowNetwork`]. Over
//! acyclic schemas, pairwise consistency implies global consistency and a
//! witness is assembled by chaining minimal two-bag witnesses along a
//! running-intersection ordering.

mod generators;

use std::fmt;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::bag::{Bag, Schema};
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::hypergraph::Hypergraph;
use crate::json;
use crate::oracle::{self, Feasibility, OracleBudget};

pub use generators::{
    clique_hardness_lift, clique_lift_witness, counterexample_for, cycle_hardness_lift, cycle_lift_witness,
    encode_3dct, lift_collection, tseitin_counterexample, ContingencyTables,
};

/// Join-support size above which `GlobalMode::Auto` does not call the
/// oracle on cyclic schemas.
pub const AUTO_ORACLE_CUTOFF: u64 = 1_000_000;

/// A hypergraph with one bag per edge, aligned by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BagDatabase {
    hypergraph: Hypergraph,
    bags: Vec<Bag>,
}

impl BagDatabase {
    pub fn new(hypergraph: Hypergraph, bags: Vec<Bag>) -> Result<Self> {
        if bags.is_empty() {
            return Err(Error::InvalidDatabase("a database needs at least one bag".into()));
        }
        if bags.len() != hypergraph.edge_count() {
            return Err(Error::InvalidDatabase(format!(
                "{} bags for {} edges",
                bags.len(),
                hypergraph.edge_count()
            )));
        }
        for (i, (b, e)) in bags.iter().zip(hypergraph.edges()).enumerate() {
            if b.schema() != e {
                return Err(Error::InvalidDatabase(format!(
                    "bag #{i} has schema {} but edge #{i} is {e}",
                    b.schema()
                )));
            }
        }
        Ok(BagDatabase { hypergraph, bags })
    }

    /// The hypergraph is read off the bag schemas.
    pub fn from_bags(bags: Vec<Bag>) -> Result<Self> {
        let h = Hypergraph::from_edges(bags.iter().map(|b| b.schema().clone()).collect())?;
        BagDatabase::new(h, bags)
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn bags(&self) -> &[Bag] {
        &self.bags
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// `X1 ∪ ... ∪ Xm`.
    pub fn union_schema(&self) -> Schema {
        self.bags
            .iter()
            .fold(Schema::empty(), |acc, b| acc.union(b.schema()))
    }

    /// The sub-collection on the given bag indices.
    pub fn select(&self, indices: &[usize]) -> Result<BagDatabase> {
        let bags = indices
            .iter()
            .map(|&i| {
                self.bags
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidDatabase(format!("no bag #{i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        BagDatabase::from_bags(bags)
    }

    /// Product of support sizes, saturating; an upper bound on the join
    /// support.
    pub fn support_product(&self) -> u64 {
        self.bags
            .iter()
            .fold(1u64, |acc, b| acc.saturating_mul(b.support_size() as u64))
    }

    pub fn to_json(&self) -> Value {
        let bags: Vec<Value> = self.bags.iter().map(Bag::to_json).collect();
        json!({ "hypergraph": self.hypergraph.to_json(), "bags": bags })
    }

    pub fn from_json(v: &Value) -> Result<BagDatabase> {
        let obj = json::object(v, "$")?;
        let hypergraph = Hypergraph::from_json_at(json::field(obj, "hypergraph", "$")?, "$.hypergraph")?;
        let bags = json::array(json::field(obj, "bags", "$")?, "$.bags")?
            .iter()
            .enumerate()
            .map(|(i, b)| Bag::from_json_at(b, &format!("$.bags[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        BagDatabase::new(hypergraph, bags).map_err(|e| json::err("$.bags", e))
    }
}

impl fmt::Display for BagDatabase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.bags.iter().enumerate() {
            writeln!(f, "R{}: {b}", i + 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlobalVerdict {
    Consistent,
    Inconsistent,
    /// Cyclic schema and the oracle was not run (too large for `Auto`).
    UnknownCyclic,
    /// The oracle ran out of budget.
    ResourceExhausted,
}

impl GlobalVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            GlobalVerdict::Consistent => "yes",
            GlobalVerdict::Inconsistent => "no",
            GlobalVerdict::UnknownCyclic => "unknown-cyclic",
            GlobalVerdict::ResourceExhausted => "resource-exhausted",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlobalMode {
    /// Acyclic schemas are decided exactly; cyclic ones go to the oracle only
    /// below [`AUTO_ORACLE_CUTOFF`].
    Auto,
    /// Cyclic schemas always go to the oracle.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub pairwise: bool,
    pub inconsistent_pairs: Vec<(usize, usize)>,
    pub global: GlobalVerdict,
    pub witness: Option<Bag>,
}

impl ConsistencyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "pairwise": self.pairwise,
            "inconsistent_pairs": self.inconsistent_pairs,
            "global": self.global.name(),
            "witness": self.witness.as_ref().map(Bag::to_json),
        })
    }
}

/// `R[X ∩ Y] = S[X ∩ Y]`. With disjoint schemas this compares total mass.
pub fn pairwise_consistent(r: &Bag, s: &Bag) -> bool {
    let common = r.schema().intersection(s.schema());
    r.marginal(&common).expect("common ⊆ X") == s.marginal(&common).expect("common ⊆ Y")
}

/// All index pairs `(i, j)`, `i < j`, whose bags are not consistent.
pub fn inconsistent_pairs(db: &BagDatabase) -> Vec<(usize, usize)> {
    let bags = db.bags();
    let mut out = Vec::new();
    for i in 0..bags.len() {
        for j in i + 1..bags.len() {
            if !pairwise_consistent(&bags[i], &bags[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

fn saturated_flow(net: &FlowNetwork) -> Option<crate::flow::Flow> {
    let f = net.max_flow();
    net.is_saturated(&f).expect("max_flow output is valid").then_some(f)
}

/// A witness `T(XY)` read off an integral saturated flow of `N(R, S)`.
pub fn two_bag_witness(r: &Bag, s: &Bag) -> Option<Bag> {
    let net = FlowNetwork::build(r, s);
    let f = saturated_flow(&net)?;
    Some(net.flow_bag(&f))
}

/// A witness whose support is inclusion-minimal. Middle arcs are scanned in
/// canonical order; an arc is dropped whenever a saturated flow survives
/// without it. Arcs unused by the current saturated flow are dropped
/// without recomputation.
pub fn minimal_two_bag_witness(r: &Bag, s: &Bag) -> Option<Bag> {
    let mut net = FlowNetwork::build(r, s);
    let mut flow = saturated_flow(&net)?;
    let candidates: Vec<_> = net.middle().iter().map(|a| a.join.clone()).collect();
    for t in candidates {
        let pos = net
            .middle()
            .binary_search_by(|a| a.join.cmp(&t))
            .expect("arc still present");
        let reduced = net.suppress_middle_arc(&t).expect("arc still present");
        if flow.middle[pos] == BigUint::default() {
            flow.middle.remove(pos);
            net = reduced;
            continue;
        }
        if let Some(f) = saturated_flow(&reduced) {
            net = reduced;
            flow = f;
        }
    }
    let w = net.flow_bag(&flow);
    debug_assert_eq!(w.support_size(), net.middle().len());
    Some(w)
}

/// Global witness for a pairwise-consistent collection over an acyclic
/// schema, chaining minimal two-bag witnesses along a running-intersection
/// ordering. `Ok(None)` when some pair is inconsistent.
pub fn acyclic_global_witness(db: &BagDatabase) -> Result<Option<Bag>> {
    let ri = db
        .hypergraph()
        .running_intersection_order()
        .ok_or(Error::CyclicHypergraph)?;
    if !inconsistent_pairs(db).is_empty() {
        return Ok(None);
    }
    let bags = db.bags();
    let mut order = ri.order.iter();
    let first = *order.next().expect("databases are non-empty");
    let mut acc = bags[first].clone();
    for &i in order {
        acc = minimal_two_bag_witness(&acc, &bags[i])
            .expect("running intersection keeps the partial witness consistent with the next bag");
    }
    assert!(
        oracle::check_witness(&acc, db).unwrap_or(false),
        "chained witness failed re-verification"
    );
    Ok(Some(acc))
}

pub fn global_consistent(db: &BagDatabase, mode: GlobalMode) -> ConsistencyReport {
    global_consistent_with_budget(db, mode, &OracleBudget::default())
}

pub fn global_consistent_with_budget(
    db: &BagDatabase,
    mode: GlobalMode,
    budget: &OracleBudget,
) -> ConsistencyReport {
    let pairs = inconsistent_pairs(db);
    let pairwise = pairs.is_empty();
    let mut report = ConsistencyReport {
        pairwise,
        inconsistent_pairs: pairs,
        global: GlobalVerdict::Inconsistent,
        witness: None,
    };
    if !pairwise {
        return report;
    }
    if db.hypergraph().is_acyclic() {
        report.witness = acyclic_global_witness(db).expect("acyclic schema");
        report.global = GlobalVerdict::Consistent;
        return report;
    }
    if mode == GlobalMode::Auto && db.support_product() > AUTO_ORACLE_CUTOFF {
        report.global = GlobalVerdict::UnknownCyclic;
        return report;
    }
    match oracle::solve_feasibility(db, budget) {
        Feasibility::Feasible(w) => {
            assert!(oracle::check_witness(&w, db).unwrap_or(false));
            report.global = GlobalVerdict::Consistent;
            report.witness = Some(w);
        }
        Feasibility::Infeasible => report.global = GlobalVerdict::Inconsistent,
        Feasibility::Exhausted(_) => report.global = GlobalVerdict::ResourceExhausted,
    }
    report
}

/// Every sub-collection of at most `k` bags is globally consistent.
pub fn k_wise_consistent(db: &BagDatabase, k: usize, budget: &OracleBudget) -> Result<bool> {
    let m = db.len();
    if k == 0 || k > m {
        return Err(Error::Precondition(format!("k = {k} must lie in 1..={m}")));
    }
    if k == 1 {
        return Ok(true);
    }
    if !inconsistent_pairs(db).is_empty() {
        return Ok(false);
    }
    for size in 3..=k {
        for subset in subsets(m, size) {
            let sub = db.select(&subset)?;
            if sub.hypergraph().is_acyclic() {
                continue;
            }
            match oracle::solve_feasibility(&sub, budget) {
                Feasibility::Feasible(_) => {}
                Feasibility::Infeasible => return Ok(false),
                Feasibility::Exhausted(why) => return Err(Error::ResourceExhausted(why)),
            }
        }
    }
    Ok(true)
}

fn subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, size, &mut Vec::new(), &mut out);
    out
}
