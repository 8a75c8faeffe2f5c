//! Brute-force integer feasibility over the join of the supports.
//!
//! A witness `W` for `R1, ..., Rm` must live on `J = supp(R1) ⋈ ... ⋈
//! supp(Rm)`, so global consistency is the existence of non-negative
//! integers `x_t` (`t ∈ J`) with `Σ_{t[Xi] = s} x_t = Ri(s)` for every bag
//! and every `s`. The search is a depth-first enumeration over `J` in
//! canonical order with interval propagation on every row. Intended as
//! ground truth on small instances; exponential in general.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::bag::{Bag, Schema, Tuple};
use crate::consistency::BagDatabase;
use crate::error::{Error, Result};

/// Resource limits for the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest admissible join support (also bounds intermediate joins).
    pub max_join_support: usize,
    /// Search nodes, i.e. tentative variable assignments.
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_join_support: 1_000_000,
            max_nodes: 100_000_000,
            max_time: Duration::from_secs(60),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Bag),
    Infeasible,
    /// The budget ran out; the string says which limit.
    Exhausted(String),
}

/// `supp(R1) ⋈ ... ⋈ supp(Rm)` in canonical order. Bags are joined
/// greedily, each time picking the bag sharing the most attributes with
/// the partial result.
pub fn join_support(db: &BagDatabase, limit: usize) -> std::result::Result<Vec<Tuple>, String> {
    let bags = db.bags();
    let mut used = vec![false; bags.len()];
    used[0] = true;
    let mut acc = bags[0].support();
    for _ in 1..bags.len() {
        let next = (0..bags.len())
            .filter(|&i| !used[i])
            .max_by_key(|&i| (acc.schema().intersection(bags[i].schema()).len(), usize::MAX - i))
            .expect("an unused bag remains");
        used[next] = true;
        acc = acc.join(&bags[next].support());
        if acc.support_size() > limit {
            return Err(format!(
                "join support exceeds {limit} tuples after {} bags",
                used.iter().filter(|&&u| u).count()
            ));
        }
    }
    if acc.support_size() > limit {
        return Err(format!("join support exceeds {limit} tuples"));
    }
    Ok(acc.tuples().cloned().collect())
}

fn to_u128(m: &BigUint) -> std::result::Result<u128, String> {
    m.to_u128()
        .ok_or_else(|| format!("multiplicity {m} does not fit in 128 bits"))
}

enum Outcome {
    Done,
    Exhausted(String),
}

struct Search<'a> {
    /// Row ids touched by each variable, one per bag.
    rows: Vec<Vec<usize>>,
    /// Static upper bound per variable.
    cap: Vec<u128>,
    rem: Vec<u128>,
    /// Sum of `cap` over unassigned variables of each row.
    capsum: Vec<u128>,
    val: Vec<u128>,
    budget: &'a OracleBudget,
    nodes: u64,
    started: Instant,
}

struct Frame {
    lo: u128,
    next: Option<u128>,
    applied: Option<u128>,
}

impl Search<'_> {
    fn bounds(&self, d: usize) -> Option<(u128, u128)> {
        let mut lo = 0u128;
        let mut hi = if self.rows[d].is_empty() { 0 } else { u128::MAX };
        for &r in &self.rows[d] {
            hi = hi.min(self.rem[r]);
            lo = lo.max(self.rem[r].saturating_sub(self.capsum[r] - self.cap[d]));
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn apply(&mut self, d: usize, v: u128) {
        self.val[d] = v;
        for &r in &self.rows[d] {
            self.rem[r] -= v;
            self.capsum[r] -= self.cap[d];
        }
    }

    fn undo(&mut self, d: usize) {
        let v = self.val[d];
        for &r in &self.rows[d] {
            self.rem[r] += v;
            self.capsum[r] += self.cap[d];
        }
        self.val[d] = 0;
    }

    fn rows_ok(&self, d: usize) -> bool {
        self.rows[d].iter().all(|&r| self.rem[r] <= self.capsum[r])
    }

    /// Runs the enumeration, handing every solution to `found`; stops when
    /// `found` returns `false`.
    fn run(&mut self, mut found: impl FnMut(&[u128]) -> bool) -> Outcome {
        let n = self.val.len();
        if n == 0 {
            found(&self.val);
            return Outcome::Done;
        }
        let mut stack = Vec::with_capacity(n);
        match self.bounds(0) {
            Some((lo, hi)) => stack.push(Frame { lo, next: Some(hi), applied: None }),
            None => return Outcome::Done,
        }
        while !stack.is_empty() {
            let d = stack.len() - 1;
            if stack[d].applied.take().is_some() {
                self.undo(d);
            }
            let top = stack.last_mut().expect("non-empty");
            let Some(v) = top.next else {
                stack.pop();
                continue;
            };
            top.next = (v > top.lo).then(|| v - 1);
            top.applied = Some(v);
            self.nodes += 1;
            if self.nodes > self.budget.max_nodes {
                return Outcome::Exhausted(format!("more than {} search nodes", self.budget.max_nodes));
            }
            if self.nodes.is_multiple_of(4096) && self.started.elapsed() > self.budget.max_time {
                return Outcome::Exhausted(format!("time limit of {:?} reached", self.budget.max_time));
            }
            self.apply(d, v);
            if !self.rows_ok(d) {
                continue;
            }
            if d + 1 == n {
                if !found(&self.val) {
                    return Outcome::Done;
                }
                continue;
            }
            if let Some((lo, hi)) = self.bounds(d + 1) {
                stack.push(Frame { lo, next: Some(hi), applied: None });
            }
        }
        Outcome::Done
    }
}

/// Shared setup: rows, demands and the root-level mass check. Returns
/// `Ok(None)` when infeasibility is already evident.
fn search_setup<'a>(
    db: &BagDatabase,
    vars: &[Tuple],
    budget: &'a OracleBudget,
) -> std::result::Result<Option<Search<'a>>, String> {
    let mut row_id: BTreeMap<(usize, Tuple), usize> = BTreeMap::new();
    let mut demand = Vec::new();
    let mut row_bag = Vec::new();
    for (i, b) in db.bags().iter().enumerate() {
        for (s, m) in b.iter() {
            row_id.insert((i, s.clone()), demand.len());
            demand.push(to_u128(m)?);
            row_bag.push(i);
        }
    }
    let mut rows = Vec::with_capacity(vars.len());
    for t in vars {
        let mut rs = Vec::with_capacity(db.len());
        for (i, b) in db.bags().iter().enumerate() {
            match row_id.get(&(i, t.project_unchecked(b.schema()))) {
                Some(&r) => rs.push(r),
                // t cannot carry mass
                None => {
                    rs.clear();
                    break;
                }
            }
        }
        rows.push(rs);
    }
    let cap: Vec<u128> = rows
        .iter()
        .map(|rs| rs.iter().map(|&r| demand[r]).min().unwrap_or(0))
        .collect();
    let mut capsum = vec![0u128; demand.len()];
    let mut covered = vec![false; demand.len()];
    for (d, rs) in rows.iter().enumerate() {
        for &r in rs {
            capsum[r] = capsum[r]
                .checked_add(cap[d])
                .ok_or_else(|| "row capacity overflows 128 bits".to_string())?;
            covered[r] = true;
        }
    }
    if covered.iter().any(|c| !c) || !components_balanced(&rows, &demand, &row_bag, db.len()) {
        return Ok(None);
    }
    let val = vec![0; vars.len()];
    Ok(Some(Search {
        rows,
        cap,
        rem: demand,
        capsum,
        val,
        budget,
        nodes: 0,
        started: Instant::now(),
    }))
}

/// Within every connected component of the row/variable incidence graph,
/// each bag's demands must sum to the same total.
fn components_balanced(rows: &[Vec<usize>], demand: &[u128], row_bag: &[usize], m: usize) -> bool {
    let n = demand.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for rs in rows {
        for w in rs.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut sums: BTreeMap<usize, Vec<u128>> = BTreeMap::new();
    for r in 0..n {
        let root = find(&mut parent, r);
        let entry = sums.entry(root).or_insert_with(|| vec![0; m]);
        entry[row_bag[r]] = entry[row_bag[r]].saturating_add(demand[r]);
    }
    sums.values().all(|s| s.windows(2).all(|w| w[0] == w[1]))
}

fn to_bag(schema: &Schema, vars: &[Tuple], val: &[u128]) -> Bag {
    Bag::from_map_unchecked(
        schema.clone(),
        vars.iter()
            .zip(val)
            .filter(|(_, &v)| v > 0)
            .map(|(t, &v)| (t.clone(), BigUint::from(v)))
            .collect(),
    )
}

fn solve_on(db: &BagDatabase, vars: &[Tuple], budget: &OracleBudget) -> Feasibility {
    let mut search = match search_setup(db, vars, budget) {
        Ok(Some(s)) => s,
        Ok(None) => return Feasibility::Infeasible,
        Err(why) => return Feasibility::Exhausted(why),
    };
    let mut hit = None;
    let outcome = search.run(|val| {
        hit = Some(val.to_vec());
        false
    });
    match (hit, outcome) {
        (Some(val), _) => Feasibility::Feasible(to_bag(&db.union_schema(), vars, &val)),
        (None, Outcome::Done) => Feasibility::Infeasible,
        (None, Outcome::Exhausted(why)) => Feasibility::Exhausted(why),
    }
}

/// Decides global consistency, returning a witness when one exists.
pub fn solve_feasibility(db: &BagDatabase, budget: &OracleBudget) -> Feasibility {
    match join_support(db, budget.max_join_support) {
        Ok(vars) => solve_on(db, &vars, budget),
        Err(why) => Feasibility::Exhausted(why),
    }
}

/// Every witness of the collection, in the order the search meets them
/// (lexicographically decreasing multiplicity vectors over `J`).
pub fn enumerate_witnesses(db: &BagDatabase, budget: &OracleBudget) -> Result<Vec<Bag>> {
    let vars = join_support(db, budget.max_join_support).map_err(Error::ResourceExhausted)?;
    let Some(mut search) = search_setup(db, &vars, budget).map_err(Error::ResourceExhausted)? else {
        return Ok(Vec::new());
    };
    let schema = db.union_schema();
    let mut out = Vec::new();
    match search.run(|val| {
        out.push(to_bag(&schema, &vars, val));
        true
    }) {
        Outcome::Done => Ok(out),
        Outcome::Exhausted(why) => Err(Error::ResourceExhausted(why)),
    }
}

/// `W` is a witness: it lives on `X1 ∪ ... ∪ Xm` and `W[Xi] = Ri` for
/// every `i`.
pub fn check_witness(w: &Bag, db: &BagDatabase) -> Result<bool> {
    let schema = db.union_schema();
    if w.schema() != &schema {
        return Err(Error::SchemaMismatch(format!(
            "witness over {} for a collection over {schema}",
            w.schema()
        )));
    }
    for b in db.bags() {
        if &w.marginal(b.schema())? != b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `W` is a witness and no witness has support strictly inside `supp(W)`.
pub fn is_minimal_witness(w: &Bag, db: &BagDatabase, budget: &OracleBudget) -> Result<bool> {
    if !check_witness(w, db)? {
        return Ok(false);
    }
    let support: Vec<Tuple> = w.tuples().cloned().collect();
    for skip in 0..support.len() {
        let mut vars = support.clone();
        vars.remove(skip);
        match solve_on(db, &vars, budget) {
            Feasibility::Feasible(_) => return Ok(false),
            Feasibility::Infeasible => {}
            Feasibility::Exhausted(why) => return Err(Error::ResourceExhausted(why)),
        }
    }
    Ok(true)
}

/// Relative slack on the floating-point binary-size comparison.
pub const BINARY_TOLERANCE: f64 = 1e-9;

/// Size of a witness against the sizes of the bags it witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub witness_support: usize,
    pub witness_max_multiplicity: BigUint,
    pub max_multiplicity: BigUint,
    /// `max_t W(t) <= max_i ‖Ri‖_mb`.
    pub multiplicity_ok: bool,
    pub unary_sum: BigUint,
    /// `‖W‖_supp <= Σ ‖Ri‖_u`.
    pub unary_ok: bool,
    pub binary_sum: f64,
    /// `‖W‖_supp <= Σ ‖Ri‖_b`; only guaranteed for minimal witnesses.
    pub binary_ok: bool,
    pub support_sum: usize,
    /// `‖W‖_supp <= Σ ‖Ri‖_supp`, which holds for chained witnesses over
    /// acyclic schemas but not in general.
    pub support_ok: bool,
}

impl BoundsReport {
    pub fn to_json(&self) -> Value {
        json!({
            "witness_support": self.witness_support,
            "witness_max_multiplicity": self.witness_max_multiplicity.to_string(),
            "max_multiplicity": self.max_multiplicity.to_string(),
            "multiplicity_ok": self.multiplicity_ok,
            "unary_sum": self.unary_sum.to_string(),
            "unary_ok": self.unary_ok,
            "binary_sum": self.binary_sum,
            "binary_ok": self.binary_ok,
            "support_sum": self.support_sum,
            "support_ok": self.support_ok,
        })
    }
}

pub fn verify_bounds(db: &BagDatabase, w: &Bag) -> Result<BoundsReport> {
    if !check_witness(w, db)? {
        return Err(Error::Precondition("not a witness of the collection".into()));
    }
    let norms: Vec<_> = db.bags().iter().map(Bag::size_norms).collect();
    let witness_support = w.support_size();
    let witness_max_multiplicity = w.max_multiplicity();
    let max_multiplicity = norms
        .iter()
        .map(|n| n.multiplicity_bound.clone())
        .max()
        .unwrap_or_default();
    let unary_sum: BigUint = norms.iter().map(|n| &n.unary_size).sum();
    let binary_sum: f64 = norms.iter().map(|n| n.binary_size).sum();
    let support_sum: usize = norms.iter().map(|n| n.support_size).sum();
    Ok(BoundsReport {
        witness_support,
        multiplicity_ok: witness_max_multiplicity <= max_multiplicity,
        witness_max_multiplicity,
        max_multiplicity,
        unary_ok: BigUint::from(witness_support) <= unary_sum,
        unary_sum,
        binary_ok: witness_support as f64 <= binary_sum * (1.0 + BINARY_TOLERANCE),
        binary_sum,
        support_ok: witness_support <= support_sum,
        support_sum,
    })
}
