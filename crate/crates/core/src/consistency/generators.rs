// Instance generators: Tseitin-style counterexamples, the lifting of a
// collection along safe deletions, the two hardness lifts and the
// contingency-table encoding.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::Value;

use super::BagDatabase;
use crate::bag::{Attribute, Bag, Schema, Tuple};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, SafeDeletionOp};
use crate::json;

/// Default padding value for vertices re-inserted by [`lift_collection`].
pub const DEFAULT_PAD: &str = "0";

/// Pairwise consistent but globally inconsistent relations over a
/// `k`-uniform, `d`-regular hypergraph (`d >= 2`). Values range over
/// `0..d`; every bag holds the tuples whose coordinate sum is `0 mod d`,
/// except the last one, which uses `1 mod d`.
pub fn tseitin_counterexample(h: &Hypergraph) -> Result<BagDatabase> {
    let k = h
        .uniformity()
        .ok_or_else(|| Error::Precondition("hypergraph is not uniform".into()))?;
    let d = h
        .regularity()
        .ok_or_else(|| Error::Precondition("hypergraph is not regular".into()))?;
    if d < 2 {
        return Err(Error::Precondition(format!("degree {d} is below 2")));
    }
    let m = h.edge_count();
    let mut bags = Vec::with_capacity(m);
    for (i, e) in h.edges().iter().enumerate() {
        let target = if i + 1 == m { 1 } else { 0 };
        let mut entries = Vec::new();
        let mut digits = vec![0usize; k];
        loop {
            if digits.iter().sum::<usize>() % d == target {
                let t = Tuple::new(
                    e.iter()
                        .cloned()
                        .zip(digits.iter().map(|x| x.to_string())),
                )?;
                entries.push((t, BigUint::one()));
            }
            // odometer over {0..d}^k
            let mut pos = 0;
            while pos < k && digits[pos] + 1 == d {
                digits[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
            digits[pos] += 1;
        }
        bags.push(Bag::from_entries(e.clone(), entries)?);
    }
    BagDatabase::new(h.clone(), bags)
}

/// Lifts a collection over `H0` to one over `h1`, where `ops` is a
/// safe-deletion sequence from `h1` to `H0`. Operations are undone in
/// reverse: a re-inserted covered edge gets the marginal of its cover, and
/// a re-inserted vertex is padded with a constant value (looked up in
/// `defaults`, falling back to `"0"`).
pub fn lift_collection(
    d0: &BagDatabase,
    h1: &Hypergraph,
    ops: &[SafeDeletionOp],
    defaults: &BTreeMap<Attribute, String>,
) -> Result<BagDatabase> {
    let steps = h1.replay(ops)?;
    let end = steps.last().expect("replay returns the start");
    let h0 = d0.hypergraph();
    if end.vertices() != h0.vertices() || !end.same_edge_set(h0) {
        return Err(Error::Precondition(format!(
            "the operations lead to {end}, not to the schema of the collection {h0}"
        )));
    }
    let mut cur: Vec<Bag> = end
        .edges()
        .iter()
        .map(|e| d0.bags()[h0.position(e).expect("same edge set")].clone())
        .collect();
    for (s, op) in ops.iter().enumerate().rev() {
        let prev = &steps[s];
        let next = &steps[s + 1];
        cur = match op {
            SafeDeletionOp::DeleteCoveredEdge { edge, cover } => {
                let c = if cover < edge { *cover } else { cover - 1 };
                let restored = cur[c].marginal(&prev.edges()[*edge])?;
                let mut out = cur;
                out.insert(*edge, restored);
                out
            }
            SafeDeletionOp::DeleteVertex(a) => {
                let pad = defaults
                    .get(a)
                    .map(String::as_str)
                    .unwrap_or(DEFAULT_PAD);
                prev.edges()
                    .iter()
                    .map(|x| {
                        let y = x.without(a);
                        if !x.contains(a) {
                            return Ok(cur[next.position(&y).expect("edge survives")].clone());
                        }
                        if y.is_empty() {
                            // the whole mass sits on the single padded tuple
                            let t = Tuple::new([(a.clone(), pad.to_string())])?;
                            let mass = cur[0].total();
                            return if mass.is_zero() {
                                Ok(Bag::empty(x.clone()))
                            } else {
                                Bag::from_entries(x.clone(), [(t, mass)])
                            };
                        }
                        let base = &cur[next.position(&y).expect("shrunk edge survives")];
                        Bag::from_entries(
                            x.clone(),
                            base.iter()
                                .map(|(t, m)| (t.with_value(a.clone(), pad), m.clone())),
                        )
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
    }
    BagDatabase::new(h1.clone(), cur)
}

/// Pairwise consistent, globally inconsistent relations over any cyclic
/// hypergraph: a Tseitin collection on the cycle or clique complement found
/// by [`Hypergraph::find_bad_witness`], lifted back along its safe
/// deletions.
pub fn counterexample_for(h: &Hypergraph) -> Result<BagDatabase> {
    let bad = h
        .find_bad_witness()
        .ok_or_else(|| Error::Precondition(format!("{h} is acyclic")))?;
    let core = h.replay(&bad.ops)?.pop().expect("replay returns the start");
    let d0 = tseitin_counterexample(&core)?;
    lift_collection(&d0, h, &bad.ops, &BTreeMap::new())
}

fn fresh_attribute(used: &Schema) -> Attribute {
    let mut k = used.len() + 1;
    loop {
        let a = Attribute::new(format!("A{k}")).expect("non-empty name");
        if !used.contains(&a) {
            return a;
        }
        k += 1;
    }
}

struct CycleLayout {
    /// Attribute shared by the last and the first edge.
    anchor: Attribute,
    /// The other attribute of the last edge.
    tail: Attribute,
    fresh: Attribute,
}

fn cycle_layout(h: &Hypergraph) -> Result<CycleLayout> {
    let m = h.edge_count();
    if !h.is_cycle_shape() {
        return Err(Error::Precondition(format!("{h} is not a cycle")));
    }
    let edges = h.edges();
    for i in 0..m {
        if edges[i].intersection(&edges[(i + 1) % m]).len() != 1 {
            return Err(Error::Precondition(
                "cycle edges must be listed in cyclic order".into(),
            ));
        }
    }
    let last = &edges[m - 1];
    let shared = last.intersection(&edges[0]);
    let anchor = shared.iter().next().expect("one shared vertex").clone();
    let tail = last.without(&anchor).iter().next().expect("2-element edge").clone();
    Ok(CycleLayout {
        anchor,
        tail,
        fresh: fresh_attribute(h.vertices()),
    })
}

fn rename(bag: &Bag, from: &Attribute, to: &Attribute) -> Result<Bag> {
    let schema = bag.schema().without(from).with(to.clone());
    let entries = bag.iter().map(|(t, m)| {
        let v = t.get(from).expect("conforming tuple").to_string();
        let rest = t.project_unchecked(&bag.schema().without(from));
        (rest.with_value(to.clone(), v), m.clone())
    });
    Bag::from_entries(schema, entries)
}

/// Lifts a collection over the cycle `C_{n-1}` (edges in cyclic order) to
/// one over `C_n`: the last bag is moved onto a fresh attribute, and a new
/// diagonal bag ties the fresh attribute to the one it replaced. Global
/// consistency is preserved in both directions.
pub fn cycle_hardness_lift(d: &BagDatabase) -> Result<BagDatabase> {
    let h = d.hypergraph();
    let lay = cycle_layout(h)?;
    let m = h.edge_count();
    let last = &d.bags()[m - 1];
    let moved = rename(last, &lay.anchor, &lay.fresh)?;
    let closing_schema = Schema::new([lay.anchor.clone(), lay.fresh.clone()])?;
    let margin = last.marginal(&Schema::new([lay.anchor.clone()])?)?;
    let closing = Bag::from_entries(
        closing_schema.clone(),
        margin.iter().map(|(t, mult)| {
            let v = t.get(&lay.anchor).expect("conforming tuple");
            (t.with_value(lay.fresh.clone(), v), mult.clone())
        }),
    )?;
    let mut edges = h.edges()[..m - 1].to_vec();
    edges.push(Schema::new([lay.tail.clone(), lay.fresh.clone()])?);
    edges.push(closing_schema);
    let lifted = Hypergraph::new(h.vertices().with(lay.fresh.clone()), edges)?;
    let mut bags = d.bags()[..m - 1].to_vec();
    bags.push(moved);
    bags.push(closing);
    BagDatabase::new(lifted, bags)
}

/// Carries a witness of `d` to a witness of `cycle_hardness_lift(d)` by
/// copying the replaced attribute onto the fresh one.
pub fn cycle_lift_witness(d: &BagDatabase, w: &Bag) -> Result<Bag> {
    let lay = cycle_layout(d.hypergraph())?;
    let schema = w.schema().with(lay.fresh.clone());
    Bag::from_entries(
        schema,
        w.iter().map(|(t, m)| {
            let v = t.get(&lay.anchor).expect("witness covers all attributes");
            (t.with_value(lay.fresh.clone(), v), m.clone())
        }),
    )
}

struct CliqueLayout {
    /// For each edge, the vertex it misses.
    missing: Vec<Attribute>,
    fresh: Attribute,
    domains: BTreeMap<Attribute, Vec<String>>,
    bound: BigUint,
}

fn clique_layout(d: &BagDatabase) -> Result<CliqueLayout> {
    let h = d.hypergraph();
    if !h.is_clique_complement_shape() {
        return Err(Error::Precondition(format!("{h} is not a clique complement")));
    }
    let missing = h
        .edges()
        .iter()
        .map(|e| {
            h.vertices()
                .difference(e)
                .iter()
                .next()
                .expect("edges have n-1 vertices")
                .clone()
        })
        .collect();
    let mut domains: BTreeMap<Attribute, Vec<String>> = BTreeMap::new();
    for a in h.vertices().iter() {
        let mut vals: Vec<String> = d
            .bags()
            .iter()
            .filter(|b| b.schema().contains(a))
            .flat_map(|b| b.active_domain(a))
            .collect();
        vals.sort();
        vals.dedup();
        domains.insert(a.clone(), vals);
    }
    let bound = d
        .bags()
        .iter()
        .map(Bag::max_multiplicity)
        .max()
        .unwrap_or_default();
    Ok(CliqueLayout {
        missing,
        fresh: fresh_attribute(h.vertices()),
        domains,
        bound,
    })
}

/// All tuples over `schema` drawn from the given domains.
fn grid(schema: &Schema, domains: &BTreeMap<Attribute, Vec<String>>) -> Vec<Tuple> {
    let mut out = vec![Tuple::empty()];
    for a in schema.iter() {
        let dom = &domains[a];
        out = out
            .iter()
            .flat_map(|t| dom.iter().map(move |v| t.with_value(a.clone(), v.as_str())))
            .collect();
    }
    out
}

/// Lifts a collection over `H_{n-1}` to one over `H_n`. With `M` the
/// largest multiplicity and `D_i` the active-domain size of the vertex
/// missed by edge `i`, bag `i` gets `(t, 1) -> R_i(t)` and
/// `(t, 2) -> M * D_i - R_i(t)` over the active-domain grid, and the new
/// bag on the old vertex set is constant `M` on the grid.
pub fn clique_hardness_lift(d: &BagDatabase) -> Result<BagDatabase> {
    let lay = clique_layout(d)?;
    let h = d.hypergraph();
    let mut edges = Vec::with_capacity(h.edge_count() + 1);
    let mut bags = Vec::with_capacity(h.edge_count() + 1);
    for (i, (e, r)) in h.edges().iter().zip(d.bags()).enumerate() {
        let di = BigUint::from(lay.domains[&lay.missing[i]].len());
        let top = &lay.bound * di;
        let mut entries = Vec::new();
        for t in grid(e, &lay.domains) {
            let here = r.multiplicity(&t);
            let rest = &top - &here;
            entries.push((t.with_value(lay.fresh.clone(), "1"), here));
            entries.push((t.with_value(lay.fresh.clone(), "2"), rest));
        }
        let schema = e.with(lay.fresh.clone());
        bags.push(Bag::accumulate(schema.clone(), entries)?);
        edges.push(schema);
    }
    let all = h.vertices().clone();
    let full = Bag::accumulate(
        all.clone(),
        grid(&all, &lay.domains)
            .into_iter()
            .map(|t| (t, lay.bound.clone())),
    )?;
    edges.push(all);
    bags.push(full);
    let lifted = Hypergraph::new(h.vertices().with(lay.fresh), edges)?;
    BagDatabase::new(lifted, bags)
}

/// Carries a witness `W` of `d` to a witness of `clique_hardness_lift(d)`:
/// `(t, 1) -> W(t)` and `(t, 2) -> M - W(t)` over the full grid.
pub fn clique_lift_witness(d: &BagDatabase, w: &Bag) -> Result<Bag> {
    let lay = clique_layout(d)?;
    let all = d.hypergraph().vertices().clone();
    if w.schema() != &all {
        return Err(Error::SchemaMismatch(format!(
            "witness over {} for a collection over {all}",
            w.schema()
        )));
    }
    let mut entries = Vec::new();
    for t in grid(&all, &lay.domains) {
        let here = w.multiplicity(&t);
        if here > lay.bound {
            return Err(Error::Precondition(format!(
                "witness multiplicity {here} exceeds the largest bag multiplicity"
            )));
        }
        let rest = &lay.bound - &here;
        entries.push((t.with_value(lay.fresh.clone(), "1"), here));
        entries.push((t.with_value(lay.fresh.clone(), "2"), rest));
    }
    Bag::accumulate(all.with(lay.fresh), entries)
}

/// Three `n x n` tables of non-negative integers: `r[x][z]`, `c[y][z]` and
/// `f[x][y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTables {
    pub r: Vec<Vec<BigUint>>,
    pub c: Vec<Vec<BigUint>>,
    pub f: Vec<Vec<BigUint>>,
}

impl ContingencyTables {
    pub fn from_u64(r: &[Vec<u64>], c: &[Vec<u64>], f: &[Vec<u64>]) -> Self {
        let conv = |t: &[Vec<u64>]| {
            t.iter()
                .map(|row| row.iter().map(|&x| BigUint::from(x)).collect())
                .collect()
        };
        ContingencyTables {
            r: conv(r),
            c: conv(c),
            f: conv(f),
        }
    }

    pub fn size(&self) -> usize {
        self.r.len()
    }

    /// `{"R": [[..]], "C": [[..]], "F": [[..]]}` with integer or decimal
    /// string entries.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = json::object(v, "$")?;
        let table = |name: &str| -> Result<Vec<Vec<BigUint>>> {
            let p = format!("$.{name}");
            json::array(json::field(obj, name, "$")?, &p)?
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let rp = format!("{p}[{i}]");
                    json::array(row, &rp)?
                        .iter()
                        .enumerate()
                        .map(|(j, x)| json::multiplicity(x, &format!("{rp}[{j}]")))
                        .collect()
                })
                .collect()
        };
        Ok(ContingencyTables {
            r: table("R")?,
            c: table("C")?,
            f: table("F")?,
        })
    }
}

/// Encodes three 2D tables as bags `R(XZ)`, `C(YZ)`, `F(XY)` with values
/// `"1".."n"`. A 3D table with these margins exists iff the collection is
/// globally consistent.
pub fn encode_3dct(tables: &ContingencyTables) -> Result<BagDatabase> {
    let n = tables.size();
    for (name, t) in [("R", &tables.r), ("C", &tables.c), ("F", &tables.f)] {
        if t.len() != n || t.iter().any(|row| row.len() != n) {
            return Err(Error::Precondition(format!("table {name} is not {n} x {n}")));
        }
    }
    let bag = |a: &str, b: &str, t: &Vec<Vec<BigUint>>| -> Result<Bag> {
        let schema = Schema::from_names([a, b])?;
        let mut entries = Vec::new();
        for (i, row) in t.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                let tup = Tuple::from_pairs([(a, (i + 1).to_string()), (b, (j + 1).to_string())])?;
                entries.push((tup, m.clone()));
            }
        }
        Bag::accumulate(schema, entries)
    };
    BagDatabase::from_bags(vec![
        bag("X", "Z", &tables.r)?,
        bag("Y", "Z", &tables.c)?,
        bag("X", "Y", &tables.f)?,
    ])
}
