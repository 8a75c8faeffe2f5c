//! Schema hypergraphs and their structural tests.
//!
//! The acyclicity characterizations are cross-checkable against each other:
//! GYO reduction ([`Hypergraph::is_acyclic`]), chordality plus conformality,
//! join trees and running-intersection orderings.

mod acyclic;
mod chordal;
mod witness;

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::bag::{Attribute, Schema};
use crate::error::{Error, Result};
use crate::json;

pub use acyclic::{JoinTree, RunningIntersection};
pub use chordal::{is_perfect_elimination_order, maximum_cardinality_search};
pub use witness::{BadWitness, WitnessShape};

/// A hypergraph `(V, E)`. Edges are kept as a list; covered and duplicate
/// edges are allowed until [`Hypergraph::reduce`] or [`Hypergraph::induced`]
/// removes them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    vertices: Schema,
    edges: Vec<Schema>,
}

/// One step of a safe-deletion sequence. Edge indices refer to the edge list
/// at the time the operation is applied.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SafeDeletionOp {
    DeleteVertex(Attribute),
    DeleteCoveredEdge { edge: usize, cover: usize },
}

impl fmt::Display for SafeDeletionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SafeDeletionOp::DeleteVertex(a) => write!(f, "delete vertex {a}"),
            SafeDeletionOp::DeleteCoveredEdge { edge, cover } => {
                write!(f, "delete edge #{edge} covered by #{cover}")
            }
        }
    }
}

impl SafeDeletionOp {
    pub fn to_json(&self) -> Value {
        match self {
            SafeDeletionOp::DeleteVertex(a) => json!({ "delete_vertex": a.name() }),
            SafeDeletionOp::DeleteCoveredEdge { edge, cover } => {
                json!({ "delete_covered_edge": { "edge": edge, "cover": cover } })
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Self::from_json_at(v, "$")
    }

    pub(crate) fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let obj = json::object(v, path)?;
        if let Some(a) = obj.get("delete_vertex") {
            let p = format!("{path}.delete_vertex");
            let name = json::string(a, &p)?;
            return Ok(SafeDeletionOp::DeleteVertex(
                Attribute::new(name).map_err(|e| json::err(&p, e))?,
            ));
        }
        if let Some(d) = obj.get("delete_covered_edge") {
            let p = format!("{path}.delete_covered_edge");
            let inner = json::object(d, &p)?;
            let edge = json::usize_value(json::field(inner, "edge", &p)?, &format!("{p}.edge"))?;
            let cover =
                json::usize_value(json::field(inner, "cover", &p)?, &format!("{p}.cover"))?;
            return Ok(SafeDeletionOp::DeleteCoveredEdge { edge, cover });
        }
        Err(json::err(path, "unknown safe-deletion operation"))
    }
}

/// Undirected simple graph on a set of attributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<Attribute>,
    adjacency: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn vertices(&self) -> &[Attribute] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, a: &Attribute) -> Option<usize> {
        self.vertices.binary_search(a).ok()
    }

    pub fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, a: &Attribute, b: &Attribute) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.adjacency[i].contains(&j),
            _ => false,
        }
    }

    /// Edges as ordered pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(Attribute, Attribute)> {
        let mut out = Vec::new();
        for (i, nb) in self.adjacency.iter().enumerate() {
            for &j in nb.range(i + 1..) {
                out.push((self.vertices[i].clone(), self.vertices[j].clone()));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Chordality via maximum-cardinality search and a perfect elimination
    /// ordering check.
    pub fn is_chordal(&self) -> bool {
        let order = maximum_cardinality_search(self);
        is_perfect_elimination_order(self, &order)
    }
}

fn vertex_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("A{i}")).collect()
}

impl Hypergraph {
    /// Builds a hypergraph; every edge must be a non-empty subset of the
    /// vertex set.
    pub fn new(vertices: Schema, edges: Vec<Schema>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.is_empty() {
                return Err(Error::InvalidHypergraph(format!("edge #{i} is empty")));
            }
            if !e.is_subset(&vertices) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge #{i} {e} is not a subset of the vertex set {vertices}"
                )));
            }
        }
        Ok(Hypergraph { vertices, edges })
    }

    /// Vertex set is the union of the edges.
    pub fn from_edges(edges: Vec<Schema>) -> Result<Self> {
        let vertices = edges.iter().fold(Schema::empty(), |acc, e| acc.union(e));
        Hypergraph::new(vertices, edges)
    }

    pub fn from_names(vertices: &[&str], edges: &[&[&str]]) -> Result<Self> {
        let v = Schema::from_names(vertices)?;
        let e = edges
            .iter()
            .map(|e| Schema::from_names(e.iter()))
            .collect::<Result<Vec<_>>>()?;
        Hypergraph::new(v, e)
    }

    /// `P_n`: the path `{A1,A2}, ..., {A(n-1),An}`.
    pub fn path(n: usize) -> Self {
        let names = vertex_names(n);
        let edges = (0..n.saturating_sub(1))
            .map(|i| Schema::from_names([&names[i], &names[i + 1]]).unwrap())
            .collect();
        Hypergraph::new(Schema::from_names(&names).unwrap(), edges).unwrap()
    }

    /// `C_n`: the path `P_n` closed by `{An,A1}`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "C_n needs n >= 3");
        let names = vertex_names(n);
        let edges = (0..n)
            .map(|i| Schema::from_names([&names[i], &names[(i + 1) % n]]).unwrap())
            .collect();
        Hypergraph::new(Schema::from_names(&names).unwrap(), edges).unwrap()
    }

    /// `H_n`: edges `V \ {Ai}` for `i = 1..n`. Requires `n >= 3`.
    pub fn clique_complement(n: usize) -> Self {
        assert!(n >= 3, "H_n needs n >= 3");
        let names = vertex_names(n);
        let vertices = Schema::from_names(&names).unwrap();
        let edges = (0..n)
            .map(|i| vertices.without(&Attribute::new(names[i].as_str()).unwrap()))
            .collect();
        Hypergraph::new(vertices, edges).unwrap()
    }

    pub fn vertices(&self) -> &Schema {
        &self.vertices
    }

    pub fn edges(&self) -> &[Schema] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges containing `a`.
    pub fn degree(&self, a: &Attribute) -> usize {
        self.edges.iter().filter(|e| e.contains(a)).count()
    }

    /// Index of the first edge equal to `e` as a set.
    pub fn position(&self, e: &Schema) -> Option<usize> {
        self.edges.iter().position(|x| x == e)
    }

    /// Same vertex set and the same set of edges, ignoring order and
    /// multiplicity.
    pub fn same_edge_set(&self, other: &Hypergraph) -> bool {
        let a: BTreeSet<&Schema> = self.edges.iter().collect();
        let b: BTreeSet<&Schema> = other.edges.iter().collect();
        self.vertices == other.vertices && a == b
    }

    pub fn primal_graph(&self) -> Graph {
        let vertices: Vec<Attribute> = self.vertices.iter().cloned().collect();
        let mut adjacency = vec![BTreeSet::new(); vertices.len()];
        for e in &self.edges {
            let idx: Vec<usize> = e
                .iter()
                .map(|a| vertices.binary_search(a).expect("edge within vertex set"))
                .collect();
            for &i in &idx {
                for &j in &idx {
                    if i != j {
                        adjacency[i].insert(j);
                    }
                }
            }
        }
        Graph {
            vertices,
            adjacency,
        }
    }

    pub fn is_chordal(&self) -> bool {
        self.primal_graph().is_chordal()
    }

    /// Conformality by Gilmore's criterion: for every three edges, the union
    /// of their pairwise intersections lies inside some edge. Vertices that
    /// occur in no edge are ignored.
    pub fn is_conformal(&self) -> bool {
        let reduced = self.reduce();
        let e = &reduced.edges;
        let m = e.len();
        for i in 0..m {
            for j in i + 1..m {
                let ij = e[i].intersection(&e[j]);
                for k in j + 1..m {
                    let u = ij
                        .union(&e[i].intersection(&e[k]))
                        .union(&e[j].intersection(&e[k]));
                    if !e.iter().any(|f| u.is_subset(f)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The reduction `R(H)`: edges not strictly contained in another edge,
    /// with duplicates collapsed.
    pub fn reduce(&self) -> Hypergraph {
        let mut edges: Vec<Schema> = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let covered = self
                .edges
                .iter()
                .enumerate()
                .any(|(j, f)| j != i && e != f && e.is_subset(f));
            if !covered && !edges.contains(e) {
                edges.push(e.clone());
            }
        }
        Hypergraph {
            vertices: self.vertices.clone(),
            edges,
        }
    }

    /// The hypergraph induced by `w`: edges are the non-empty `X ∩ w`,
    /// deduplicated.
    pub fn induced(&self, w: &Schema) -> Result<Hypergraph> {
        if !w.is_subset(&self.vertices) {
            return Err(Error::InvalidHypergraph(format!(
                "{w} is not a subset of the vertex set {}",
                self.vertices
            )));
        }
        let mut edges: Vec<Schema> = Vec::new();
        for e in &self.edges {
            let x = e.intersection(w);
            if !x.is_empty() && !edges.contains(&x) {
                edges.push(x);
            }
        }
        Ok(Hypergraph {
            vertices: w.clone(),
            edges,
        })
    }

    /// Applies one safe-deletion operation.
    pub fn apply(&self, op: &SafeDeletionOp) -> Result<Hypergraph> {
        match op {
            SafeDeletionOp::DeleteVertex(a) => {
                if !self.vertices.contains(a) {
                    return Err(Error::InapplicableOperation(format!(
                        "vertex {a} is not in the hypergraph"
                    )));
                }
                self.induced(&self.vertices.without(a))
            }
            SafeDeletionOp::DeleteCoveredEdge { edge, cover } => {
                let m = self.edges.len();
                if *edge >= m || *cover >= m || edge == cover {
                    return Err(Error::InapplicableOperation(format!(
                        "edge indices #{edge}, #{cover} invalid for {m} edges"
                    )));
                }
                if !self.edges[*edge].is_subset(&self.edges[*cover]) {
                    return Err(Error::InapplicableOperation(format!(
                        "edge #{edge} {} is not covered by #{cover} {}",
                        self.edges[*edge], self.edges[*cover]
                    )));
                }
                let mut edges = self.edges.clone();
                edges.remove(*edge);
                Ok(Hypergraph {
                    vertices: self.vertices.clone(),
                    edges,
                })
            }
        }
    }

    /// Replays a sequence of operations, returning every intermediate
    /// hypergraph (the first element is `self`).
    pub fn replay(&self, ops: &[SafeDeletionOp]) -> Result<Vec<Hypergraph>> {
        let mut out = vec![self.clone()];
        for op in ops {
            let next = out.last().expect("non-empty").apply(op)?;
            out.push(next);
        }
        Ok(out)
    }

    /// A safe-deletion sequence transforming `self` into a hypergraph with
    /// the vertex set and edge set of `target`: first the vertices outside
    /// `target`, then covered edges that `target` lacks, then duplicates.
    pub fn deletion_sequence_to(&self, target: &Hypergraph) -> Result<Vec<SafeDeletionOp>> {
        let mut ops = Vec::new();
        let mut cur = self.clone();
        for a in self.vertices.difference(&target.vertices).iter() {
            let op = SafeDeletionOp::DeleteVertex(a.clone());
            cur = cur.apply(&op)?;
            ops.push(op);
        }
        if cur.vertices != target.vertices {
            return Err(Error::InapplicableOperation(format!(
                "vertex set {} is not contained in {}",
                target.vertices, self.vertices
            )));
        }
        let wanted: BTreeSet<&Schema> = target.edges.iter().collect();
        loop {
            let mut next = None;
            for (i, e) in cur.edges.iter().enumerate() {
                let unwanted = !wanted.contains(e);
                let duplicate = cur.edges[..i].contains(e);
                if !(unwanted || duplicate) {
                    continue;
                }
                let cover = cur
                    .edges
                    .iter()
                    .enumerate()
                    .find(|(j, f)| *j != i && e.is_subset(f))
                    .map(|(j, _)| j);
                match cover {
                    Some(j) => {
                        next = Some(SafeDeletionOp::DeleteCoveredEdge { edge: i, cover: j });
                        break;
                    }
                    None if unwanted => {
                        return Err(Error::InapplicableOperation(format!(
                            "edge {e} is neither in the target nor covered"
                        )))
                    }
                    None => {}
                }
            }
            match next {
                Some(op) => {
                    cur = cur.apply(&op)?;
                    ops.push(op);
                }
                None => break,
            }
        }
        if !cur.same_edge_set(target) {
            return Err(Error::InapplicableOperation(format!(
                "{self} cannot be reduced to {target} by safe deletions"
            )));
        }
        Ok(ops)
    }

    /// Every edge has exactly `k` vertices; returns `k`.
    pub fn uniformity(&self) -> Option<usize> {
        let k = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == k).then_some(k)
    }

    /// Every vertex lies in exactly `d` edges; returns `d`.
    pub fn regularity(&self) -> Option<usize> {
        let mut degrees = self.vertices.iter().map(|a| self.degree(a));
        let d = degrees.next()?;
        degrees.all(|x| x == d).then_some(d)
    }

    /// Fingerprint test for `C_n` (n >= 3): `n` distinct 2-element edges,
    /// every vertex of degree 2, connected.
    pub fn is_cycle_shape(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 || self.edges.len() != n || self.uniformity() != Some(2) {
            return false;
        }
        if self.regularity() != Some(2) {
            return false;
        }
        let distinct: BTreeSet<&Schema> = self.edges.iter().collect();
        distinct.len() == n && self.cycle_order().is_some()
    }

    /// Fingerprint test for `H_n` (n >= 3): `n` distinct edges of size `n-1`.
    pub fn is_clique_complement_shape(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 || self.edges.len() != n || self.uniformity() != Some(n - 1) {
            return false;
        }
        let distinct: BTreeSet<&Schema> = self.edges.iter().collect();
        distinct.len() == n
    }

    /// For a 2-uniform, 2-regular connected hypergraph, the vertices in
    /// cyclic order starting from the smallest one.
    pub fn cycle_order(&self) -> Option<Vec<Attribute>> {
        let g = self.primal_graph();
        let n = g.vertex_count();
        if n < 3 || (0..n).any(|i| g.neighbors(i).len() != 2) {
            return None;
        }
        let mut order = vec![0usize];
        let mut prev = usize::MAX;
        let mut cur = 0usize;
        loop {
            let next = *g.neighbors(cur).iter().find(|&&x| x != prev)?;
            if next == 0 {
                break;
            }
            if order.contains(&next) {
                return None;
            }
            order.push(next);
            prev = cur;
            cur = next;
        }
        (order.len() == n).then(|| order.into_iter().map(|i| g.vertices[i].clone()).collect())
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Vec<&str>> = self.edges.iter().map(Schema::names).collect();
        json!({ "vertices": self.vertices.names(), "edges": edges })
    }

    pub fn from_json(v: &Value) -> Result<Hypergraph> {
        Hypergraph::from_json_at(v, "$")
    }

    pub(crate) fn from_json_at(v: &Value, path: &str) -> Result<Hypergraph> {
        let obj = json::object(v, path)?;
        let vp = format!("{path}.vertices");
        let names = json::string_array(json::field(obj, "vertices", path)?, &vp)?;
        let vertices = Schema::from_names(&names).map_err(|e| json::err(&vp, e))?;
        let ep = format!("{path}.edges");
        let mut edges = Vec::new();
        for (i, e) in json::array(json::field(obj, "edges", path)?, &ep)?.iter().enumerate() {
            let p = format!("{ep}[{i}]");
            let names = json::string_array(e, &p)?;
            edges.push(Schema::from_names(&names).map_err(|e| json::err(&p, e))?);
        }
        Hypergraph::new(vertices, edges).map_err(|e| json::err(&ep, e))
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges.iter().map(|e| e.to_string()).collect();
        write!(f, "({}, [{}])", self.vertices, edges.join(", "))
    }
}
