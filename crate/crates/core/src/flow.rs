//! The two-bag network and an exact integral max-flow solver.
//!
//! For bags `R(X)` and `S(Y)` the network has a source, one left node per
//! tuple of `R'`, one right node per tuple of `S'`, and a sink. Source arcs
//! carry `R(r)`, sink arcs carry `S(s)`, and each join tuple
//! `t ∈ R' ⋈ S'` contributes a middle arc `t[X] -> t[Y]`.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigUint;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::bag::{Bag, Schema, Tuple};
use crate::error::{Error, Result};

/// Dinic's blocking-flow algorithm on a general directed graph with
/// arbitrary-precision capacities.
#[derive(Clone, Debug, Default)]
pub struct Dinic {
    adjacency: Vec<Vec<usize>>,
    head: Vec<usize>,
    residual: Vec<BigUint>,
    capacity: Vec<BigUint>,
}

impl Dinic {
    pub fn new(nodes: usize) -> Self {
        Dinic {
            adjacency: vec![Vec::new(); nodes],
            ..Default::default()
        }
    }

    /// Adds an arc and returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: BigUint) -> usize {
        let id = self.head.len();
        self.adjacency[from].push(id);
        self.head.push(to);
        self.residual.push(capacity.clone());
        self.capacity.push(capacity);
        self.adjacency[to].push(id + 1);
        self.head.push(from);
        self.residual.push(BigUint::zero());
        self.capacity.push(BigUint::zero());
        id
    }

    /// Flow currently carried by arc `id`.
    pub fn flow(&self, id: usize) -> BigUint {
        &self.capacity[id] - &self.residual[id]
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adjacency.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adjacency[v] {
                let u = self.head[e];
                if level[u] == usize::MAX && !self.residual[e].is_zero() {
                    level[u] = level[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        level
    }

    fn augment(
        &mut self,
        v: usize,
        t: usize,
        limit: BigUint,
        level: &[usize],
        next: &mut [usize],
    ) -> BigUint {
        if v == t {
            return limit;
        }
        while next[v] < self.adjacency[v].len() {
            let e = self.adjacency[v][next[v]];
            let u = self.head[e];
            if level[u] == level[v].wrapping_add(1) && !self.residual[e].is_zero() {
                let bound = (&limit).min(&self.residual[e]).clone();
                let pushed = self.augment(u, t, bound, level, next);
                if !pushed.is_zero() {
                    self.residual[e] -= &pushed;
                    self.residual[e ^ 1] += &pushed;
                    return pushed;
                }
            }
            next[v] += 1;
        }
        BigUint::zero()
    }

    /// Runs to completion and returns the maximum flow value.
    pub fn max_flow(&mut self, s: usize, t: usize) -> BigUint {
        let mut total = BigUint::zero();
        if s == t {
            return total;
        }
        let unbounded: BigUint = self.capacity.iter().sum::<BigUint>() + 1u32;
        loop {
            let level = self.levels(s);
            if level[t] == usize::MAX {
                return total;
            }
            let mut next = vec![0usize; self.adjacency.len()];
            loop {
                let pushed = self.augment(s, t, unbounded.clone(), &level, &mut next);
                if pushed.is_zero() {
                    break;
                }
                total += pushed;
            }
        }
    }
}

/// A middle arc, tagged with the join tuple that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiddleArc {
    pub join: Tuple,
    pub left: usize,
    pub right: usize,
}

/// The network `N(R, S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    left_schema: Schema,
    right_schema: Schema,
    left: Vec<Tuple>,
    left_capacity: Vec<BigUint>,
    right: Vec<Tuple>,
    right_capacity: Vec<BigUint>,
    middle: Vec<MiddleArc>,
    middle_capacity: BigUint,
}

/// Flow values per arc of a [`FlowNetwork`], aligned with its arc lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub source: Vec<BigUint>,
    pub middle: Vec<BigUint>,
    pub sink: Vec<BigUint>,
}

impl Flow {
    pub fn value(&self) -> BigUint {
        self.source.iter().sum()
    }
}

impl FlowNetwork {
    /// Builds `N(R, S)`. Middle arcs get capacity `min(|R|, |S|)` (total
    /// masses), which no feasible flow can exceed.
    pub fn build(r: &Bag, s: &Bag) -> FlowNetwork {
        let left: Vec<Tuple> = r.tuples().cloned().collect();
        let right: Vec<Tuple> = s.tuples().cloned().collect();
        let left_capacity = left.iter().map(|t| r.multiplicity(t)).collect();
        let right_capacity = right.iter().map(|t| s.multiplicity(t)).collect();
        let mut net = FlowNetwork {
            left_schema: r.schema().clone(),
            right_schema: s.schema().clone(),
            left,
            left_capacity,
            right,
            right_capacity,
            middle: Vec::new(),
            middle_capacity: r.total().min(s.total()),
        };
        let joined = r.support().join(&s.support());
        net.middle = joined
            .tuples()
            .map(|t| net.arc_for(t).expect("join tuple projects into both supports"))
            .collect();
        net
    }

    fn arc_for(&self, t: &Tuple) -> Option<MiddleArc> {
        let x = t.project(&self.left_schema).ok()?;
        let y = t.project(&self.right_schema).ok()?;
        Some(MiddleArc {
            join: t.clone(),
            left: self.left.binary_search(&x).ok()?,
            right: self.right.binary_search(&y).ok()?,
        })
    }

    /// `2 + |R'| + |S'|`.
    pub fn node_count(&self) -> usize {
        2 + self.left.len() + self.right.len()
    }

    pub fn left(&self) -> &[Tuple] {
        &self.left
    }

    pub fn right(&self) -> &[Tuple] {
        &self.right
    }

    pub fn left_capacity(&self) -> &[BigUint] {
        &self.left_capacity
    }

    pub fn right_capacity(&self) -> &[BigUint] {
        &self.right_capacity
    }

    pub fn middle(&self) -> &[MiddleArc] {
        &self.middle
    }

    pub fn middle_capacity(&self) -> &BigUint {
        &self.middle_capacity
    }

    pub fn join_schema(&self) -> Schema {
        self.left_schema.union(&self.right_schema)
    }

    pub fn source_capacity(&self) -> BigUint {
        self.left_capacity.iter().sum()
    }

    pub fn sink_capacity(&self) -> BigUint {
        self.right_capacity.iter().sum()
    }

    /// Copy of the network without the middle arc of `t`.
    pub fn suppress_middle_arc(&self, t: &Tuple) -> Result<FlowNetwork> {
        let pos = self
            .middle
            .binary_search_by(|a| a.join.cmp(t))
            .map_err(|_| Error::MissingArc(t.to_string()))?;
        let mut out = self.clone();
        out.middle.remove(pos);
        Ok(out)
    }

    /// Copy of the network with the middle arc of `t` put back. `t` must
    /// project onto a left and a right node.
    pub fn restore_middle_arc(&self, t: &Tuple) -> Result<FlowNetwork> {
        let pos = match self.middle.binary_search_by(|a| a.join.cmp(t)) {
            Ok(_) => return Ok(self.clone()),
            Err(pos) => pos,
        };
        let arc = self
            .arc_for(t)
            .ok_or_else(|| Error::MissingArc(t.to_string()))?;
        let mut out = self.clone();
        out.middle.insert(pos, arc);
        Ok(out)
    }

    /// An exact integral maximum flow.
    pub fn max_flow(&self) -> Flow {
        let nl = self.left.len();
        let nr = self.right.len();
        let source = 0;
        let sink = 1 + nl + nr;
        let mut dinic = Dinic::new(self.node_count());
        let src_ids: Vec<usize> = self
            .left_capacity
            .iter()
            .enumerate()
            .map(|(i, c)| dinic.add_arc(source, 1 + i, c.clone()))
            .collect();
        let mid_ids: Vec<usize> = self
            .middle
            .iter()
            .map(|a| dinic.add_arc(1 + a.left, 1 + nl + a.right, self.middle_capacity.clone()))
            .collect();
        let sink_ids: Vec<usize> = self
            .right_capacity
            .iter()
            .enumerate()
            .map(|(j, c)| dinic.add_arc(1 + nl + j, sink, c.clone()))
            .collect();
        dinic.max_flow(source, sink);
        Flow {
            source: src_ids.iter().map(|&e| dinic.flow(e)).collect(),
            middle: mid_ids.iter().map(|&e| dinic.flow(e)).collect(),
            sink: sink_ids.iter().map(|&e| dinic.flow(e)).collect(),
        }
    }

    /// Checks capacity and conservation constraints exactly.
    pub fn validate(&self, f: &Flow) -> Result<()> {
        if f.source.len() != self.left.len()
            || f.sink.len() != self.right.len()
            || f.middle.len() != self.middle.len()
        {
            return Err(Error::InvalidFlow("flow does not match the arc set".into()));
        }
        for (i, (v, c)) in f.source.iter().zip(&self.left_capacity).enumerate() {
            if v > c {
                return Err(Error::InvalidFlow(format!("source arc {i} over capacity")));
            }
        }
        for (j, (v, c)) in f.sink.iter().zip(&self.right_capacity).enumerate() {
            if v > c {
                return Err(Error::InvalidFlow(format!("sink arc {j} over capacity")));
            }
        }
        let mut out_of_left = vec![BigUint::zero(); self.left.len()];
        let mut into_right = vec![BigUint::zero(); self.right.len()];
        for (a, v) in self.middle.iter().zip(&f.middle) {
            if *v > self.middle_capacity {
                return Err(Error::InvalidFlow(format!("middle arc {} over capacity", a.join)));
            }
            out_of_left[a.left] += v;
            into_right[a.right] += v;
        }
        if out_of_left != f.source {
            return Err(Error::InvalidFlow("conservation violated at a left node".into()));
        }
        if into_right != f.sink {
            return Err(Error::InvalidFlow("conservation violated at a right node".into()));
        }
        Ok(())
    }

    /// True iff every source and sink arc is at capacity.
    pub fn is_saturated(&self, f: &Flow) -> Result<bool> {
        self.validate(f)?;
        Ok(f.source == self.left_capacity && f.sink == self.right_capacity)
    }

    /// The bag `T(t) = f(t[X], t[Y])` read off the middle arcs.
    pub fn flow_bag(&self, f: &Flow) -> Bag {
        let entries: BTreeMap<Tuple, BigUint> = self
            .middle
            .iter()
            .zip(&f.middle)
            .filter(|(_, v)| !v.is_zero())
            .map(|(a, v)| (a.join.clone(), v.clone()))
            .collect();
        Bag::from_map_unchecked(self.join_schema(), entries)
    }

    /// Debug dump: node list and arcs with capacities as decimal strings.
    pub fn to_json(&self) -> Value {
        let nl = self.left.len();
        let mut nodes = vec![json!("source")];
        nodes.extend(self.left.iter().map(|t| json!(format!("L{t}"))));
        nodes.extend(self.right.iter().map(|t| json!(format!("R{t}"))));
        nodes.push(json!("sink"));
        let sink = 1 + nl + self.right.len();
        let mut arcs = Vec::new();
        for (i, c) in self.left_capacity.iter().enumerate() {
            arcs.push(json!({"from": 0, "to": 1 + i, "capacity": c.to_string()}));
        }
        for a in &self.middle {
            arcs.push(json!({
                "from": 1 + a.left,
                "to": 1 + nl + a.right,
                "capacity": self.middle_capacity.to_string(),
                "join": a.join.to_string(),
            }));
        }
        for (j, c) in self.right_capacity.iter().enumerate() {
            arcs.push(json!({"from": 1 + nl + j, "to": sink, "capacity": c.to_string()}));
        }
        json!({ "nodes": nodes, "arcs": arcs })
    }
}
