use serde_json::{json, Value};

use super::Hypergraph;
use crate::bag::Schema;

/// Trace of a GYO (Graham) reduction over edge indices.
struct GyoTrace {
    /// For each removed edge, the edge covering it at removal time.
    parent: Vec<Option<usize>>,
    /// Edges never removed.
    survivors: Vec<usize>,
}

fn gyo(h: &Hypergraph) -> GyoTrace {
    let m = h.edges.len();
    let mut cur: Vec<Schema> = h.edges.clone();
    let mut alive = vec![true; m];
    let mut parent = vec![None; m];
    loop {
        let mut changed = false;
        for a in h.vertices.iter() {
            let holders: Vec<usize> = (0..m).filter(|&i| alive[i] && cur[i].contains(a)).collect();
            if holders.len() == 1 {
                let i = holders[0];
                cur[i] = cur[i].without(a);
                changed = true;
            }
        }
        let covered = (0..m).filter(|&i| alive[i]).find_map(|i| {
            (0..m)
                .find(|&j| j != i && alive[j] && cur[i].is_subset(&cur[j]))
                .map(|j| (i, j))
        });
        if let Some((i, j)) = covered {
            alive[i] = false;
            parent[i] = Some(j);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    GyoTrace {
        parent,
        survivors: (0..m).filter(|&i| alive[i]).collect(),
    }
}

/// A join tree whose nodes are the edges of a hypergraph (by index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinTree {
    nodes: Vec<Schema>,
    links: Vec<(usize, usize)>,
}

impl JoinTree {
    pub fn new(nodes: Vec<Schema>, links: Vec<(usize, usize)>) -> Self {
        JoinTree { nodes, links }
    }

    pub fn nodes(&self) -> &[Schema] {
        &self.nodes
    }

    /// Tree edges as unordered pairs of node indices.
    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    /// Checks that the links form a spanning tree and that, for every
    /// attribute, the nodes containing it induce a connected subtree.
    pub fn is_valid(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 {
            return self.links.is_empty();
        }
        if self.links.len() != n - 1 || self.links.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
            return false;
        }
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        for &(a, b) in &self.links {
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra == rb {
                return false;
            }
            uf[ra] = rb;
        }
        let attrs = self.nodes.iter().fold(Schema::empty(), |acc, e| acc.union(e));
        let ok = attrs.iter().all(|a| {
            let holders = self.nodes.iter().filter(|e| e.contains(a)).count();
            let inner = self
                .links
                .iter()
                .filter(|&&(x, y)| self.nodes[x].contains(a) && self.nodes[y].contains(a))
                .count();
            inner + 1 == holders
        });
        ok
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        self.links
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Root-first listing of the tree, rooted at the lexicographically
    /// smallest node, visiting children in canonical order.
    pub fn running_intersection(&self) -> RunningIntersection {
        let n = self.nodes.len();
        let key = |i: usize| (self.nodes[i].names(), i);
        let Some(root) = (0..n).min_by_key(|&i| key(i)) else {
            return RunningIntersection {
                order: Vec::new(),
                witness: Vec::new(),
            };
        };
        let mut order = Vec::with_capacity(n);
        let mut witness = Vec::with_capacity(n);
        let mut position = vec![usize::MAX; n];
        let mut stack: Vec<(usize, Option<usize>)> = vec![(root, None)];
        while let Some((v, parent)) = stack.pop() {
            position[v] = order.len();
            order.push(v);
            witness.push(parent.map(|p| position[p]));
            let mut children: Vec<usize> = self
                .neighbors(v)
                .into_iter()
                .filter(|&c| Some(c) != parent)
                .collect();
            children.sort_by_key(|&c| key(c));
            for c in children.into_iter().rev() {
                stack.push((c, Some(v)));
            }
        }
        RunningIntersection { order, witness }
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Vec<&str>> = self.nodes.iter().map(Schema::names).collect();
        json!({ "nodes": nodes, "links": self.links })
    }
}

/// A listing of edge indices with, for every position `i >= 1`, the
/// position `j < i` of an earlier edge containing the overlap of edge `i`
/// with all earlier edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunningIntersection {
    pub order: Vec<usize>,
    pub witness: Vec<Option<usize>>,
}

impl RunningIntersection {
    /// Checks the defining containment directly against `h`.
    pub fn verify(&self, h: &Hypergraph) -> bool {
        let m = h.edges.len();
        if self.order.len() != m || self.witness.len() != m {
            return false;
        }
        let mut seen = vec![false; m];
        for &i in &self.order {
            if i >= m || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        let mut prefix = Schema::empty();
        for (pos, &i) in self.order.iter().enumerate() {
            let edge = &h.edges[i];
            if pos > 0 {
                let Some(j) = self.witness[pos] else {
                    return false;
                };
                if j >= pos || !edge.intersection(&prefix).is_subset(&h.edges[self.order[j]]) {
                    return false;
                }
            }
            prefix = prefix.union(edge);
        }
        true
    }

    pub fn to_json(&self, h: &Hypergraph) -> Value {
        let entries: Vec<Value> = self
            .order
            .iter()
            .zip(&self.witness)
            .map(|(&i, w)| json!({ "edge": h.edges[i].names(), "index": i, "witness": w }))
            .collect();
        Value::Array(entries)
    }
}

impl Hypergraph {
    /// Acyclicity by GYO reduction: repeatedly delete vertices occurring in
    /// at most one edge and edges covered by another edge.
    pub fn is_acyclic(&self) -> bool {
        gyo(self).survivors.len() <= 1
    }

    /// A join tree built from the GYO trace, or `None` for cyclic input.
    pub fn join_tree(&self) -> Option<JoinTree> {
        let trace = gyo(self);
        if trace.survivors.len() > 1 {
            return None;
        }
        let links = trace
            .parent
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (i, p)))
            .collect();
        let tree = JoinTree::new(self.edges.clone(), links);
        debug_assert!(tree.is_valid());
        Some(tree)
    }

    pub fn running_intersection_order(&self) -> Option<RunningIntersection> {
        self.join_tree().map(|t| t.running_intersection())
    }
}
