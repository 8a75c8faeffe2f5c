// Random instance generators and brute-force oracles shared by the
// integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use bagcons::{Attribute, Bag, BagDatabase, Hypergraph, Schema, Tuple};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn attr(name: &str) -> Attribute {
    Attribute::new(name).unwrap()
}

pub fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("V{i}")).collect()
}

fn random_subset<R: Rng>(rng: &mut R, pool: &[String], min: usize, max: usize) -> Vec<String> {
    let k = rng.gen_range(min..=max.min(pool.len()));
    pool.choose_multiple(rng, k).cloned().collect()
}

/// `edges` random edges of `min_edge..=max_edge` vertices each, over at
/// most `max_v` vertices.
pub fn random_hypergraph<R: Rng>(
    rng: &mut R,
    max_v: usize,
    edges: RangeInclusive<usize>,
    min_edge: usize,
    max_edge: usize,
) -> Hypergraph {
    let pool = names(rng.gen_range((2 * min_edge).clamp(1, max_v)..=max_v));
    let m = rng.gen_range(edges);
    let edges = (0..m)
        .map(|_| Schema::from_names(random_subset(rng, &pool, min_edge.max(1), max_edge)).unwrap())
        .collect();
    Hypergraph::new(Schema::from_names(&pool).unwrap(), edges).unwrap()
}

/// Acyclic by construction: every new edge takes part of one earlier edge
/// plus fresh vertices.
pub fn random_acyclic_hypergraph<R: Rng>(
    rng: &mut R,
    max_e: usize,
    max_edge: usize,
    max_v: usize,
) -> Hypergraph {
    let mut next = 1usize;
    let fresh = |k: usize, next: &mut usize| -> Vec<String> {
        (0..k)
            .map(|_| {
                *next += 1;
                format!("V{}", *next - 1)
            })
            .collect()
    };
    let m = rng.gen_range(1..=max_e);
    let first_len = rng.gen_range(1..=max_edge);
    let mut edges: Vec<Vec<String>> = vec![fresh(first_len, &mut next)];
    for _ in 1..m {
        let parent = edges.choose(rng).unwrap().clone();
        let mut e = random_subset(rng, &parent, 0, max_edge);
        let room = max_edge - e.len();
        let budget = max_v.saturating_sub(next - 1);
        let add = if e.is_empty() {
            rng.gen_range(1..=room.min(budget.max(1)))
        } else {
            rng.gen_range(0..=room.min(budget))
        };
        e.extend(fresh(add, &mut next));
        edges.push(e);
    }
    let edges: Vec<Schema> = edges.into_iter().map(|e| Schema::from_names(e).unwrap()).collect();
    Hypergraph::from_edges(edges).unwrap()
}

/// A bag over `schema` with values from `0..domain`.
pub fn random_bag<R: Rng>(
    rng: &mut R,
    schema: &Schema,
    max_support: usize,
    domain: u32,
    max_mult: u64,
) -> Bag {
    let size = rng.gen_range(0..=max_support);
    let entries = (0..size).map(|_| {
        let t = Tuple::new(
            schema
                .iter()
                .map(|a| (a.clone(), rng.gen_range(0..domain).to_string())),
        )
        .unwrap();
        (t, BigUint::from(rng.gen_range(1..=max_mult)))
    });
    let entries: Vec<_> = entries.collect();
    // repeated draws are dropped so multiplicities stay under the cap
    let mut seen = BTreeSet::new();
    let dedup: Vec<_> = entries.into_iter().filter(|(t, _)| seen.insert(t.clone())).collect();
    Bag::from_entries(schema.clone(), dedup).unwrap()
}

/// Marginals of a random bag over all vertices; globally consistent by
/// construction. The bag is non-empty.
pub fn consistent_database<R: Rng>(
    rng: &mut R,
    h: &Hypergraph,
    max_support: usize,
    domain: u32,
    max_mult: u64,
) -> (BagDatabase, Bag) {
    let all = h.edges().iter().fold(Schema::empty(), |acc, e| acc.union(e));
    let w = loop {
        let w = random_bag(rng, &all, max_support.max(1), domain, max_mult);
        if !w.is_empty() {
            break w;
        }
    };
    let bags = h.edges().iter().map(|e| w.marginal(e).unwrap()).collect();
    (BagDatabase::new(h.clone(), bags).unwrap(), w)
}

/// The two-bag family `R_{n-1}(A,B)`, `S_{n-1}(B,C)`.
pub fn witness_count_family(n: usize) -> (Bag, Bag) {
    let mut r = Vec::new();
    let mut s = Vec::new();
    for k in 2..=n {
        let k = k.to_string();
        r.push((vec!["1".to_string(), k.clone()], 1));
        r.push((vec![k.clone(), k.clone()], 1));
        s.push((vec![k.clone(), "1".to_string()], 1));
        s.push((vec![k.clone(), k.clone()], 1));
    }
    let build = |names: [&str; 2], rows: Vec<(Vec<String>, u64)>| {
        let schema = Schema::from_names(names).unwrap();
        Bag::from_entries(
            schema,
            rows.into_iter().map(|(v, m)| {
                (
                    Tuple::from_pairs([(names[0], v[0].clone()), (names[1], v[1].clone())]).unwrap(),
                    BigUint::from(m as u32),
                )
            }),
        )
        .unwrap()
    };
    (build(["A", "B"], r), build(["B", "C"], s))
}

pub fn triangle() -> BagDatabase {
    BagDatabase::from_bags(vec![
        Bag::from_rows(&["A", "B"], &[(&["0", "0"], 1), (&["1", "1"], 1)]).unwrap(),
        Bag::from_rows(&["B", "C"], &[(&["0", "1"], 1), (&["1", "0"], 1)]).unwrap(),
        Bag::from_rows(&["A", "C"], &[(&["0", "0"], 1), (&["1", "1"], 1)]).unwrap(),
    ])
    .unwrap()
}

/// `R_i(A_i A_{i+1})`, `i = 1..n-1`, support `{0,1}^2`, multiplicity `2^n`.
pub fn chain_database(n: usize) -> BagDatabase {
    let m = BigUint::from(1u32) << n;
    let bags = (1..n)
        .map(|i| {
            let (a, b) = (format!("A{i}"), format!("A{}", i + 1));
            let schema = Schema::from_names([&a, &b]).unwrap();
            let entries = ["0", "1"].iter().flat_map(|x| {
                let (a, b, m) = (a.clone(), b.clone(), m.clone());
                ["0", "1"].iter().map(move |y| {
                    (
                        Tuple::from_pairs([(a.as_str(), *x), (b.as_str(), *y)]).unwrap(),
                        m.clone(),
                    )
                })
            });
            Bag::from_entries(schema, entries).unwrap()
        })
        .collect();
    BagDatabase::from_bags(bags).unwrap()
}

/// Brute-force chordality: no induced cycle of length >= 4 on any vertex
/// subset.
pub fn brute_chordal(h: &Hypergraph) -> bool {
    let verts: Vec<&Attribute> = h.vertices().iter().collect();
    let n = verts.len();
    let adj = |a: usize, b: usize| {
        h.edges()
            .iter()
            .any(|e| e.contains(verts[a]) && e.contains(verts[b]))
    };
    for mask in 0u32..(1 << n) {
        let vs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if vs.len() < 4 {
            continue;
        }
        if !vs
            .iter()
            .all(|&v| vs.iter().filter(|&&u| u != v && adj(u, v)).count() == 2)
        {
            continue;
        }
        let mut seen = vec![vs[0]];
        let mut stack = vec![vs[0]];
        while let Some(v) = stack.pop() {
            for &u in &vs {
                if u != v && adj(u, v) && !seen.contains(&u) {
                    seen.push(u);
                    stack.push(u);
                }
            }
        }
        if seen.len() == vs.len() {
            return false;
        }
    }
    true
}

/// Brute-force conformality: every clique of the primal graph lies inside
/// some edge.
pub fn brute_conformal(h: &Hypergraph) -> bool {
    let verts: Vec<&Attribute> = h.vertices().iter().collect();
    let n = verts.len();
    let adj = |a: usize, b: usize| {
        h.edges()
            .iter()
            .any(|e| e.contains(verts[a]) && e.contains(verts[b]))
    };
    for mask in 1u32..(1 << n) {
        let vs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if vs.len() < 2 {
            continue;
        }
        let clique = vs
            .iter()
            .all(|&a| vs.iter().all(|&b| a == b || adj(a, b)));
        if clique && !h.edges().iter().any(|e| vs.iter().all(|&v| e.contains(verts[v]))) {
            return false;
        }
    }
    true
}

/// Brute-force running intersection: dynamic programming over the set of
/// already listed edges.
pub fn brute_running_intersection(h: &Hypergraph) -> bool {
    let edges = h.edges();
    let m = edges.len();
    let mut reachable = vec![false; 1 << m];
    for (i, _) in edges.iter().enumerate() {
        reachable[1 << i] = true;
    }
    for mask in 1usize..(1 << m) {
        if !reachable[mask] {
            continue;
        }
        let prefix = (0..m)
            .filter(|j| mask >> j & 1 == 1)
            .fold(Schema::empty(), |acc, j| acc.union(&edges[j]));
        for i in (0..m).filter(|i| mask >> i & 1 == 0) {
            let overlap = edges[i].intersection(&prefix);
            if (0..m).any(|j| mask >> j & 1 == 1 && overlap.is_subset(&edges[j])) {
                reachable[mask | 1 << i] = true;
            }
        }
    }
    reachable[(1 << m) - 1]
}
