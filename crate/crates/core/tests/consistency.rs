mod common;

use std::collections::BTreeMap;

use bagcons::consistency::{
    acyclic_global_witness, clique_hardness_lift, counterexample_for, cycle_hardness_lift,
    encode_3dct, global_consistent, inconsistent_pairs, k_wise_consistent, lift_collection,
    tseitin_counterexample, ContingencyTables, GlobalMode, GlobalVerdict,
};
use bagcons::oracle::{check_witness, solve_feasibility, Feasibility};
use bagcons::{Attribute, Bag, BagDatabase, Error, Hypergraph, OracleBudget, SafeDeletionOp, Schema};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle_verdict(db: &BagDatabase) -> bool {
    match solve_feasibility(db, &OracleBudget::default()) {
        Feasibility::Feasible(w) => {
            assert!(check_witness(&w, db).unwrap());
            true
        }
        Feasibility::Infeasible => false,
        Feasibility::Exhausted(why) => panic!("oracle exhausted: {why}"),
    }
}

/// Grows `h0` by random inverse safe deletions; returns the larger
/// hypergraph and the forward deletion sequence back to `h0`.
fn grow<R: Rng>(rng: &mut R, h0: &Hypergraph, steps: usize) -> (Hypergraph, Vec<SafeDeletionOp>) {
    let mut edges = h0.edges().to_vec();
    let mut vertices = h0.vertices().clone();
    let mut ops = Vec::new();
    let mut fresh = 0;
    for _ in 0..steps {
        if rng.gen_bool(0.5) {
            // re-insert a proper, new subset of some edge
            let j = rng.gen_range(0..edges.len());
            let attrs: Vec<Attribute> = edges[j].iter().cloned().collect();
            if attrs.len() < 2 {
                continue;
            }
            let k = rng.gen_range(1..attrs.len());
            let x = Schema::new(attrs.choose_multiple(rng, k).cloned()).unwrap();
            if edges.contains(&x) {
                continue;
            }
            let i = rng.gen_range(0..=edges.len());
            edges.insert(i, x);
            let cover = if j >= i { j + 1 } else { j };
            ops.push(SafeDeletionOp::DeleteCoveredEdge { edge: i, cover });
        } else {
            fresh += 1;
            let a = Attribute::new(format!("N{fresh}")).unwrap();
            for e in edges.iter_mut() {
                if rng.gen_bool(0.5) {
                    *e = e.with(a.clone());
                }
            }
            if rng.gen_bool(0.3) {
                let i = rng.gen_range(0..=edges.len());
                edges.insert(i, Schema::new([a.clone()]).unwrap());
            }
            vertices = vertices.with(a.clone());
            ops.push(SafeDeletionOp::DeleteVertex(a));
        }
    }
    ops.reverse();
    (Hypergraph::new(vertices, edges).unwrap(), ops)
}

fn seed_database(seed: u64) -> BagDatabase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match seed % 3 {
        0 => tseitin_counterexample(&Hypergraph::cycle(3)).unwrap(),
        1 => common::consistent_database(&mut rng, &Hypergraph::cycle(3), 3, 2, 2).0,
        _ => {
            let h = Hypergraph::path(3);
            let bags = h
                .edges()
                .iter()
                .map(|e| common::random_bag(&mut rng, e, 2, 2, 2))
                .collect();
            BagDatabase::new(h, bags).unwrap()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn lifting_preserves_pairwise_and_global_verdicts(seed in any::<u64>(), steps in 0usize..5) {
        let d0 = seed_database(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let (h1, ops) = grow(&mut rng, d0.hypergraph(), steps);
        let d1 = lift_collection(&d0, &h1, &ops, &BTreeMap::new()).unwrap();
        prop_assert_eq!(d1.hypergraph(), &h1);
        prop_assert_eq!(inconsistent_pairs(&d0).is_empty(), inconsistent_pairs(&d1).is_empty());
        prop_assert_eq!(oracle_verdict(&d0), oracle_verdict(&d1));
    }

    #[test]
    fn acyclic_witnesses_respect_the_bounds(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = common::random_acyclic_hypergraph(&mut rng, 5, 3, 10);
        let (db, _) = common::consistent_database(&mut rng, &h, 5, 2, 5);
        let w = acyclic_global_witness(&db).unwrap().unwrap();
        prop_assert!(check_witness(&w, &db).unwrap());
        let sum: usize = db.bags().iter().map(Bag::support_size).sum();
        prop_assert!(w.support_size() <= sum);
        let max = db.bags().iter().map(Bag::max_multiplicity).max().unwrap();
        prop_assert!(w.max_multiplicity() <= max);
    }

    #[test]
    fn counterexamples_exist_for_cyclic_schemas(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = common::random_hypergraph(&mut rng, 6, 3..=6, 2, 3);
        match counterexample_for(&h) {
            Err(_) => prop_assert!(h.is_acyclic()),
            Ok(db) => {
                prop_assert!(!h.is_acyclic());
                prop_assert_eq!(db.hypergraph(), &h);
                prop_assert!(inconsistent_pairs(&db).is_empty());
                prop_assert!(!oracle_verdict(&db));
            }
        }
    }
}

#[test]
fn lift_examples() {
    // empty ops: identity
    let d0 = common::triangle();
    let same = lift_collection(&d0, d0.hypergraph(), &[], &BTreeMap::new()).unwrap();
    assert_eq!(same, d0);

    // triangle counterexample lifted onto four vertices
    let h = Hypergraph::from_names(
        &["A1", "A2", "A3", "A4"],
        &[&["A1", "A2", "A4"], &["A2", "A3"], &["A1", "A3"], &["A4"]],
    )
    .unwrap();
    let db = counterexample_for(&h).unwrap();
    assert_eq!(db.hypergraph().vertices().len(), 4);
    assert!(inconsistent_pairs(&db).is_empty());
    assert!(!oracle_verdict(&db));

    // defaults override the padding value
    let h1 = Hypergraph::from_names(&["A", "B", "C"], &[&["A", "B", "C"]]).unwrap();
    let d0 = BagDatabase::from_bags(vec![Bag::from_rows(&["A", "B"], &[(&["1", "2"], 4)]).unwrap()]).unwrap();
    let c = Attribute::new("C").unwrap();
    let defaults = BTreeMap::from([(c.clone(), "z".to_string())]);
    let d1 = lift_collection(&d0, &h1, &[SafeDeletionOp::DeleteVertex(c)], &defaults).unwrap();
    assert_eq!(d1.bags()[0], Bag::from_rows(&["A", "B", "C"], &[(&["1", "2", "z"], 4)]).unwrap());

    // operations that do not lead to the schema of the collection
    let wrong = Hypergraph::from_names(&["A", "B"], &[&["A", "B"], &["A"]]).unwrap();
    assert!(lift_collection(&d0, &wrong, &[], &BTreeMap::new()).is_err());
}

#[test]
fn tseitin_examples() {
    let c3 = tseitin_counterexample(&Hypergraph::cycle(3)).unwrap();
    let even = Bag::from_rows(&["A1", "A2"], &[(&["0", "0"], 1), (&["1", "1"], 1)]).unwrap();
    assert_eq!(c3.bags()[0], even);
    let odd = Bag::from_rows(&["A1", "A3"], &[(&["0", "1"], 1), (&["1", "0"], 1)]).unwrap();
    assert_eq!(c3.bags()[2], odd);
    let h4 = tseitin_counterexample(&Hypergraph::clique_complement(4)).unwrap();
    assert!(h4.bags().iter().all(|b| b.support_size() == 9));
    assert!(matches!(tseitin_counterexample(&Hypergraph::path(4)), Err(Error::Precondition(_))));
}

#[test]
fn hardness_lift_examples() {
    // empty bags stay empty
    let h = Hypergraph::cycle(3);
    let empty = BagDatabase::new(h.clone(), h.edges().iter().map(|e| Bag::empty(e.clone())).collect()).unwrap();
    let lifted = cycle_hardness_lift(&empty).unwrap();
    assert!(lifted.bags().iter().all(Bag::is_empty));
    assert!(oracle_verdict(&lifted));
    assert!(cycle_hardness_lift(&common::chain_database(3)).is_err());

    // all multiplicities M on full 3x3 grids: the second layer is M (D_i - 1)
    let (m, d) = (3u64, 3u32);
    let hn = Hypergraph::clique_complement(3);
    let vals: Vec<String> = (0..d).map(|v| v.to_string()).collect();
    let cells: Vec<[&str; 2]> = vals.iter().flat_map(|a| vals.iter().map(move |b| [a.as_str(), b.as_str()])).collect();
    let full = |e: &Schema| {
        let rows: Vec<(&[&str], u64)> = cells.iter().map(|r| (&r[..], m)).collect();
        Bag::from_rows(&e.names(), &rows).unwrap()
    };
    let db = BagDatabase::new(hn.clone(), hn.edges().iter().map(full).collect()).unwrap();
    let lifted = clique_hardness_lift(&db).unwrap();
    let layer = Attribute::new("A4").unwrap();
    for b in &lifted.bags()[..3] {
        assert_eq!(b.support_size(), 18);
        for (t, mult) in b.iter() {
            let expected = if t.get(&layer) == Some("2") { m * (d as u64 - 1) } else { m };
            assert_eq!(mult, &BigUint::from(expected), "{t}");
        }
    }
    assert!(lifted.bags()[3].iter().all(|(_, x)| *x == BigUint::from(m)));
    assert_eq!(lifted.bags()[3].support_size(), 27);
}

#[test]
fn contingency_table_examples() {
    let zero = ContingencyTables::from_u64(&[vec![0, 0], vec![0, 0]], &[vec![0, 0], vec![0, 0]], &[vec![0, 0], vec![0, 0]]);
    let report = global_consistent(&encode_3dct(&zero).unwrap(), GlobalMode::Oracle);
    assert_eq!(report.global, GlobalVerdict::Consistent);
    assert!(report.witness.unwrap().is_empty());

    let one = ContingencyTables::from_u64(&[vec![5]], &[vec![5]], &[vec![5]]);
    let report = global_consistent(&encode_3dct(&one).unwrap(), GlobalMode::Oracle);
    let w = report.witness.unwrap();
    assert_eq!(w, Bag::from_rows(&["X", "Y", "Z"], &[(&["1", "1", "1"], 5)]).unwrap());

    let tri = ContingencyTables::from_u64(&[vec![1, 0], vec![0, 1]], &[vec![0, 1], vec![1, 0]], &[vec![1, 0], vec![0, 1]]);
    let db = encode_3dct(&tri).unwrap();
    assert!(inconsistent_pairs(&db).is_empty());
    assert_eq!(global_consistent(&db, GlobalMode::Oracle).global, GlobalVerdict::Inconsistent);

    let v = serde_json::json!({ "R": [[1, "2"]], "C": [[1]], "F": [[1]] });
    let t = ContingencyTables::from_json(&v).unwrap();
    assert!(encode_3dct(&t).is_err());
}

#[test]
fn k_wise_and_auto_mode() {
    let t = common::triangle();
    let budget = OracleBudget::default();
    assert!(k_wise_consistent(&t, 2, &budget).unwrap());
    assert!(!k_wise_consistent(&t, 3, &budget).unwrap());
    assert_eq!(global_consistent(&t, GlobalMode::Auto).global, GlobalVerdict::Inconsistent);

    // auto mode leaves large cyclic instances undecided
    let big: Vec<(Vec<String>, u64)> = (0..101).map(|i| (vec![i.to_string(), i.to_string()], 1)).collect();
    let bag = |a: &str, b: &str| {
        let rows: Vec<([&str; 2], u64)> = big.iter().map(|(v, m)| ([v[0].as_str(), v[1].as_str()], *m)).collect();
        let rows: Vec<(&[&str], u64)> = rows.iter().map(|(v, m)| (&v[..], *m)).collect();
        Bag::from_rows(&[a, b], &rows).unwrap()
    };
    let db = BagDatabase::from_bags(vec![bag("A", "B"), bag("B", "C"), bag("A", "C")]).unwrap();
    let report = global_consistent(&db, GlobalMode::Auto);
    assert!(report.pairwise);
    assert_eq!(report.global, GlobalVerdict::UnknownCyclic);
    assert_eq!(global_consistent(&db, GlobalMode::Oracle).global, GlobalVerdict::Consistent);
}

#[test]
fn report_json_shape() {
    let report = global_consistent(&common::triangle(), GlobalMode::Oracle);
    let v = report.to_json();
    assert_eq!(v["pairwise"], true);
    assert_eq!(v["global"], "no");
    assert!(v["witness"].is_null());
}
