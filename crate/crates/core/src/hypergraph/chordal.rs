use super::Graph;

/// Maximum-cardinality search. Returns an elimination ordering: the reverse
/// of the visit order, so that for a chordal graph it is a perfect
/// elimination ordering. Ties are broken by lowest vertex index.
pub fn maximum_cardinality_search(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut visit_order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("an unvisited vertex remains");
        visited[v] = true;
        visit_order.push(v);
        for &u in g.neighbors(v) {
            if !visited[u] {
                weight[u] += 1;
            }
        }
    }
    visit_order.reverse();
    visit_order
}

/// Checks that `order` is a perfect elimination ordering: for every vertex,
/// its neighbors later in the order form a clique. Uses the usual
/// parent-containment test.
pub fn is_perfect_elimination_order(g: &Graph, order: &[usize]) -> bool {
    let n = g.vertex_count();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    for &v in order {
        let later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        let Some(&parent) = later.iter().min_by_key(|&&u| pos[u]) else {
            continue;
        };
        if later
            .iter()
            .any(|&u| u != parent && !g.neighbors(parent).contains(&u))
        {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    // Brute-force chordality: search every vertex subset of size >= 4 for
    // an induced cycle.
    fn has_chordless_cycle(g: &Graph) -> bool {
        let n = g.vertex_count();
        for mask in 0u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if vs.len() < 4 {
                continue;
            }
            let deg_ok = vs.iter().all(|&v| {
                g.neighbors(v).iter().filter(|u| vs.contains(u)).count() == 2
            });
            if !deg_ok {
                continue;
            }
            // connected?
            let mut seen = vec![vs[0]];
            let mut stack = vec![vs[0]];
            while let Some(v) = stack.pop() {
                for &u in g.neighbors(v) {
                    if vs.contains(&u) && !seen.contains(&u) {
                        seen.push(u);
                        stack.push(u);
                    }
                }
            }
            if seen.len() == vs.len() {
                return true;
            }
        }
        false
    }

    #[test]
    fn mcs_matches_brute_force_on_small_graphs() {
        let cases = [
            Hypergraph::cycle(4),
            Hypergraph::cycle(5),
            Hypergraph::clique_complement(5),
            Hypergraph::path(6),
            Hypergraph::from_names(
                &["A", "B", "C", "D", "E"],
                &[&["A", "B"], &["B", "C"], &["C", "D"], &["D", "A"], &["A", "C"], &["D", "E"]],
            )
            .unwrap(),
        ];
        for h in cases {
            let g = h.primal_graph();
            assert_eq!(g.is_chordal(), !has_chordless_cycle(&g), "{h}");
        }
    }

    #[test]
    fn rejects_malformed_orders() {
        let g = Hypergraph::path(3).primal_graph();
        assert!(!is_perfect_elimination_order(&g, &[0, 1]));
        assert!(!is_perfect_elimination_order(&g, &[0, 0, 1]));
        // eliminating the middle of a path first is not perfect
        assert!(!is_perfect_elimination_order(&g, &[1, 0, 2]));
        assert!(is_perfect_elimination_order(&g, &[0, 1, 2]));
    }
}
