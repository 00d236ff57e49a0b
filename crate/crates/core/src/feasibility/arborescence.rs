//! Minimum spanning arborescence on dense digraphs (Chu-Liu/Edmonds).

/// Weight of the minimum spanning arborescence rooted at `root`.
///
/// `weights[u][v]` is the weight of arc `u -> v`; `None` marks a missing arc.
/// Returns `None` when some node is unreachable from `root`.
pub fn min_arborescence(weights: &[Vec<Option<i64>>], root: usize) -> Option<i64> {
    let n = weights.len();
    assert!(root < n, "root {root} out of range for {n} nodes");
    let mut edges: Vec<(usize, usize, i64)> = Vec::with_capacity(n * n);
    for (u, row) in weights.iter().enumerate() {
        assert_eq!(row.len(), n, "weight matrix must be square");
        for (v, w) in row.iter().enumerate() {
            if let Some(w) = *w {
                if u != v && v != root {
                    edges.push((u, v, w));
                }
            }
        }
    }
    chu_liu_edmonds(n, root, edges)
}

/// Minimum over all roots of the minimum spanning arborescence of a complete
/// digraph given as a dense matrix (diagonal ignored). A single node has weight 0.
///
/// Solved in one pass by attaching a virtual root whose arcs are heavier
/// than any arborescence, so the optimum uses exactly one of them.
pub fn min_arborescence_any_root(weights: &[Vec<i64>]) -> i64 {
    let n = weights.len();
    if n <= 1 {
        return 0;
    }
    let big: i64 = 1 + weights
        .iter()
        .enumerate()
        .flat_map(|(u, row)| row.iter().enumerate().filter(move |&(v, _)| u != v).map(|(_, w)| w.abs()))
        .sum::<i64>();
    let root = n;
    let mut edges = Vec::with_capacity(n * n);
    for (u, row) in weights.iter().enumerate() {
        for (v, &w) in row.iter().enumerate() {
            if u != v {
                edges.push((u, v, w));
            }
        }
        edges.push((root, u, big));
    }
    chu_liu_edmonds(n + 1, root, edges).expect("virtual root reaches every node") - big
}

fn chu_liu_edmonds(mut n: usize, mut root: usize, mut edges: Vec<(usize, usize, i64)>) -> Option<i64> {
    const NONE: usize = usize::MAX;
    let mut total = 0i64;
    loop {
        // cheapest incoming arc per node
        let mut best_in = vec![i64::MAX; n];
        let mut pred = vec![NONE; n];
        for &(u, v, w) in &edges {
            if u != v && w < best_in[v] {
                best_in[v] = w;
                pred[v] = u;
            }
        }
        if (0..n).any(|v| v != root && pred[v] == NONE) {
            return None;
        }
        best_in[root] = 0;

        // find cycles among the chosen arcs
        let mut comp = vec![NONE; n];
        let mut mark = vec![NONE; n];
        let mut cycles = 0;
        for v in 0..n {
            total += best_in[v];
            let mut x = v;
            while mark[x] != v && comp[x] == NONE && x != root {
                mark[x] = v;
                x = pred[x];
            }
            if x != root && comp[x] == NONE {
                let mut y = pred[x];
                while y != x {
                    comp[y] = cycles;
                    y = pred[y];
                }
                comp[x] = cycles;
                cycles += 1;
            }
        }
        if cycles == 0 {
            return Some(total);
        }
        for c in comp.iter_mut() {
            if *c == NONE {
                *c = cycles;
                cycles += 1;
            }
        }

        // contract
        edges = edges
            .into_iter()
            .filter_map(|(u, v, w)| {
                let (cu, cv) = (comp[u], comp[v]);
                (cu != cv).then(|| (cu, cv, w - best_in[v]))
            })
            .collect();
        n = cycles;
        root = comp[root];
    }
}
