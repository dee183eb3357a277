//! Isomorphism checks for undirected networks.
//!
//! Leaf labels must map to each other, which anchors the search: exact
//! matching backtracks from the labelled leaves and is only intended for
//! small instances. Larger networks are compared by a label-preserving
//! fingerprint instead.

use super::UndirectedNetwork;

/// Largest vertex count for which [`same_topology`] uses the exact check.
pub const EXACT_ISO_LIMIT: usize = 20;

/// Exact label-preserving isomorphism test via backtracking.
pub fn isomorphic_exact(a: &UndirectedNetwork, b: &UndirectedNetwork) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut deg_a: Vec<usize> = (0..a.vertex_count()).map(|v| a.degree(v)).collect();
    let mut deg_b: Vec<usize> = (0..b.vertex_count()).map(|v| b.degree(v)).collect();
    deg_a.sort();
    deg_b.sort();
    if deg_a != deg_b {
        return false;
    }

    // Leaves are forced by their labels.
    let nv = a.vertex_count();
    let mut map = vec![usize::MAX; nv];
    let mut used = vec![false; nv];
    for v in a.leaves() {
        let label = a.label(v).unwrap();
        let Some(w) = b.leaves().find(|&w| b.label(w) == Some(label)) else {
            return false;
        };
        map[v] = w;
        used[w] = true;
    }

    // Order the remaining vertices so each is adjacent to an earlier one.
    let mut order = Vec::new();
    {
        let mut seen: Vec<bool> = (0..nv).map(|v| map[v] != usize::MAX).collect();
        let mut frontier: Vec<usize> = a.leaves().collect();
        while let Some(v) = frontier.pop() {
            for &w in a.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                    frontier.push(w);
                }
            }
        }
        // Connected input means everything is reachable from a leaf.
        if order.len() + a.leaf_count() != nv {
            return false;
        }
    }

    fn extend(
        a: &UndirectedNetwork,
        b: &UndirectedNetwork,
        order: &[usize],
        pos: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&v) = order.get(pos) else {
            // All vertices matched; edge counts agree, so it suffices that
            // every edge of `a` maps to an edge of `b`.
            return a
                .edges()
                .iter()
                .all(|&(x, y)| b.find_edge(map[x], map[y]).is_some());
        };
        for w in 0..b.vertex_count() {
            if used[w] || b.degree(w) != a.degree(v) || b.is_leaf(w) {
                continue;
            }
            let consistent = a.neighbors(v).iter().all(|&u| {
                map[u] == usize::MAX || b.find_edge(map[u], w).is_some()
            });
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if extend(a, b, order, pos + 1, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[w] = false;
        }
        false
    }

    extend(a, b, &order, 0, &mut map, &mut used)
}

/// Label-preserving fingerprint: the sorted degree sequence plus the sorted
/// edge list after every vertex is renamed to its signature of
/// `(leaf label, distance)` pairs.
///
/// Equal networks always produce equal fingerprints; unequal fingerprints
/// prove non-isomorphism. Collisions are possible but not expected on the
/// networks this library handles.
pub fn fingerprint(n: &UndirectedNetwork) -> String {
    let mut leaf_list: Vec<usize> = n.leaves().collect();
    leaf_list.sort_by(|&x, &y| n.label(x).cmp(&n.label(y)));
    let dists: Vec<Vec<u32>> = leaf_list.iter().map(|&v| n.distances_from(v)).collect();

    let signature = |v: usize| -> String {
        if let Some(l) = n.label(v) {
            return format!("L[{l}]");
        }
        let parts: Vec<String> = leaf_list
            .iter()
            .enumerate()
            .map(|(i, &leaf)| format!("{}:{}", n.label(leaf).unwrap(), dists[i][v]))
            .collect();
        format!("I[{}]", parts.join(","))
    };

    let mut degrees: Vec<usize> = (0..n.vertex_count()).map(|v| n.degree(v)).collect();
    degrees.sort();
    let mut edge_sigs: Vec<String> = n
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (su, sv) = (signature(u), signature(v));
            if su <= sv {
                format!("{su}--{sv}")
            } else {
                format!("{sv}--{su}")
            }
        })
        .collect();
    edge_sigs.sort();
    format!(
        "deg={:?};edges={}",
        degrees,
        edge_sigs.join(";")
    )
}

/// Exact isomorphism for small networks, fingerprint equality otherwise.
pub fn same_topology(a: &UndirectedNetwork, b: &UndirectedNetwork) -> bool {
    if a.vertex_count() <= EXACT_ISO_LIMIT && b.vertex_count() <= EXACT_ISO_LIMIT {
        isomorphic_exact(a, b)
    } else {
        fingerprint(a) == fingerprint(b)
    }
}
