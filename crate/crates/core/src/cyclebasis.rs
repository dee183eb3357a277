//! Minimum-weight cycle bases of undirected networks.
//!
//! Cycles are stored as bitsets over the network's fixed edge indexing, so
//! GF(2) sums and overlap-parity tests are word operations. The basis
//! computation keeps one witness vector per remaining pivot and repeatedly
//! extracts a minimum-length cycle with odd overlap against the current
//! witness, via breadth-first search in the parity double cover of the
//! graph. Ties between equal-length candidates break lexicographically on
//! the sorted edge list, so identical inputs always produce identical bases.
//!
//! Verification certifies minimality by exhaustive enumeration on small
//! inputs and by a greedy bound over shortest-path candidate cycles
//! otherwise.

use std::collections::VecDeque;
use std::fmt;

use crate::netmodel::UndirectedNetwork;

/// GF(2) vector over the edge indices of a fixed network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    len: usize,
    words: Vec<u64>,
}

impl EdgeSet {
    pub fn empty(len: usize) -> Self {
        EdgeSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn singleton(len: usize, e: usize) -> Self {
        let mut s = Self::empty(len);
        s.insert(e);
        s
    }

    pub fn insert(&mut self, e: usize) {
        self.words[e / 64] |= 1 << (e % 64);
    }

    pub fn contains(&self, e: usize) -> bool {
        self.words[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn toggle(&mut self, e: usize) {
        self.words[e / 64] ^= 1 << (e % 64);
    }

    pub fn xor_assign(&mut self, other: &EdgeSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn odd_overlap(&self, other: &EdgeSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&e| self.contains(e))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// A simple cycle of a network: its edge set plus the cyclic vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub edges: EdgeSet,
    /// Canonical cyclic order: starts at the smallest vertex and walks
    /// toward its smaller neighbour.
    pub vertices: Vec<usize>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// Interpret an edge set as a single simple cycle, or return `None`.
    pub fn from_edge_set(n: &UndirectedNetwork, edges: &EdgeSet) -> Option<Cycle> {
        let count = edges.count();
        if count < 3 {
            return None;
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n.vertex_count()];
        for e in edges.iter() {
            let (u, v) = n.edges()[e];
            incident[u].push(v);
            incident[v].push(u);
        }
        if incident.iter().any(|l| !(l.is_empty() || l.len() == 2)) {
            return None;
        }
        let start = (0..n.vertex_count()).find(|&v| incident[v].len() == 2)?;
        for list in &mut incident {
            list.sort();
        }
        let mut order = vec![start];
        let mut prev = start;
        let mut cur = incident[start][0];
        while cur != start {
            order.push(cur);
            let next = if incident[cur][0] == prev {
                incident[cur][1]
            } else {
                incident[cur][0]
            };
            prev = cur;
            cur = next;
        }
        // A single closed walk must use every edge of the set.
        if order.len() != count {
            return None;
        }
        Some(Cycle {
            edges: edges.clone(),
            vertices: order,
        })
    }

    /// Build a cycle from consecutive vertex indices; checks adjacency.
    pub fn from_vertices(n: &UndirectedNetwork, vertices: &[usize]) -> Option<Cycle> {
        if vertices.len() < 3 {
            return None;
        }
        let mut set = EdgeSet::empty(n.edge_count());
        for i in 0..vertices.len() {
            let u = vertices[i];
            let v = vertices[(i + 1) % vertices.len()];
            set.insert(n.find_edge(u, v)?);
        }
        Cycle::from_edge_set(n, &set)
    }
}

/// An ordered list of basis cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub cycles: Vec<Cycle>,
}

impl CycleBasis {
    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn total_length(&self) -> u64 {
        self.cycles.iter().map(|c| c.len() as u64).sum()
    }
}

/// Incremental GF(2) independence structure (row echelon form by lowest
/// set bit).
#[derive(Debug, Default)]
pub struct Gf2Span {
    rows: Vec<EdgeSet>,
}

impl Gf2Span {
    pub fn new() -> Self {
        Self::default()
    }

    fn reduce(&self, v: &EdgeSet) -> EdgeSet {
        let mut v = v.clone();
        for row in &self.rows {
            let pivot = row.iter().next().unwrap();
            if v.contains(pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Insert if independent of the current span; returns false otherwise.
    pub fn try_insert(&mut self, v: &EdgeSet) -> bool {
        let reduced = self.reduce(v);
        if reduced.is_empty() {
            return false;
        }
        let pivot = reduced.iter().next().unwrap();
        let pos = self
            .rows
            .partition_point(|r| r.iter().next().unwrap() < pivot);
        self.rows.insert(pos, reduced);
        true
    }

    pub fn contains(&self, v: &EdgeSet) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("input is a tree (cycle rank 0); callers handle trees separately")]
pub struct TreeInputError;

/// Compute a minimum-total-length cycle basis.
///
/// Deterministic given the input's canonical vertex order.
pub fn minimal_cycle_basis(n: &UndirectedNetwork) -> Result<CycleBasis, TreeInputError> {
    let r = n.reticulation_number();
    if r == 0 {
        return Err(TreeInputError);
    }
    let chords = cotree_edges(n);
    debug_assert_eq!(chords.len(), r);
    let ne = n.edge_count();
    let mut witnesses: Vec<EdgeSet> = chords
        .iter()
        .map(|&e| EdgeSet::singleton(ne, e))
        .collect();
    let mut cycles = Vec::with_capacity(r);
    for k in 0..r {
        let cyc = min_odd_cycle(n, &witnesses[k])
            .expect("nonzero witness always admits an odd-overlap cycle");
        for j in k + 1..r {
            if cyc.edges.odd_overlap(&witnesses[j]) {
                let (left, right) = witnesses.split_at_mut(j);
                right[0].xor_assign(&left[k]);
            }
        }
        cycles.push(cyc);
    }
    Ok(CycleBasis { cycles })
}

/// Edges outside a breadth-first spanning tree, in edge-index order.
fn cotree_edges(n: &UndirectedNetwork) -> Vec<usize> {
    let nv = n.vertex_count();
    let mut in_tree = vec![false; n.edge_count()];
    let mut seen = vec![false; nv];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in n.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                in_tree[n.find_edge(v, w).unwrap()] = true;
                queue.push_back(w);
            }
        }
    }
    (0..n.edge_count()).filter(|&e| !in_tree[e]).collect()
}

/// Minimum-length simple cycle with odd edge overlap against `orth`.
///
/// Breadth-first search in the parity double cover: crossing an edge of
/// `orth` flips the parity layer, so a shortest path from `(v, 0)` to
/// `(v, 1)` projects to a minimum closed walk through `v` with odd overlap.
/// Any cycle with odd overlap shares a vertex with an `orth` edge, so only
/// those endpoints need to serve as starts. Candidates that do not project
/// to a single simple cycle are discarded; the overall minimum always does.
fn min_odd_cycle(n: &UndirectedNetwork, orth: &EdgeSet) -> Option<Cycle> {
    let nv = n.vertex_count();
    let ne = n.edge_count();
    let mut best: Option<Cycle> = None;
    let mut consider = |cand: Cycle| {
        let better = match &best {
            None => true,
            Some(b) => {
                (cand.len(), cand.edges.to_vec()) < (b.len(), b.edges.to_vec())
            }
        };
        if better {
            best = Some(cand);
        }
    };

    let mut starts: Vec<usize> = orth
        .iter()
        .flat_map(|e| {
            let (u, v) = n.edges()[e];
            [u, v]
        })
        .collect();
    starts.sort();
    starts.dedup();

    let mut dist = vec![u32::MAX; 2 * nv];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; 2 * nv];
    for start in starts {
        dist.fill(u32::MAX);
        parent.fill(None);
        let s0 = 2 * start;
        dist[s0] = 0;
        let mut queue = VecDeque::from([s0]);
        while let Some(state) = queue.pop_front() {
            let (v, parity) = (state / 2, state % 2);
            for &(e, w) in n.incident_edges(v) {
                let flip = orth.contains(e) as usize;
                let next = 2 * w + (parity ^ flip);
                if dist[next] == u32::MAX {
                    dist[next] = dist[state] + 1;
                    parent[next] = Some((state, e));
                    queue.push_back(next);
                }
            }
        }
        let target = 2 * start + 1;
        if dist[target] == u32::MAX {
            continue;
        }
        let mut edges = EdgeSet::empty(ne);
        let mut state = target;
        while let Some((prev, e)) = parent[state] {
            edges.toggle(e);
            state = prev;
        }
        if !edges.odd_overlap(orth) {
            continue;
        }
        if let Some(c) = Cycle::from_edge_set(n, &edges) {
            consider(c);
        }
    }
    best
}

/// Every simple cycle of the network, from the GF(2) combinations of the
/// fundamental cycles. Exponential in the cycle rank; intended for small
/// inputs and test oracles.
pub fn all_simple_cycles(n: &UndirectedNetwork) -> Vec<Cycle> {
    let chords = cotree_edges(n);
    let r = chords.len();
    assert!(r <= 20, "cycle space too large to enumerate ({r} chords)");
    let fundamentals: Vec<EdgeSet> = chords
        .iter()
        .map(|&e| fundamental_cycle(n, e))
        .collect();
    let ne = n.edge_count();
    let mut out = Vec::new();
    for mask in 1u32..(1 << r) {
        let mut acc = EdgeSet::empty(ne);
        for (i, f) in fundamentals.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc.xor_assign(f);
            }
        }
        if let Some(c) = Cycle::from_edge_set(n, &acc) {
            out.push(c);
        }
    }
    out.sort_by_key(|c| (c.len(), c.edges.to_vec()));
    out
}

fn fundamental_cycle(n: &UndirectedNetwork, chord: usize) -> EdgeSet {
    // Tree path between the chord endpoints, plus the chord itself.
    let (from, to) = n.edges()[chord];
    let tree: Vec<usize> = {
        let cot = cotree_edges(n);
        (0..n.edge_count()).filter(|e| !cot.contains(e)).collect()
    };
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n.vertex_count()];
    for &e in &tree {
        let (u, v) = n.edges()[e];
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n.vertex_count()];
    let mut seen = vec![false; n.vertex_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    let mut set = EdgeSet::singleton(n.edge_count(), chord);
    let mut cur = to;
    while let Some((prev, e)) = parent[cur] {
        set.insert(e);
        cur = prev;
    }
    set
}

/// How minimality was certified in a [`BasisReport`].
#[derive(Debug, Clone)]
pub enum MinimalityCheck {
    /// All bases enumerated; `minimum_total` is the true optimum.
    Exhaustive { ok: bool, minimum_total: u64 },
    /// Greedy minimum over shortest-path candidate cycles; a basis whose
    /// total exceeds this bound is certainly not minimal.
    CandidateBound { ok: bool, bound_total: u64 },
}

impl MinimalityCheck {
    pub fn is_ok(&self) -> bool {
        match self {
            MinimalityCheck::Exhaustive { ok, .. } => *ok,
            MinimalityCheck::CandidateBound { ok, .. } => *ok,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BasisReport {
    pub cycles_are_simple: bool,
    pub rank: usize,
    pub expected_rank: usize,
    pub spans_cycle_space: bool,
    pub minimality: MinimalityCheck,
    pub messages: Vec<String>,
}

impl BasisReport {
    pub fn is_ok(&self) -> bool {
        self.cycles_are_simple
            && self.rank == self.expected_rank
            && self.spans_cycle_space
            && self.minimality.is_ok()
    }
}

impl fmt::Display for BasisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "simple={} rank={}/{} spans={} minimal={}",
            self.cycles_are_simple,
            self.rank,
            self.expected_rank,
            self.spans_cycle_space,
            self.minimality.is_ok()
        )?;
        for m in &self.messages {
            write!(f, "; {m}")?;
        }
        Ok(())
    }
}

/// Edge budget below which minimality is certified by full enumeration.
pub const EXHAUSTIVE_MINIMALITY_EDGE_LIMIT: usize = 16;

/// Check a claimed basis: simple cycles of the network, full GF(2) rank,
/// spanning, and minimal total length.
pub fn verify_cycle_basis(n: &UndirectedNetwork, basis: &CycleBasis) -> BasisReport {
    let mut messages = Vec::new();
    let expected_rank = n.reticulation_number();

    let cycles_are_simple = basis.cycles.iter().all(|c| {
        match Cycle::from_edge_set(n, &c.edges) {
            Some(rebuilt) => {
                let ok = rebuilt.vertices.len() == c.vertices.len();
                if !ok {
                    messages.push("cycle vertex order disagrees with edge set".into());
                }
                ok
            }
            None => {
                messages.push("edge set is not a single simple cycle".into());
                false
            }
        }
    });

    let mut span = Gf2Span::new();
    for c in &basis.cycles {
        if !span.try_insert(&c.edges) {
            messages.push("dependent cycle in basis".into());
        }
    }
    let rank = span.rank();

    let spans_cycle_space = cotree_edges(n)
        .iter()
        .all(|&chord| span.contains(&fundamental_cycle(n, chord)));

    let minimality = if n.edge_count() <= EXHAUSTIVE_MINIMALITY_EDGE_LIMIT {
        let (minimum_total, _) = enumerate_minimum_bases(n);
        MinimalityCheck::Exhaustive {
            ok: basis.total_length() == minimum_total,
            minimum_total,
        }
    } else {
        let bound_total = candidate_greedy_total(n);
        MinimalityCheck::CandidateBound {
            ok: basis.total_length() <= bound_total,
            bound_total,
        }
    };

    BasisReport {
        cycles_are_simple,
        rank,
        expected_rank,
        spans_cycle_space,
        minimality,
        messages,
    }
}

/// Enumerate every cycle basis and return the minimum total length together
/// with all index sets (into [`all_simple_cycles`]) attaining it.
pub fn enumerate_minimum_bases(n: &UndirectedNetwork) -> (u64, Vec<Vec<usize>>) {
    let cycles = all_simple_cycles(n);
    let r = n.reticulation_number();
    let mut best = u64::MAX;
    let mut argmin: Vec<Vec<usize>> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        cycles: &[Cycle],
        r: usize,
        start: usize,
        total: u64,
        span: &mut Gf2Span,
        chosen: &mut Vec<usize>,
        best: &mut u64,
        argmin: &mut Vec<Vec<usize>>,
    ) {
        if chosen.len() == r {
            if total < *best {
                *best = total;
                argmin.clear();
            }
            if total == *best {
                argmin.push(chosen.clone());
            }
            return;
        }
        for i in start..cycles.len() {
            let remaining = r - chosen.len();
            if i + remaining > cycles.len() {
                break;
            }
            // Cycles are sorted by length: the cheapest completion uses the
            // next `remaining` cycles.
            let lower: u64 = cycles[i..i + remaining].iter().map(|c| c.len() as u64).sum();
            if total + lower > *best {
                break;
            }
            if !span.try_insert(&cycles[i].edges) {
                continue;
            }
            chosen.push(i);
            rec(cycles, r, i + 1, total + cycles[i].len() as u64, span, chosen, best, argmin);
            chosen.pop();
            // Rebuild the span without cycle i.
            *span = Gf2Span::new();
            for &j in chosen.iter() {
                span.try_insert(&cycles[j].edges);
            }
        }
    }

    let mut span = Gf2Span::new();
    rec(
        &cycles,
        r,
        0,
        0,
        &mut span,
        &mut chosen,
        &mut best,
        &mut argmin,
    );
    (best, argmin)
}

/// Greedy minimum-basis total over shortest-path candidate cycles
/// (one breadth-first tree per root; candidate = tree paths to both
/// endpoints of an edge, plus the edge).
fn candidate_greedy_total(n: &UndirectedNetwork) -> u64 {
    let nv = n.vertex_count();
    let ne = n.edge_count();
    let mut candidates: Vec<EdgeSet> = Vec::new();
    for root in 0..nv {
        // Breadth-first parent edges with sorted adjacency: deterministic.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; nv];
        let mut seen = vec![false; nv];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in n.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, n.find_edge(v, w).unwrap()));
                    queue.push_back(w);
                }
            }
        }
        let path_to = |mut v: usize| {
            let mut set = EdgeSet::empty(ne);
            while let Some((p, e)) = parent[v] {
                set.insert(e);
                v = p;
            }
            set
        };
        for (e, &(u, v)) in n.edges().iter().enumerate() {
            let mut set = path_to(u);
            set.xor_assign(&path_to(v));
            set.toggle(e);
            if Cycle::from_edge_set(n, &set).is_some() {
                candidates.push(set);
            }
        }
    }
    candidates.sort_by_key(|s| (s.count(), s.to_vec()));
    candidates.dedup();

    let r = n.reticulation_number();
    let mut span = Gf2Span::new();
    let mut total = 0u64;
    for cand in &candidates {
        if span.rank() == r {
            break;
        }
        if span.try_insert(cand) {
            total += cand.count() as u64;
        }
    }
    assert_eq!(span.rank(), r, "candidate cycles always span the cycle space");
    total
}

/// Product of the basis cycle sizes: the number of reticulation placements
/// the basis-driven search enumerates.
pub fn search_space_size(basis: &CycleBasis) -> u128 {
    basis
        .cycles
        .iter()
        .map(|c| c.len() as u128)
        .product()
}

/// Number of r-subsets of internal vertices: the placement count of the
/// exhaustive baseline.
pub fn baseline_space_size(n: &UndirectedNetwork) -> u128 {
    binomial(
        (n.vertex_count() - n.leaf_count()) as u128,
        n.reticulation_number() as u128,
    )
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
