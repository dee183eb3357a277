//! Orientation of a network under a fixed root edge and in-degree targets.
//!
//! [`orient_constrained`] inserts the root on the chosen edge and propagates
//! forced edge directions to a fixpoint: an edge is forced away from a vertex
//! once the vertex has received all of its target in-arcs, and forced toward
//! it once its remaining unoriented edges are exactly the in-arcs it still
//! needs. Any orientation satisfying the constraint must agree with every
//! forced move, so the satisfying orientation is unique when it exists.
//!
//! A stalled fixpoint with unoriented edges left is declared infeasible
//! rather than resolved by guessing: at such a fixpoint every vertex of the
//! unoriented subgraph still needs at least one in-arc and one out-arc
//! within it, so any completion meeting the targets has minimum in-degree 1
//! on that subgraph and therefore contains a directed cycle.
//!
//! [`orient_exhaustive_oracle`] independently enumerates all direction
//! assignments of the non-root edges (with sound degree-bound pruning) and
//! is used to certify the propagation solver on small instances.

use crate::netmodel::{DirectedNetwork, UndirectedNetwork};

/// Name of the root vertex materialised by orientation. Input networks never
/// contain it; the input is never mutated.
pub const ROOT_NAME: &str = "__root";

/// Edge budget for the exhaustive oracle (2^|E| enumeration).
pub const ORACLE_EDGE_LIMIT: usize = 22;

/// A root edge plus the set of vertices required to have in-degree 2.
///
/// Validated against a specific network: the root edge must exist, the
/// reticulation set must have size `|E| - |V| + 1` and contain no leaf.
#[derive(Debug, Clone)]
pub struct OrientationConstraint {
    root_edge: (usize, usize),
    reticulations: Vec<usize>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("vertex {0} not in network")]
    UnknownVertex(String),
    #[error("root edge {{{u}, {v}}} not in network")]
    RootEdgeNotInNetwork { u: String, v: String },
    #[error("reticulation set has {got} vertices, cycle rank requires {expected}")]
    WrongReticulationCount { expected: usize, got: usize },
    #[error("leaf {0} cannot be a reticulation")]
    LeafReticulation(String),
    #[error("vertex {0} listed as reticulation twice")]
    DuplicateReticulation(String),
}

impl OrientationConstraint {
    pub fn new(
        n: &UndirectedNetwork,
        root_edge: (usize, usize),
        reticulations: &[usize],
    ) -> Result<Self, ConstraintError> {
        if n.find_edge(root_edge.0, root_edge.1).is_none() {
            return Err(ConstraintError::RootEdgeNotInNetwork {
                u: n.name(root_edge.0).to_string(),
                v: n.name(root_edge.1).to_string(),
            });
        }
        let mut rets: Vec<usize> = reticulations.to_vec();
        rets.sort();
        if let Some(w) = rets.windows(2).find(|w| w[0] == w[1]) {
            return Err(ConstraintError::DuplicateReticulation(
                n.name(w[0]).to_string(),
            ));
        }
        if rets.len() != n.reticulation_number() {
            return Err(ConstraintError::WrongReticulationCount {
                expected: n.reticulation_number(),
                got: rets.len(),
            });
        }
        if let Some(&v) = rets.iter().find(|&&v| n.is_leaf(v)) {
            return Err(ConstraintError::LeafReticulation(n.name(v).to_string()));
        }
        let (u, v) = root_edge;
        Ok(OrientationConstraint {
            root_edge: (u.min(v), u.max(v)),
            reticulations: rets,
        })
    }

    pub fn by_names(
        n: &UndirectedNetwork,
        root_edge: (&str, &str),
        reticulations: &[&str],
    ) -> Result<Self, ConstraintError> {
        let resolve = |name: &str| {
            n.vertex(name)
                .ok_or_else(|| ConstraintError::UnknownVertex(name.to_string()))
        };
        let u = resolve(root_edge.0)?;
        let v = resolve(root_edge.1)?;
        let rets = reticulations
            .iter()
            .map(|r| resolve(r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, (u, v), &rets)
    }

    pub fn root_edge(&self) -> (usize, usize) {
        self.root_edge
    }

    pub fn reticulations(&self) -> &[usize] {
        &self.reticulations
    }

    /// Target in-degree: 2 on the reticulation set, 1 elsewhere.
    pub fn desired_indegree(&self, v: usize) -> usize {
        if self.reticulations.binary_search(&v).is_ok() {
            2
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ConstrainedStats {
    pub edges_oriented: usize,
    pub propagation_steps: u64,
}

#[derive(Debug, Clone)]
pub enum ConstrainedVerdict {
    Feasible(DirectedNetwork),
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct ConstrainedResult {
    pub verdict: ConstrainedVerdict,
    pub stats: ConstrainedStats,
}

impl ConstrainedResult {
    pub fn network(&self) -> Option<&DirectedNetwork> {
        match &self.verdict {
            ConstrainedVerdict::Feasible(d) => Some(d),
            ConstrainedVerdict::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, ConstrainedVerdict::Feasible(_))
    }
}

/// A satisfying orientation over vertex indices, before any name
/// materialisation. The root is implicitly vertex `|V|`.
#[derive(Debug, Clone)]
pub(crate) struct IndexedOrientation {
    pub root_edge_id: usize,
    /// Tail endpoint per edge id; `usize::MAX` on the root edge.
    pub tail: Vec<usize>,
}

impl IndexedOrientation {
    /// In-degrees over `0..=|V|` with the root at index `|V|`.
    pub fn indegrees(&self, n: &UndirectedNetwork) -> Vec<u8> {
        let nv = n.vertex_count();
        let mut indeg = vec![0u8; nv + 1];
        let (ru, rv) = n.edges()[self.root_edge_id];
        indeg[ru] += 1;
        indeg[rv] += 1;
        for (e, &(u, v)) in n.edges().iter().enumerate() {
            if e == self.root_edge_id {
                continue;
            }
            let to = if self.tail[e] == u { v } else { u };
            indeg[to] += 1;
        }
        indeg
    }
}

pub(crate) fn materialize_orientation(
    n: &UndirectedNetwork,
    ix: &IndexedOrientation,
) -> DirectedNetwork {
    build_network(n, ix.root_edge_id, |e| ix.tail[e])
        .expect("degree targets and acyclicity already verified")
}

/// Find the unique orientation satisfying the constraint, if any.
pub fn orient_constrained(
    n: &UndirectedNetwork,
    c: &OrientationConstraint,
) -> ConstrainedResult {
    let (stats, indexed) = orient_constrained_indexed(n, c);
    ConstrainedResult {
        verdict: match indexed {
            Some(ix) => ConstrainedVerdict::Feasible(materialize_orientation(n, &ix)),
            None => ConstrainedVerdict::Infeasible,
        },
        stats,
    }
}

/// Index-level propagation core shared by the public entry point and the
/// solvers' hot loop.
pub(crate) fn orient_constrained_indexed(
    n: &UndirectedNetwork,
    c: &OrientationConstraint,
) -> (ConstrainedStats, Option<IndexedOrientation>) {
    let nv = n.vertex_count();
    let root_edge_id = n
        .find_edge(c.root_edge.0, c.root_edge.1)
        .expect("constraint validated against this network");

    // Direction per edge id: None = unoriented, Some(v) = oriented away
    // from endpoint v. The root edge never participates.
    let mut tail: Vec<Option<usize>> = vec![None; n.edge_count()];
    let mut in_count = vec![0usize; nv];
    let mut out_count = vec![0usize; nv];
    let mut unoriented = vec![0usize; nv];
    for (e, &(u, v)) in n.edges().iter().enumerate() {
        if e == root_edge_id {
            continue;
        }
        unoriented[u] += 1;
        unoriented[v] += 1;
    }
    // The two root arcs are in place from the start.
    in_count[c.root_edge.0] += 1;
    in_count[c.root_edge.1] += 1;

    let delta: Vec<usize> = (0..nv).map(|v| c.desired_indegree(v)).collect();
    let out_target: Vec<usize> = (0..nv).map(|v| n.degree(v) - delta[v]).collect();

    let mut stats = ConstrainedStats::default();
    let infeasible = |stats: ConstrainedStats| (stats, None);

    let mut queue: std::collections::VecDeque<usize> = (0..nv).collect();
    let mut queued = vec![true; nv];
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        stats.propagation_steps += 1;
        if in_count[v] > delta[v] || out_count[v] > out_target[v] {
            return infeasible(stats);
        }
        let needed_in = delta[v] - in_count[v];
        if unoriented[v] < needed_in {
            return infeasible(stats);
        }
        if unoriented[v] == 0 {
            continue;
        }
        let force_out = needed_in == 0;
        let force_in = needed_in == unoriented[v];
        if !(force_out || force_in) {
            continue;
        }
        for &(e, w) in n.incident_edges(v) {
            if e == root_edge_id || tail[e].is_some() {
                continue;
            }
            let (from, to) = if force_out { (v, w) } else { (w, v) };
            tail[e] = Some(from);
            out_count[from] += 1;
            in_count[to] += 1;
            unoriented[v] -= 1;
            unoriented[w] -= 1;
            stats.edges_oriented += 1;
            if !queued[w] {
                queued[w] = true;
                queue.push_back(w);
            }
        }
        if !queued[v] {
            queued[v] = true;
            queue.push_back(v);
        }
    }

    // Leftover unoriented edges mean any completion meeting the targets
    // would contain a directed cycle; declare infeasible instead of guessing.
    if tail.iter().enumerate().any(|(e, t)| t.is_none() && e != root_edge_id) {
        return infeasible(stats);
    }
    if (0..nv).any(|v| in_count[v] != delta[v] || out_count[v] != out_target[v]) {
        return infeasible(stats);
    }

    // Cheap index-level acyclicity gate before any name materialisation.
    if !assignment_is_acyclic(n, root_edge_id, |e| tail[e].unwrap()) {
        return infeasible(stats);
    }
    let tail: Vec<usize> = tail
        .into_iter()
        .map(|t| t.unwrap_or(usize::MAX))
        .collect();
    (
        stats,
        Some(IndexedOrientation {
            root_edge_id,
            tail,
        }),
    )
}

/// Kahn's check over vertex indices, with the root as index `|V|`.
fn assignment_is_acyclic(
    n: &UndirectedNetwork,
    root_edge_id: usize,
    tail_of: impl Fn(usize) -> usize,
) -> bool {
    let nv = n.vertex_count();
    let (ru, rv) = n.edges()[root_edge_id];
    let mut arcs: Vec<(usize, usize)> = Vec::with_capacity(n.edge_count() + 1);
    arcs.push((nv, ru));
    arcs.push((nv, rv));
    for (e, &(u, v)) in n.edges().iter().enumerate() {
        if e == root_edge_id {
            continue;
        }
        let from = tail_of(e);
        let to = if from == u { v } else { u };
        arcs.push((from, to));
    }
    crate::netmodel::is_acyclic(nv + 1, &arcs)
}

/// Materialise the rooted network for a full direction assignment.
fn build_network(
    n: &UndirectedNetwork,
    root_edge_id: usize,
    tail_of: impl Fn(usize) -> usize,
) -> Result<DirectedNetwork, crate::netmodel::DirectedReport> {
    let (ru, rv) = n.edges()[root_edge_id];
    let mut arcs: Vec<(String, String)> = Vec::with_capacity(n.edge_count() + 1);
    arcs.push((ROOT_NAME.to_string(), n.name(ru).to_string()));
    arcs.push((ROOT_NAME.to_string(), n.name(rv).to_string()));
    for (e, &(u, v)) in n.edges().iter().enumerate() {
        if e == root_edge_id {
            continue;
        }
        let from = tail_of(e);
        let to = if from == u { v } else { u };
        arcs.push((n.name(from).to_string(), n.name(to).to_string()));
    }
    let leaves = n
        .leaves()
        .map(|v| (n.name(v).to_string(), n.label(v).unwrap().to_string()))
        .collect();
    DirectedNetwork::new(arcs, leaves)
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("exhaustive oracle limited to {ORACLE_EDGE_LIMIT} edges, got {edges}")]
pub struct OracleBudgetError {
    pub edges: usize,
}

/// Enumerate every direction assignment of the non-root edges and return all
/// orientations satisfying the constraint.
///
/// Backtracks in edge-index order, pruning a partial assignment only once an
/// endpoint provably exceeds its in- or out-degree target, so the
/// enumeration remains exhaustive. On valid inputs the result has length 0
/// or 1; this is checked by tests, not assumed here.
pub fn orient_exhaustive_oracle(
    n: &UndirectedNetwork,
    c: &OrientationConstraint,
) -> Result<Vec<DirectedNetwork>, OracleBudgetError> {
    if n.edge_count() > ORACLE_EDGE_LIMIT {
        return Err(OracleBudgetError {
            edges: n.edge_count(),
        });
    }
    let nv = n.vertex_count();
    let root_edge_id = n
        .find_edge(c.root_edge.0, c.root_edge.1)
        .expect("constraint validated against this network");
    let free_edges: Vec<usize> = (0..n.edge_count()).filter(|&e| e != root_edge_id).collect();

    let delta: Vec<usize> = (0..nv).map(|v| c.desired_indegree(v)).collect();
    let out_target: Vec<usize> = (0..nv).map(|v| n.degree(v) - delta[v]).collect();
    let mut in_count = vec![0usize; nv];
    let mut out_count = vec![0usize; nv];
    in_count[c.root_edge.0] += 1;
    in_count[c.root_edge.1] += 1;

    let mut tail: Vec<usize> = vec![usize::MAX; n.edge_count()];
    let mut found = Vec::new();

    struct Search<'a> {
        n: &'a UndirectedNetwork,
        root_edge_id: usize,
        free_edges: &'a [usize],
        delta: &'a [usize],
        out_target: &'a [usize],
    }

    impl Search<'_> {
        #[allow(clippy::too_many_arguments)]
        fn recurse(
            &self,
            pos: usize,
            in_count: &mut [usize],
            out_count: &mut [usize],
            tail: &mut [usize],
            found: &mut Vec<DirectedNetwork>,
        ) {
            let Some(&e) = self.free_edges.get(pos) else {
                if (0..self.n.vertex_count())
                    .all(|v| in_count[v] == self.delta[v] && out_count[v] == self.out_target[v])
                    && assignment_is_acyclic(self.n, self.root_edge_id, |e| tail[e])
                {
                    let d = build_network(self.n, self.root_edge_id, |e| tail[e])
                        .expect("degrees and acyclicity verified");
                    found.push(d);
                }
                return;
            };
            let (u, v) = self.n.edges()[e];
            for (from, to) in [(u, v), (v, u)] {
                if in_count[to] + 1 > self.delta[to] || out_count[from] + 1 > self.out_target[from]
                {
                    continue;
                }
                in_count[to] += 1;
                out_count[from] += 1;
                tail[e] = from;
                self.recurse(pos + 1, in_count, out_count, tail, found);
                tail[e] = usize::MAX;
                in_count[to] -= 1;
                out_count[from] -= 1;
            }
        }
    }

    Search {
        n,
        root_edge_id,
        free_edges: &free_edges,
        delta: &delta,
        out_target: &out_target,
    }
    .recurse(0, &mut in_count, &mut out_count, &mut tail, &mut found);
    Ok(found)
}
