//! Graph model for undirected and directed binary phylogenetic networks.
//!
//! An undirected network is a simple connected graph whose vertex set splits
//! into leaves (degree 1, each carrying a taxon label) and internal vertices
//! (degree 3). A directed network is a rooted DAG with a unique root of
//! in/out-degree (0,2) whose other vertices are tree vertices (1,2),
//! reticulations (2,1) or labelled leaves (1,0).
//!
//! Both types are immutable after construction and validate their invariants
//! on construction; all operations here are pure.

mod iso;

pub use iso::{fingerprint, isomorphic_exact, same_topology};

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

/// Raw undirected input before validation: an edge list plus leaf labels.
#[derive(Debug, Clone, Default)]
pub struct RawUndirected {
    /// Unordered vertex pairs, named by opaque string ids.
    pub edges: Vec<(String, String)>,
    /// `(vertex id, taxon label)` pairs for the degree-1 vertices.
    pub leaves: Vec<(String, String)>,
}

impl RawUndirected {
    pub fn new(edges: &[(&str, &str)], leaves: &[(&str, &str)]) -> Self {
        RawUndirected {
            edges: edges
                .iter()
                .map(|(u, v)| (u.to_string(), v.to_string()))
                .collect(),
            leaves: leaves
                .iter()
                .map(|(v, l)| (v.to_string(), l.to_string()))
                .collect(),
        }
    }
}

/// A single violated structural rule, naming the offending vertex or edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Loop { vertex: String },
    ParallelEdge { u: String, v: String },
    DuplicateLeaf { vertex: String },
    DuplicateLabel { label: String },
    EmptyLabel { vertex: String },
    IsolatedLeaf { vertex: String },
    BadDegree { vertex: String, degree: usize },
    UnlabelledDegreeOne { vertex: String },
    LabelledInternal { vertex: String, degree: usize },
    NotConnected { component_of: String },
    TooFewLeaves { count: usize },
    NoEdges,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Loop { vertex } => write!(f, "loop at vertex {vertex}"),
            Violation::ParallelEdge { u, v } => write!(f, "parallel edge {{{u}, {v}}}"),
            Violation::DuplicateLeaf { vertex } => {
                write!(f, "vertex {vertex} declared as leaf more than once")
            }
            Violation::DuplicateLabel { label } => write!(f, "duplicate leaf label {label}"),
            Violation::EmptyLabel { vertex } => write!(f, "empty label on leaf {vertex}"),
            Violation::IsolatedLeaf { vertex } => {
                write!(f, "leaf {vertex} does not occur in any edge")
            }
            Violation::BadDegree { vertex, degree } => {
                write!(f, "vertex {vertex} has degree {degree}, expected 1 or 3")
            }
            Violation::UnlabelledDegreeOne { vertex } => {
                write!(f, "degree-1 vertex {vertex} is not a labelled leaf")
            }
            Violation::LabelledInternal { vertex, degree } => {
                write!(f, "leaf {vertex} has degree {degree}, expected 1")
            }
            Violation::NotConnected { component_of } => {
                write!(f, "graph is not connected (component of {component_of})")
            }
            Violation::TooFewLeaves { count } => {
                write!(f, "{count} leaves declared, need at least 2")
            }
            Violation::NoEdges => write!(f, "graph has no edges"),
        }
    }
}

/// Report-style outcome of structural validation.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Check every structural rule of an undirected binary phylogenetic network.
///
/// The single-edge graph on two labelled leaves is accepted as the degenerate
/// two-leaf tree.
pub fn validate_undirected(raw: &RawUndirected) -> ValidationReport {
    let mut violations = Vec::new();

    // Collect vertices and adjacency counts, reporting simplicity violations.
    fn intern<'a>(index: &mut BTreeMap<&'a str, usize>, v: &'a str) -> usize {
        let next = index.len();
        *index.entry(v).or_insert(next)
    }
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    let mut seen_edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut normalized: Vec<(usize, usize)> = Vec::new();
    for (u, v) in &raw.edges {
        let ui = intern(&mut index, u);
        let vi = intern(&mut index, v);
        if ui == vi {
            violations.push(Violation::Loop { vertex: u.clone() });
            continue;
        }
        let key = (ui.min(vi), ui.max(vi));
        if seen_edges.insert(key, 1).is_some() {
            violations.push(Violation::ParallelEdge {
                u: u.clone(),
                v: v.clone(),
            });
            continue;
        }
        normalized.push(key);
    }
    if raw.edges.is_empty() {
        violations.push(Violation::NoEdges);
    }

    let nv = index.len();
    let mut degree = vec![0usize; nv];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &(u, v) in &normalized {
        degree[u] += 1;
        degree[v] += 1;
        adj[u].push(v);
        adj[v].push(u);
    }
    let names: Vec<&str> = index.keys().copied().collect();

    // Leaf declarations.
    let mut leaf_of = vec![false; nv];
    let mut labels_seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (v, label) in &raw.leaves {
        match index.get(v.as_str()) {
            None => violations.push(Violation::IsolatedLeaf { vertex: v.clone() }),
            Some(&vi) => {
                if leaf_of[vi] {
                    violations.push(Violation::DuplicateLeaf { vertex: v.clone() });
                    continue;
                }
                leaf_of[vi] = true;
            }
        }
        if label.is_empty() {
            violations.push(Violation::EmptyLabel { vertex: v.clone() });
        } else if labels_seen.insert(label.as_str(), 1).is_some() {
            violations.push(Violation::DuplicateLabel {
                label: label.clone(),
            });
        }
    }
    if raw.leaves.len() < 2 {
        violations.push(Violation::TooFewLeaves {
            count: raw.leaves.len(),
        });
    }

    // Degree partition: degree-1 vertices are exactly the declared leaves,
    // everything else has degree 3.
    for v in 0..nv {
        match degree[v] {
            1 => {
                if !leaf_of[v] {
                    violations.push(Violation::UnlabelledDegreeOne {
                        vertex: names[v].to_string(),
                    });
                }
            }
            3 => {
                if leaf_of[v] {
                    violations.push(Violation::LabelledInternal {
                        vertex: names[v].to_string(),
                        degree: 3,
                    });
                }
            }
            d => {
                if leaf_of[v] && d != 1 {
                    violations.push(Violation::LabelledInternal {
                        vertex: names[v].to_string(),
                        degree: d,
                    });
                } else {
                    violations.push(Violation::BadDegree {
                        vertex: names[v].to_string(),
                        degree: d,
                    });
                }
            }
        }
    }

    // Connectivity.
    if nv > 0 {
        let mut seen = vec![false; nv];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(v) = (0..nv).find(|&v| !seen[v]) {
            violations.push(Violation::NotConnected {
                component_of: names[v].to_string(),
            });
        }
    }

    ValidationReport { violations }
}

/// A validated undirected binary phylogenetic network.
///
/// Vertices are indexed `0..vertex_count()` in canonical order (sorted by
/// name); edges are stored normalized `(lo, hi)` and sorted, giving every
/// edge a stable index used by the cycle-basis machinery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedNetwork {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
    /// Per vertex: (edge id, other endpoint), sorted by neighbour.
    incident: Vec<Vec<(usize, usize)>>,
    edges: Vec<(usize, usize)>,
    labels: BTreeMap<usize, String>,
}

impl UndirectedNetwork {
    pub fn from_raw(raw: &RawUndirected) -> Result<Self, ValidationReport> {
        let report = validate_undirected(raw);
        if !report.is_ok() {
            return Err(report);
        }
        let mut names: Vec<String> = raw
            .edges
            .iter()
            .flat_map(|(u, v)| [u.clone(), v.clone()])
            .collect();
        names.sort();
        names.dedup();
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut edges: Vec<(usize, usize)> = raw
            .edges
            .iter()
            .map(|(u, v)| {
                let (a, b) = (index[u.as_str()], index[v.as_str()]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
        let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); names.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u].push(v);
            adj[v].push(u);
            incident[u].push((e, v));
            incident[v].push((e, u));
        }
        for list in &mut adj {
            list.sort();
        }
        for list in &mut incident {
            list.sort_by_key(|&(_, w)| w);
        }
        let labels = raw
            .leaves
            .iter()
            .map(|(v, l)| (index[v.as_str()], l.clone()))
            .collect();
        Ok(UndirectedNetwork {
            names,
            index,
            adj,
            incident,
            edges,
            labels,
        })
    }

    /// Convenience constructor for fixtures and tests.
    pub fn from_edges(
        edges: &[(&str, &str)],
        leaves: &[(&str, &str)],
    ) -> Result<Self, ValidationReport> {
        Self::from_raw(&RawUndirected::new(edges, leaves))
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Edges as normalized `(lo, hi)` index pairs in canonical (sorted) order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Incident `(edge id, other endpoint)` pairs, sorted by neighbour.
    pub fn incident_edges(&self, v: usize) -> &[(usize, usize)] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.labels.contains_key(&v)
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(|s| s.as_str())
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels.keys().copied()
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|v| !self.is_leaf(*v))
    }

    /// Cycle rank `|E| - |V| + 1`: the number of reticulations any
    /// orientation of this network must contain. Zero exactly for trees.
    pub fn reticulation_number(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// Unweighted shortest-path distances from `src` to every vertex.
    pub fn distances_from(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Length of the shortest path between `u` and `v`.
    pub fn distance(&self, u: usize, v: usize) -> u32 {
        self.distances_from(u)[v]
    }

    pub fn to_raw(&self) -> RawUndirected {
        RawUndirected {
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| (self.names[u].clone(), self.names[v].clone()))
                .collect(),
            leaves: self
                .labels
                .iter()
                .map(|(&v, l)| (self.names[v].clone(), l.clone()))
                .collect(),
        }
    }
}

/// Structural violations of the directed network rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectedViolation {
    Loop { vertex: String },
    ParallelArc { from: String, to: String },
    Cyclic,
    NotConnected { component_of: String },
    NoRoot,
    MultipleRoots { first: String, second: String },
    BadDegrees { vertex: String, indeg: usize, outdeg: usize },
    UnlabelledLeaf { vertex: String },
    LabelMisplaced { vertex: String },
    DuplicateLabel { label: String },
    TooFewLeaves { count: usize },
}

impl fmt::Display for DirectedViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DirectedViolation::*;
        match self {
            Loop { vertex } => write!(f, "loop at {vertex}"),
            ParallelArc { from, to } => write!(f, "parallel arc ({from}, {to})"),
            Cyclic => write!(f, "directed cycle present"),
            NotConnected { component_of } => {
                write!(f, "underlying graph not connected (component of {component_of})")
            }
            NoRoot => write!(f, "no vertex with in-degree 0 and out-degree 2"),
            MultipleRoots { first, second } => {
                write!(f, "multiple in-degree-0 vertices: {first}, {second}")
            }
            BadDegrees { vertex, indeg, outdeg } => write!(
                f,
                "vertex {vertex} has (indeg, outdeg) = ({indeg}, {outdeg})"
            ),
            UnlabelledLeaf { vertex } => write!(f, "sink vertex {vertex} has no label"),
            LabelMisplaced { vertex } => write!(f, "label on non-leaf vertex {vertex}"),
            DuplicateLabel { label } => write!(f, "duplicate label {label}"),
            TooFewLeaves { count } => write!(f, "{count} leaves, need at least 2"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct DirectedReport {
    pub violations: Vec<DirectedViolation>,
}

impl DirectedReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for DirectedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A validated rooted directed binary phylogenetic network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedNetwork {
    names: Vec<String>,
    index: HashMap<String, usize>,
    arcs: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    root: usize,
    labels: BTreeMap<usize, String>,
}

impl DirectedNetwork {
    pub fn new(
        arcs: Vec<(String, String)>,
        leaves: Vec<(String, String)>,
    ) -> Result<Self, DirectedReport> {
        let mut violations = Vec::new();

        let mut names: Vec<String> = arcs
            .iter()
            .flat_map(|(u, v)| [u.clone(), v.clone()])
            .collect();
        names.sort();
        names.dedup();
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let nv = names.len();

        let mut arc_idx: Vec<(usize, usize)> = Vec::with_capacity(arcs.len());
        let mut seen: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        for (u, v) in &arcs {
            let (ui, vi) = (index[u.as_str()], index[v.as_str()]);
            if ui == vi {
                violations.push(DirectedViolation::Loop { vertex: u.clone() });
                continue;
            }
            if seen.insert((ui, vi), ()).is_some() {
                violations.push(DirectedViolation::ParallelArc {
                    from: u.clone(),
                    to: v.clone(),
                });
                continue;
            }
            arc_idx.push((ui, vi));
        }
        arc_idx.sort();

        let mut out_adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
        let mut in_adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for &(u, v) in &arc_idx {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort();
        }

        // Labels.
        let mut labels: BTreeMap<usize, String> = BTreeMap::new();
        let mut label_set: BTreeMap<String, ()> = BTreeMap::new();
        for (v, l) in &leaves {
            if let Some(&vi) = index.get(v.as_str()) {
                labels.insert(vi, l.clone());
                if label_set.insert(l.clone(), ()).is_some() {
                    violations.push(DirectedViolation::DuplicateLabel { label: l.clone() });
                }
            } else {
                violations.push(DirectedViolation::UnlabelledLeaf { vertex: v.clone() });
            }
        }

        // Degree partition and the unique root.
        let mut root = None;
        for v in 0..nv {
            let (indeg, outdeg) = (in_adj[v].len(), out_adj[v].len());
            match (indeg, outdeg) {
                (0, 2) => match root {
                    None => root = Some(v),
                    Some(r) => violations.push(DirectedViolation::MultipleRoots {
                        first: names[r].clone(),
                        second: names[v].clone(),
                    }),
                },
                (1, 2) | (2, 1) => {
                    if labels.contains_key(&v) {
                        violations.push(DirectedViolation::LabelMisplaced {
                            vertex: names[v].clone(),
                        });
                    }
                }
                (1, 0) => {
                    if !labels.contains_key(&v) {
                        violations.push(DirectedViolation::UnlabelledLeaf {
                            vertex: names[v].clone(),
                        });
                    }
                }
                _ => violations.push(DirectedViolation::BadDegrees {
                    vertex: names[v].clone(),
                    indeg,
                    outdeg,
                }),
            }
        }
        let root = match root {
            Some(r) => r,
            None => {
                violations.push(DirectedViolation::NoRoot);
                0
            }
        };
        if labels.len() < 2 {
            violations.push(DirectedViolation::TooFewLeaves {
                count: labels.len(),
            });
        }

        if !is_acyclic(nv, &arc_idx) {
            violations.push(DirectedViolation::Cyclic);
        }

        // Underlying connectivity.
        if nv > 0 {
            let mut seen = vec![false; nv];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(v) = queue.pop_front() {
                for &w in out_adj[v].iter().chain(in_adj[v].iter()) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            if let Some(v) = (0..nv).find(|&v| !seen[v]) {
                violations.push(DirectedViolation::NotConnected {
                    component_of: names[v].clone(),
                });
            }
        }

        if !violations.is_empty() {
            return Err(DirectedReport { violations });
        }
        Ok(DirectedNetwork {
            names,
            index,
            arcs: arc_idx,
            out_adj,
            in_adj,
            root,
            labels,
        })
    }

    pub fn from_arcs(
        arcs: &[(&str, &str)],
        leaves: &[(&str, &str)],
    ) -> Result<Self, DirectedReport> {
        Self::new(
            arcs.iter()
                .map(|(u, v)| (u.to_string(), v.to_string()))
                .collect(),
            leaves
                .iter()
                .map(|(v, l)| (v.to_string(), l.to_string()))
                .collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Arcs as `(from, to)` name pairs, in canonical order.
    pub fn arc_names(&self) -> Vec<(String, String)> {
        self.arcs
            .iter()
            .map(|&(u, v)| (self.names[u].clone(), self.names[v].clone()))
            .collect()
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn outdegree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.labels.contains_key(&v)
    }

    pub fn is_reticulation(&self, v: usize) -> bool {
        self.indegree(v) == 2
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(|s| s.as_str())
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels.keys().copied()
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    pub fn reticulation_count(&self) -> usize {
        (0..self.vertex_count())
            .filter(|&v| self.is_reticulation(v))
            .count()
    }

    /// Every non-leaf vertex has at least one non-reticulation child.
    ///
    /// Leaves count as non-reticulation children. Equivalent to the absence
    /// of both forbidden patterns checked by
    /// [`has_tree_child_forbidden_pattern`](Self::has_tree_child_forbidden_pattern).
    pub fn is_tree_child(&self) -> bool {
        (0..self.vertex_count()).all(|v| {
            self.outdegree(v) == 0
                || self
                    .children(v)
                    .iter()
                    .any(|&c| !self.is_reticulation(c))
        })
    }

    /// Direct scan for the two forbidden patterns: a vertex with two
    /// reticulation children, or a reticulation whose child is a
    /// reticulation.
    pub fn has_tree_child_forbidden_pattern(&self) -> bool {
        let two_ret_children = (0..self.vertex_count()).any(|v| {
            self.children(v)
                .iter()
                .filter(|&&c| self.is_reticulation(c))
                .count()
                >= 2
        });
        let stacked = (0..self.vertex_count()).any(|v| {
            self.is_reticulation(v)
                && self.children(v).iter().any(|&c| self.is_reticulation(c))
        });
        two_ret_children || stacked
    }

    /// No reticulation has a reticulation child.
    pub fn is_stack_free(&self) -> bool {
        !(0..self.vertex_count()).any(|v| {
            self.is_reticulation(v)
                && self.children(v).iter().any(|&c| self.is_reticulation(c))
        })
    }

    /// Remove the root and splice its two child arcs into a single edge,
    /// dropping all orientations.
    ///
    /// Fails if the root's children are already adjacent: splicing would
    /// create a parallel edge, so the orientation is not reconstructible as
    /// a simple undirected network.
    pub fn suppress_root(&self) -> Result<UndirectedNetwork, SuppressError> {
        let cs = self.children(self.root);
        let (a, b) = (cs[0], cs[1]);
        if self.out_adj[a].contains(&b) || self.out_adj[b].contains(&a) {
            return Err(SuppressError::ParallelEdge {
                u: self.names[a].clone(),
                v: self.names[b].clone(),
            });
        }
        let mut edges: Vec<(String, String)> = self
            .arcs
            .iter()
            .filter(|&&(u, _)| u != self.root)
            .map(|&(u, v)| (self.names[u].clone(), self.names[v].clone()))
            .collect();
        edges.push((self.names[a].clone(), self.names[b].clone()));
        let leaves = self
            .labels
            .iter()
            .map(|(&v, l)| (self.names[v].clone(), l.clone()))
            .collect();
        UndirectedNetwork::from_raw(&RawUndirected { edges, leaves })
            .map_err(SuppressError::Invalid)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum SuppressError {
    #[error("suppressing the root would create a parallel edge {{{u}, {v}}}")]
    ParallelEdge { u: String, v: String },
    #[error("suppressed graph is not a valid undirected network: {0}")]
    Invalid(ValidationReport),
}

/// True iff the arc set contains no directed cycle (Kahn's algorithm).
pub fn is_acyclic(num_vertices: usize, arcs: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0usize; num_vertices];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); num_vertices];
    for &(u, v) in arcs {
        indeg[v] += 1;
        out[u].push(v);
    }
    let mut queue: VecDeque<usize> = (0..num_vertices).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop_front() {
        removed += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    removed == num_vertices
}
