//! Seeded random generation of undirected binary phylogenetic networks.
//!
//! Lineages are traced backwards from the present: at each step the process
//! either splits one lineage (creating a future reticulation) with
//! probability `p_r`, or coalesces two lineages, until a single lineage —
//! the root — remains. The raw graph is then made binary by suppressing
//! (in 1, out 1) vertices and locally resolving the non-binary ones, and
//! finally converted to an undirected network by suppressing the root and
//! dropping arc directions.
//!
//! Suppression can collide with an existing arc or edge (the process may,
//! for example, coalesce the two parents of a fresh split directly, which
//! collapses to a parallel arc). Such attempts are discarded and the
//! generation retried with an offset seed; the retry count is recorded.
//!
//! The random stream is ChaCha8 (`rand_chacha`), seeded explicitly, so a
//! configuration reproduces byte-identical output across machines.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netmodel::{DirectedNetwork, SuppressError, UndirectedNetwork};

/// Name of the pseudo-random stream recorded in generated file headers.
pub const RNG_NAME: &str = "chacha8";

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub n_leaves: u32,
    pub p_r: f64,
    pub seed: u64,
    pub max_steps: u64,
}

impl GenConfig {
    pub fn new(n_leaves: u32, p_r: f64, seed: u64) -> Result<Self, GenError> {
        let cfg = GenConfig {
            n_leaves,
            p_r,
            seed,
            max_steps: 100_000,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.n_leaves < 2 {
            return Err(GenError::InvalidConfig(format!(
                "need at least 2 leaves, got {}",
                self.n_leaves
            )));
        }
        // p_r = 1 never coalesces and cannot terminate.
        if !(0.0..1.0).contains(&self.p_r) {
            return Err(GenError::InvalidConfig(format!(
                "split probability must lie in [0, 1), got {}",
                self.p_r
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum GenError {
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("generation exceeded {0} steps")]
    MaxStepsExceeded(u64),
    #[error("gave up after {attempts} attempts (every attempt hit a suppression collision)")]
    TooManyRetries { attempts: u32 },
}

/// One backwards step: which lineages were selected and what happened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenEvent {
    /// Two lineages merge into one new vertex.
    Coalesce(u64, u64),
    /// One lineage splits; its two new parents both point at it.
    Split(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: u32,
    pub taxa_before: Vec<u64>,
    pub event: GenEvent,
    pub new_taxa: Vec<u64>,
    pub new_arcs: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, Default)]
pub struct GenTrace {
    pub steps: Vec<TraceStep>,
    /// Discarded attempts before this trace succeeded.
    pub retries: u32,
}

/// Supplies the event sequence; the random source in production, a script
/// in tests.
pub trait EventSource {
    /// `taxa` is sorted and has at least two entries.
    fn next_event(&mut self, taxa: &[u64]) -> GenEvent;
}

/// Random events: split with probability `p_r`, otherwise coalesce a
/// uniform pair.
pub struct RngEvents<R: Rng> {
    pub p_r: f64,
    pub rng: R,
}

impl<R: Rng> EventSource for RngEvents<R> {
    fn next_event(&mut self, taxa: &[u64]) -> GenEvent {
        if self.rng.random::<f64>() < self.p_r {
            let i = self.rng.random_range(0..taxa.len());
            GenEvent::Split(taxa[i])
        } else {
            let i = self.rng.random_range(0..taxa.len());
            let mut j = self.rng.random_range(0..taxa.len() - 1);
            if j >= i {
                j += 1;
            }
            GenEvent::Coalesce(taxa[i.min(j)], taxa[i.max(j)])
        }
    }
}

/// A fixed event sequence; panics if it diverges from the process state.
pub struct ScriptedEvents {
    events: std::collections::VecDeque<GenEvent>,
}

impl ScriptedEvents {
    pub fn new(events: Vec<GenEvent>) -> Self {
        ScriptedEvents {
            events: events.into(),
        }
    }
}

impl EventSource for ScriptedEvents {
    fn next_event(&mut self, taxa: &[u64]) -> GenEvent {
        let event = self.events.pop_front().expect("script exhausted");
        match &event {
            GenEvent::Coalesce(a, b) => {
                assert!(taxa.contains(a) && taxa.contains(b), "script out of sync")
            }
            GenEvent::Split(a) => assert!(taxa.contains(a), "script out of sync"),
        }
        event
    }
}

/// The raw backwards-process output: arcs point from ancestors to
/// descendants, leaves are the original taxa `1..=n`.
#[derive(Debug, Clone)]
pub struct RawDag {
    pub arcs: Vec<(u64, u64)>,
    pub n_leaves: u32,
    pub root: u64,
}

/// Run the backwards process with a seeded random stream.
pub fn generate_raw_dag(cfg: &GenConfig) -> Result<(RawDag, GenTrace), GenError> {
    cfg.validate()?;
    let mut source = RngEvents {
        p_r: cfg.p_r,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
    };
    generate_raw_dag_with(cfg.n_leaves, &mut source, cfg.max_steps)
}

/// Run the backwards process with an explicit event source.
pub fn generate_raw_dag_with(
    n_leaves: u32,
    source: &mut dyn EventSource,
    max_steps: u64,
) -> Result<(RawDag, GenTrace), GenError> {
    let mut taxa: Vec<u64> = (1..=n_leaves as u64).collect();
    let mut next_id = n_leaves as u64 + 1;
    let mut arcs: Vec<(u64, u64)> = Vec::new();
    let mut trace = GenTrace::default();
    let mut step = 0u32;
    while taxa.len() > 1 {
        if trace.steps.len() as u64 >= max_steps {
            return Err(GenError::MaxStepsExceeded(max_steps));
        }
        step += 1;
        let taxa_before = taxa.clone();
        let event = source.next_event(&taxa);
        let (new_taxa, new_arcs) = match event {
            GenEvent::Coalesce(a, b) => {
                let v = next_id;
                next_id += 1;
                taxa.retain(|&t| t != a && t != b);
                insert_sorted(&mut taxa, v);
                (vec![v], vec![(v, a), (v, b)])
            }
            GenEvent::Split(a) => {
                let (p, q) = (next_id, next_id + 1);
                next_id += 2;
                taxa.retain(|&t| t != a);
                insert_sorted(&mut taxa, p);
                insert_sorted(&mut taxa, q);
                (vec![p, q], vec![(p, a), (q, a)])
            }
        };
        arcs.extend_from_slice(&new_arcs);
        trace.steps.push(TraceStep {
            step,
            taxa_before,
            event,
            new_taxa,
            new_arcs,
        });
    }
    Ok((
        RawDag {
            arcs,
            n_leaves,
            root: taxa[0],
        },
        trace,
    ))
}

fn insert_sorted(v: &mut Vec<u64>, x: u64) {
    let pos = v.partition_point(|&t| t < x);
    v.insert(pos, x);
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum BinarizeError {
    #[error("suppressing vertex {vertex} would duplicate arc ({from}, {to})")]
    ParallelArc { vertex: u64, from: u64, to: u64 },
    #[error("binarized graph failed validation: {0}")]
    Invalid(String),
}

fn vertex_name(id: u64) -> String {
    format!("v{id:05}")
}

/// Suppress (in 1, out 1) vertices and resolve non-binary ones, producing a
/// rooted directed binary network with leaves labelled `x1..xn`.
pub fn binarize_and_suppress(raw: &RawDag) -> Result<DirectedNetwork, BinarizeError> {
    let mut ins: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut outs: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &(u, v) in &raw.arcs {
        ins.entry(u).or_default();
        outs.entry(v).or_default();
        outs.entry(u).or_default().push(v);
        ins.entry(v).or_default().push(u);
    }
    let mut max_id = *ins.keys().max().unwrap_or(&0);

    // Splice out (1, 1) vertices. Splicing never creates new (1, 1)
    // vertices, so one pass over the sorted ids suffices.
    let ids: Vec<u64> = ins.keys().copied().collect();
    for v in ids {
        if ins[&v].len() == 1 && outs[&v].len() == 1 {
            let p = ins[&v][0];
            let c = outs[&v][0];
            if outs[&p].contains(&c) {
                return Err(BinarizeError::ParallelArc {
                    vertex: v,
                    from: p,
                    to: c,
                });
            }
            let out_p = outs.get_mut(&p).unwrap();
            out_p.retain(|&w| w != v);
            out_p.push(c);
            let in_c = ins.get_mut(&c).unwrap();
            in_c.retain(|&w| w != v);
            in_c.push(p);
            ins.remove(&v);
            outs.remove(&v);
        }
    }

    // Resolve non-binary vertices, smallest id first; fresh vertices take
    // consecutive ids past the raw maximum.
    let mut labels: BTreeMap<u64, u32> = (1..=raw.n_leaves as u64)
        .map(|t| (t, t as u32))
        .collect();
    let ids: Vec<u64> = ins.keys().copied().collect();
    for v in ids {
        // In-degree-2 sink: the original taxon becomes a reticulation and a
        // fresh child takes over as the labelled leaf.
        if ins[&v].len() == 2 && outs[&v].is_empty() {
            max_id += 1;
            let leaf = max_id;
            outs.get_mut(&v).unwrap().push(leaf);
            ins.insert(leaf, vec![v]);
            outs.insert(leaf, Vec::new());
            let taxon = labels.remove(&v).expect("only original taxa are sinks");
            labels.insert(leaf, taxon);
        }
        // Too many children: a fresh child takes the two smallest-id
        // out-arcs; repeats until binary. Also covers (2, 2) vertices,
        // which become a reticulation over a fresh tree vertex.
        while outs[&v].len() > 2 || (ins[&v].len() == 2 && outs[&v].len() == 2) {
            max_id += 1;
            let w = max_id;
            let mut children = outs[&v].clone();
            children.sort();
            let moved: Vec<u64> = children.iter().take(2).copied().collect();
            outs.get_mut(&v).unwrap().retain(|c| !moved.contains(c));
            outs.get_mut(&v).unwrap().push(w);
            for &c in &moved {
                let in_c = ins.get_mut(&c).unwrap();
                in_c.retain(|&p| p != v);
                in_c.push(w);
            }
            ins.insert(w, vec![v]);
            outs.insert(w, moved);
        }
    }

    let arcs: Vec<(String, String)> = outs
        .iter()
        .flat_map(|(&u, cs)| {
            let mut cs = cs.clone();
            cs.sort();
            cs.into_iter()
                .map(move |c| (vertex_name(u), vertex_name(c)))
        })
        .collect();
    let leaves: Vec<(String, String)> = labels
        .iter()
        .map(|(&v, &taxon)| (vertex_name(v), format!("x{taxon}")))
        .collect();
    DirectedNetwork::new(arcs, leaves).map_err(|report| BinarizeError::Invalid(report.to_string()))
}

/// Suppress the root and drop orientations.
pub fn to_undirected(d: &DirectedNetwork) -> Result<UndirectedNetwork, SuppressError> {
    d.suppress_root()
}

/// A fully generated instance.
#[derive(Debug, Clone)]
pub struct GeneratedNetwork {
    pub undirected: UndirectedNetwork,
    pub directed: DirectedNetwork,
    pub trace: GenTrace,
    /// `cfg.seed` plus the retry offset that finally succeeded.
    pub seed_used: u64,
}

const MAX_ATTEMPTS: u32 = 256;

/// Run the whole pipeline, retrying with `seed + 1, seed + 2, ...` whenever
/// suppression collides with an existing arc or edge.
pub fn generate_network(cfg: &GenConfig) -> Result<GeneratedNetwork, GenError> {
    cfg.validate()?;
    for retry in 0..MAX_ATTEMPTS {
        let attempt_cfg = GenConfig {
            seed: cfg.seed.wrapping_add(retry as u64),
            ..*cfg
        };
        let (raw, mut trace) = generate_raw_dag(&attempt_cfg)?;
        let Ok(directed) = binarize_and_suppress(&raw) else {
            continue;
        };
        let Ok(undirected) = to_undirected(&directed) else {
            continue;
        };
        trace.retries = retry;
        return Ok(GeneratedNetwork {
            undirected,
            directed,
            trace,
            seed_used: attempt_cfg.seed,
        });
    }
    Err(GenError::TooManyRetries {
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eight_step_script() -> ScriptedEvents {
        ScriptedEvents::new(vec![
            GenEvent::Coalesce(3, 4),
            GenEvent::Split(2),
            GenEvent::Coalesce(1, 6),
            GenEvent::Coalesce(7, 8),
            GenEvent::Split(5),
            GenEvent::Coalesce(9, 10),
            GenEvent::Coalesce(11, 12),
        ])
    }

    #[test]
    fn scripted_trace_reproduces_expected_arcs() {
        let mut script = eight_step_script();
        let (raw, trace) = generate_raw_dag_with(4, &mut script, 100).unwrap();
        let expected: Vec<(u64, u64)> = vec![
            (5, 3),
            (5, 4),
            (6, 2),
            (7, 2),
            (8, 1),
            (8, 6),
            (9, 7),
            (9, 8),
            (10, 5),
            (11, 5),
            (12, 9),
            (12, 10),
            (13, 11),
            (13, 12),
        ];
        assert_eq!(raw.arcs, expected);
        assert_eq!(raw.root, 13);
        assert_eq!(trace.steps.len(), 7);
        assert_eq!(trace.steps[0].taxa_before, vec![1, 2, 3, 4]);
        assert_eq!(trace.steps[1].event, GenEvent::Split(2));
        assert_eq!(trace.steps[1].new_taxa, vec![6, 7]);
        assert_eq!(trace.steps[6].taxa_before, vec![11, 12]);
    }

    #[test]
    fn scripted_trace_binarizes_to_the_expected_network() {
        let mut script = eight_step_script();
        let (raw, _) = generate_raw_dag_with(4, &mut script, 100).unwrap();
        let d = binarize_and_suppress(&raw).unwrap();

        // (1,1) vertices 6, 7, 10, 11 are spliced; taxon 2 becomes a
        // reticulation over a fresh leaf (14) and the (2,2) vertex 5 is
        // split into a reticulation over a fresh tree vertex (15).
        let mut expected: Vec<(String, String)> = [
            (13u64, 12u64),
            (13, 5),
            (12, 9),
            (12, 5),
            (9, 2),
            (9, 8),
            (8, 1),
            (8, 2),
            (2, 14),
            (5, 15),
            (15, 3),
            (15, 4),
        ]
        .iter()
        .map(|&(u, v)| (vertex_name(u), vertex_name(v)))
        .collect();
        expected.sort();
        assert_eq!(d.arc_names(), expected);
        assert_eq!(d.leaf_count(), 4);
        assert_eq!(d.reticulation_count(), 2);
        assert_eq!(d.label(d.vertex(&vertex_name(14)).unwrap()), Some("x2"));
        assert!(d.is_tree_child());

        // Suppressing the root would splice v00012 - root - v00005 onto the
        // existing arc (v00012, v00005): this particular trace collides.
        assert!(matches!(
            to_undirected(&d),
            Err(SuppressError::ParallelEdge { .. })
        ));
    }

    #[test]
    fn zero_split_probability_yields_trees() {
        for seed in 0..20 {
            let cfg = GenConfig::new(8, 0.0, seed).unwrap();
            let net = generate_network(&cfg).unwrap();
            assert_eq!(net.undirected.reticulation_number(), 0);
            assert_eq!(net.undirected.leaf_count(), 8);
            assert!(net
                .trace
                .steps
                .iter()
                .all(|s| matches!(s.event, GenEvent::Coalesce(_, _))));
        }
    }

    #[test]
    fn two_leaf_tree_is_a_cherry() {
        let cfg = GenConfig::new(2, 0.0, 7).unwrap();
        let (raw, trace) = generate_raw_dag(&cfg).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(raw.arcs, vec![(3, 1), (3, 2)]);
        let d = binarize_and_suppress(&raw).unwrap();
        assert_eq!(d.vertex_count(), 3);
        let n = to_undirected(&d).unwrap();
        assert_eq!(n.vertex_count(), 2);
        assert_eq!(n.edge_count(), 1);
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = GenConfig::new(10, 0.12, 42).unwrap();
        let a = generate_network(&cfg).unwrap();
        let b = generate_network(&cfg).unwrap();
        assert_eq!(a.undirected, b.undirected);
        assert_eq!(a.directed.arc_names(), b.directed.arc_names());
        assert_eq!(a.trace.steps, b.trace.steps);
        assert_eq!(a.seed_used, b.seed_used);
    }

    #[test]
    fn generated_networks_satisfy_degree_identities() {
        for seed in 0..60 {
            let cfg = GenConfig::new(10, 0.12, seed * 1000).unwrap();
            let net = generate_network(&cfg).unwrap();
            let n = &net.undirected;
            let (nv, ne, nx) = (n.vertex_count(), n.edge_count(), n.leaf_count());
            let r = n.reticulation_number();
            assert_eq!(nx, 10);
            assert_eq!(nv, 2 * nx + 2 * r - 2);
            assert_eq!(ne, 2 * nx + 3 * r - 3);
            assert_eq!(net.directed.reticulation_count(), r);
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(GenConfig::new(1, 0.1, 0).is_err());
        assert!(GenConfig::new(5, 1.0, 0).is_err());
        assert!(GenConfig::new(5, -0.1, 0).is_err());
        assert!(GenConfig::new(5, 0.99, 0).is_ok());
    }

    /// With 20 leaves and p_r = 0.15 the rank distribution carries a heavy
    /// tail: ranks of 5 and beyond occur regularly.
    #[test]
    fn high_split_probability_has_heavy_tail() {
        let mut tail = 0;
        for seed in 0..200u64 {
            let cfg = GenConfig::new(20, 0.15, 0x7A11_0000 + seed * 1009).unwrap();
            let net = generate_network(&cfg).unwrap();
            if net.undirected.reticulation_number() >= 5 {
                tail += 1;
            }
        }
        assert!(tail >= 10, "only {tail}/200 networks reached rank 5");
    }

    /// Loose distributional check: with 10 leaves and p_r = 0.1 the cycle
    /// rank histogram has its mode at 0 or 1.
    #[test]
    fn reticulation_histogram_mode_is_low() {
        let mut histogram = std::collections::BTreeMap::new();
        for seed in 0..200u64 {
            let cfg = GenConfig::new(10, 0.1, 0xA5A5_0000 + seed).unwrap();
            let net = generate_network(&cfg).unwrap();
            *histogram
                .entry(net.undirected.reticulation_number())
                .or_insert(0u32) += 1;
        }
        let (&mode, _) = histogram.iter().max_by_key(|(_, &count)| count).unwrap();
        assert!(mode <= 1, "mode {mode}, histogram {histogram:?}");
    }
}
