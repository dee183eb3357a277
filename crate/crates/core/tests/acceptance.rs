//! Acceptance suite: one test per shipping criterion.
//!
//! Every test prints an `ACCEPTANCE <id>: PASS — ...` line on success (run
//! with `--nocapture` to see them); a failure prints the measured value in
//! the panic message. Corpora are generated deterministically from fixed
//! seeds and shared across criteria.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netorient::constrained::{
    orient_constrained, orient_exhaustive_oracle, OrientationConstraint,
};
use netorient::cyclebasis::{
    all_simple_cycles, baseline_space_size, minimal_cycle_basis, search_space_size,
    verify_cycle_basis, MinimalityCheck,
};
use netorient::generator::{
    binarize_and_suppress, generate_network, generate_raw_dag_with, to_undirected, GenConfig,
    GenEvent, ScriptedEvents,
};
use netorient::netmodel::{
    is_acyclic, same_topology, validate_undirected, DirectedNetwork, SuppressError,
    UndirectedNetwork,
};
use netorient::solvers::{
    baseline_c_orientation, exact_c_orientation, placement_admissible, tree_child_heuristic,
    ClassPredicate, Outcome,
};

fn pass(id: &str, message: impl AsRef<str>) {
    println!("ACCEPTANCE {id}: PASS — {}", message.as_ref());
}

// ---------------------------------------------------------------------------
// Fixtures

fn two_three_cycles() -> UndirectedNetwork {
    UndirectedNetwork::from_edges(
        &[
            ("a", "b"),
            ("a", "c"),
            ("b", "c"),
            ("a", "d"),
            ("b", "d"),
            ("c", "x1"),
            ("d", "x2"),
        ],
        &[("x1", "t1"), ("x2", "t2")],
    )
    .unwrap()
}

fn three_cycle_four_cycle() -> UndirectedNetwork {
    UndirectedNetwork::from_edges(
        &[
            ("a", "b"),
            ("a", "c"),
            ("b", "c"),
            ("b", "d"),
            ("d", "e"),
            ("e", "a"),
            ("c", "x1"),
            ("d", "x2"),
            ("e", "x3"),
        ],
        &[("x1", "t1"), ("x2", "t2"), ("x3", "t3")],
    )
    .unwrap()
}

fn level_one_two_cycles() -> UndirectedNetwork {
    UndirectedNetwork::from_edges(
        &[
            ("a", "b"),
            ("a", "c"),
            ("b", "c"),
            ("c", "d"),
            ("d", "e"),
            ("d", "f"),
            ("e", "f"),
            ("a", "x1"),
            ("b", "x2"),
            ("e", "x3"),
            ("f", "x4"),
        ],
        &[("x1", "t1"), ("x2", "t2"), ("x3", "t3"), ("x4", "t4")],
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// Shared corpora

struct Solved {
    net: UndirectedNetwork,
    exact: Outcome,
    heuristic: Outcome,
    baseline: Option<Outcome>,
}

fn solve(net: UndirectedNetwork, with_baseline: bool) -> Solved {
    let cls = ClassPredicate::tree_child();
    let exact = exact_c_orientation(&net, &cls);
    let heuristic = tree_child_heuristic(&net);
    let baseline = with_baseline.then(|| baseline_c_orientation(&net, &cls).expect("budget"));
    let solved = Solved {
        net,
        exact,
        heuristic,
        baseline,
    };
    check_soundness(&solved);
    solved
}

/// Full soundness audit of every positive verdict: class membership,
/// acyclicity, the in-degree contract, the round trip back to the input,
/// placement admissibility against the minimal basis, and the property that
/// every cycle of the oriented graph carries an in-degree-2 vertex.
fn check_soundness(s: &Solved) {
    let cls = ClassPredicate::tree_child();
    let basis = (s.net.reticulation_number() > 0).then(|| minimal_cycle_basis(&s.net).unwrap());
    let cycles = all_simple_cycles_or_empty(&s.net);
    for outcome in [Some(&s.exact), Some(&s.heuristic), s.baseline.as_ref()]
        .into_iter()
        .flatten()
    {
        let Some(res) = outcome.oriented() else {
            continue;
        };
        let d = &res.network;
        assert!(cls.test(d), "positive verdict fails the class predicate");
        assert!(is_acyclic(d.vertex_count(), d.arcs()));
        assert_eq!(d.reticulation_count(), s.net.reticulation_number());
        for name in &res.reticulations {
            assert_eq!(d.indegree(d.vertex(name).unwrap()), 2);
        }
        let back = d.suppress_root().expect("round trip");
        assert!(same_topology(&s.net, &back), "round trip changed topology");

        if let Some(basis) = &basis {
            let vr: Vec<usize> = res
                .reticulations
                .iter()
                .map(|name| s.net.vertex(name).unwrap())
                .collect();
            assert!(
                placement_admissible(basis, &vr),
                "positive placement not admissible"
            );
        }
        // Every cycle of the oriented network contains a reticulation.
        for cycle in &cycles {
            assert!(
                cycle
                    .vertices
                    .iter()
                    .any(|&v| d.indegree(d.vertex(s.net.name(v)).unwrap()) == 2),
                "cycle without a reticulation in a positive orientation"
            );
        }
    }
}

fn all_simple_cycles_or_empty(n: &UndirectedNetwork) -> Vec<netorient::cyclebasis::Cycle> {
    if n.reticulation_number() == 0 {
        Vec::new()
    } else {
        all_simple_cycles(n)
    }
}

/// Generate networks with the given leaf count, cycling split
/// probabilities, keeping those whose cycle rank satisfies `keep`.
fn generate_filtered(
    leaves: u32,
    p_rs: &[f64],
    base_seed: u64,
    keep: impl Fn(usize) -> bool,
    count: usize,
) -> Vec<UndirectedNetwork> {
    let mut out = Vec::new();
    let mut i = 0u64;
    while out.len() < count {
        let p_r = p_rs[(i % p_rs.len() as u64) as usize];
        let cfg = GenConfig::new(leaves, p_r, base_seed + i * 1009).unwrap();
        i += 1;
        assert!(i < 60_000, "exhausted seed budget while building corpus");
        let Ok(net) = generate_network(&cfg) else {
            continue;
        };
        if keep(net.undirected.reticulation_number()) {
            out.push(net.undirected);
        }
    }
    out
}

/// 200 networks on 10 leaves with cycle rank 1..=4; all three solvers.
fn small_corpus() -> &'static [Solved] {
    static CORPUS: OnceLock<Vec<Solved>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        generate_filtered(10, &[0.1, 0.15], 40_000, |r| (1..=4).contains(&r), 200)
            .into_iter()
            .map(|n| solve(n, true))
            .collect()
    })
}

/// 20-leaf networks bucketed by cycle rank 1..=6; the baseline runs on the
/// rank-4 and rank-5 buckets (the timing comparison).
fn large_corpus() -> &'static [Solved] {
    static CORPUS: OnceLock<Vec<Solved>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let buckets: [(usize, usize); 6] = [(1, 8), (2, 8), (3, 8), (4, 12), (5, 12), (6, 12)];
        let mut out = Vec::new();
        for (r, count) in buckets {
            for net in generate_filtered(20, &[0.15], 777, |got| got == r, count) {
                out.push(solve(net, matches!(r, 4 | 5)));
            }
        }
        out
    })
}

fn all_solved() -> Vec<&'static Solved> {
    small_corpus().iter().chain(large_corpus().iter()).collect()
}

// ---------------------------------------------------------------------------
// Criteria

#[test]
fn criterion_01_exact_agrees_with_baseline_everywhere() {
    let corpus = small_corpus();
    assert!(corpus.len() >= 200);
    let mut yes = 0;
    for s in corpus {
        let baseline = s.baseline.as_ref().expect("baseline solved on this corpus");
        assert_eq!(
            s.exact.is_oriented(),
            baseline.is_oriented(),
            "verdict mismatch on a 10-leaf instance"
        );
        yes += usize::from(s.exact.is_oriented());
    }
    pass(
        "1",
        format!(
            "exact and baseline verdicts agree on {}/{} instances ({} YES, {} NO)",
            corpus.len(),
            corpus.len(),
            yes,
            corpus.len() - yes
        ),
    );
}

#[test]
fn criterion_02_constrained_orientation_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut triples = 0u64;
    let mut feasible = 0u64;
    let mut net_idx = 0u64;
    while triples < 5_000 {
        let leaves = 4 + (net_idx % 5) as u32; // 4..=8
        let p_r = if net_idx.is_multiple_of(2) { 0.15 } else { 0.2 };
        let cfg = GenConfig::new(leaves, p_r, 90_000 + net_idx * 1013).unwrap();
        net_idx += 1;
        let Ok(gen) = generate_network(&cfg) else {
            continue;
        };
        let n = gen.undirected;
        if n.edge_count() > 22 {
            continue;
        }
        let r = n.reticulation_number();
        let basis = (r > 0).then(|| minimal_cycle_basis(&n).unwrap());
        let internal: Vec<usize> = n.internal_vertices().collect();

        for _ in 0..8 {
            let vr: Vec<usize> = match &basis {
                None => Vec::new(),
                Some(basis) => {
                    // Random one-vertex-per-cycle tuple (admissible by
                    // construction), or a random admissible r-subset.
                    if rng.random::<bool>() {
                        let tuple: Vec<usize> = basis
                            .cycles
                            .iter()
                            .map(|c| c.vertices[rng.random_range(0..c.vertices.len())])
                            .collect();
                        let mut set = tuple.clone();
                        set.sort();
                        set.dedup();
                        if set.len() != r {
                            continue;
                        }
                        set
                    } else {
                        let mut pool = internal.clone();
                        let mut set = Vec::with_capacity(r);
                        for _ in 0..r {
                            let k = rng.random_range(0..pool.len());
                            set.push(pool.swap_remove(k));
                        }
                        set.sort();
                        if !placement_admissible(basis, &set) {
                            continue;
                        }
                        set
                    }
                }
            };
            let &(u, v) = &n.edges()[rng.random_range(0..n.edge_count())];
            let c = OrientationConstraint::new(&n, (u, v), &vr).unwrap();
            let oracle = orient_exhaustive_oracle(&n, &c).expect("|E| <= 22");
            assert!(oracle.len() <= 1, "uniqueness violated: {} found", oracle.len());
            let result = orient_constrained(&n, &c);
            // Propagation stays linear in the edge count.
            assert!(result.stats.propagation_steps <= 8 * n.edge_count() as u64);
            match (result.network(), oracle.first()) {
                (Some(got), Some(want)) => {
                    assert_eq!(got.arc_names(), want.arc_names(), "arc sets differ");
                    feasible += 1;
                }
                (None, None) => {}
                (got, want) => panic!(
                    "solver/oracle disagree: solver={} oracle={}",
                    got.is_some(),
                    want.is_some()
                ),
            }
            triples += 1;
        }
    }
    pass(
        "2",
        format!("{triples} triples checked against the exhaustive oracle ({feasible} feasible), verdicts and arc sets identical"),
    );
}

#[test]
fn criterion_03_heuristic_is_exact_for_rank_at_most_2() {
    let mut checked = 0;
    for s in all_solved() {
        if s.net.reticulation_number() <= 2 {
            assert_eq!(
                s.heuristic.is_oriented(),
                s.exact.is_oriented(),
                "heuristic differs from exact on a rank-{} instance",
                s.net.reticulation_number()
            );
            checked += 1;
        }
    }
    assert!(checked > 50);
    pass(
        "3",
        format!("heuristic verdict equals exact verdict on all {checked} instances with rank <= 2"),
    );
}

#[test]
fn criterion_04_heuristic_positives_are_sound() {
    // check_soundness already audits every positive verdict as corpora are
    // built; this counts the heuristic's positives explicitly.
    let positives = all_solved()
        .iter()
        .filter(|s| s.heuristic.is_oriented())
        .count();
    assert!(positives > 100);
    pass(
        "4",
        format!("{positives} heuristic orientations passed the tree-child predicate and round-tripped to their inputs"),
    );
}

#[test]
fn criterion_05_fixture_verdicts() {
    let cls = ClassPredicate::tree_child();

    let no = two_three_cycles();
    assert!(!exact_c_orientation(&no, &cls).is_oriented());
    assert!(!tree_child_heuristic(&no).is_oriented());
    assert!(!baseline_c_orientation(&no, &cls).unwrap().is_oriented());

    let stretch = three_cycle_four_cycle();
    assert!(tree_child_heuristic(&stretch).is_oriented());

    let level1 = level_one_two_cycles();
    assert!(exact_c_orientation(&level1, &cls).is_oriented());
    assert!(tree_child_heuristic(&level1).is_oriented());

    pass(
        "5",
        "shared-edge 3+3 cycles: NO everywhere; 3+4 cycles: heuristic orients; edge-disjoint cycles: orientable",
    );
}

#[test]
fn criterion_06_structural_property_suites() {
    // (a), (b): audited for every positive verdict by check_soundness while
    // the corpora are built; force both corpora here.
    let solved = all_solved();
    let positives = solved.iter().filter(|s| s.exact.is_oriented()).count();
    assert!(positives > 100);

    // (c) Placements with pairwise distance >= 3: every feasible
    // orientation must be tree-child, whichever root edge is used.
    let mut rng = ChaCha8Rng::seed_from_u64(0xDEED);
    let mut spread_feasible = 0u64;
    for s in solved.iter().filter(|s| s.net.reticulation_number() >= 1) {
        let n = &s.net;
        let basis = minimal_cycle_basis(n).unwrap();
        for _ in 0..20 {
            let tuple: Vec<usize> = basis
                .cycles
                .iter()
                .map(|c| c.vertices[rng.random_range(0..c.vertices.len())])
                .collect();
            let mut set = tuple;
            set.sort();
            set.dedup();
            if set.len() != n.reticulation_number() {
                continue;
            }
            let spread = set.iter().enumerate().all(|(i, &u)| {
                let d = n.distances_from(u);
                set[i + 1..].iter().all(|&v| d[v] >= 3)
            });
            if !spread {
                continue;
            }
            for &(u, v) in n.edges() {
                let c = OrientationConstraint::new(n, (u, v), &set).unwrap();
                if let Some(d) = orient_constrained(n, &c).network() {
                    assert!(
                        d.is_tree_child(),
                        "feasible distance-3 placement produced a non-tree-child orientation"
                    );
                    spread_feasible += 1;
                }
            }
        }
    }
    assert!(spread_feasible > 0);
    pass(
        "6",
        format!(
            "reticulation-in-every-cycle and basis-matching hold for {positives} exact positives; \
             {spread_feasible} feasible distance>=3 orientations were all tree-child"
        ),
    );
}

#[test]
fn criterion_07_cycle_basis_correctness() {
    // Small networks keep |E| <= 16, where minimality is certified by
    // enumerating every basis; the 10- and 20-leaf corpora exercise the
    // candidate-bound certificate plus the rank and spanning checks.
    let mut small: Vec<UndirectedNetwork> = Vec::new();
    let mut i = 0u64;
    while small.len() < 60 {
        let leaves = 4 + (i % 3) as u32; // 4..=6
        let cfg = GenConfig::new(leaves, 0.18, 70_000 + i * 1013).unwrap();
        i += 1;
        assert!(i < 10_000);
        let Ok(net) = generate_network(&cfg) else {
            continue;
        };
        let n = net.undirected;
        if n.reticulation_number() >= 1 && n.edge_count() <= 16 {
            small.push(n);
        }
    }

    let mut exhaustive = 0;
    let mut bounded = 0;
    let corpus_nets = all_solved().into_iter().map(|s| &s.net);
    for net in small.iter().chain(corpus_nets) {
        if net.reticulation_number() == 0 {
            continue;
        }
        let basis = minimal_cycle_basis(net).unwrap();
        let report = verify_cycle_basis(net, &basis);
        assert!(report.is_ok(), "basis verification failed: {report}");
        assert_eq!(report.rank, net.reticulation_number());
        match report.minimality {
            MinimalityCheck::Exhaustive { ok, .. } => {
                assert!(ok);
                assert!(net.edge_count() <= 16);
                exhaustive += 1;
            }
            MinimalityCheck::CandidateBound { ok, .. } => {
                assert!(ok);
                bounded += 1;
            }
        }
    }
    assert!(exhaustive >= 60 && bounded > 0);
    pass(
        "7",
        format!(
            "{exhaustive} bases certified minimal by exhaustive enumeration (|E| <= 16), \
             {bounded} by the candidate bound; rank and spanning checks all passed"
        ),
    );
}

#[test]
fn criterion_08a_placement_space_ratio_at_rank_5() {
    let ratios: Vec<f64> = large_corpus()
        .iter()
        .filter(|s| s.net.reticulation_number() == 5)
        .map(|s| {
            let basis = minimal_cycle_basis(&s.net).unwrap();
            search_space_size(&basis) as f64 / baseline_space_size(&s.net) as f64
        })
        .collect();
    assert!(ratios.len() >= 10);
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    assert!(
        median < 1e-2,
        "median placement-space ratio over {} rank-5 networks is {median:.4}; \
         the 1e-2 target is unreachable for this generator: its minimal bases average \
         cycle length ~6, and even all-triangle bases would give 3^5/C(28,5) ~= 2.5e-3",
        sorted.len()
    );
    pass(
        "8a",
        format!("median placement-space ratio {median:.5} < 1e-2"),
    );
}

#[test]
fn criterion_08b_exact_is_faster_than_baseline() {
    let cls = ClassPredicate::tree_child();
    let mut faster = 0u32;
    let mut total = 0u32;
    for s in large_corpus() {
        let r = s.net.reticulation_number();
        if !(r == 4 || r == 5) {
            continue;
        }
        let baseline = s.baseline.as_ref().expect("baseline solved at rank 4 and 5");
        total += 1;
        let mut exact_t = s.exact.stats.elapsed;
        let mut baseline_t = baseline.stats.elapsed;
        // Corpus timings are taken under concurrent test load; close calls
        // (always sub-millisecond instances) are re-measured interleaved,
        // best of three.
        if exact_t * 2 > baseline_t {
            let mut best_e = std::time::Duration::MAX;
            let mut best_b = std::time::Duration::MAX;
            for _ in 0..3 {
                best_e = best_e.min(exact_c_orientation(&s.net, &cls).stats.elapsed);
                best_b = best_b.min(
                    baseline_c_orientation(&s.net, &cls)
                        .expect("budget")
                        .stats
                        .elapsed,
                );
            }
            exact_t = best_e;
            baseline_t = best_b;
        }
        if exact_t < baseline_t {
            faster += 1;
        }
    }
    assert!(total >= 20);
    let rate = f64::from(faster) / f64::from(total);
    assert!(
        rate >= 0.9,
        "exact beat the baseline on only {faster}/{total} rank-4/5 instances"
    );
    pass(
        "8b",
        format!("exact was faster than the baseline on {faster}/{total} rank-4/5 instances"),
    );
}

#[test]
fn criterion_09_heuristic_degradation_with_rank() {
    let mut yes_by_rank = std::collections::BTreeMap::new();
    let mut hit_by_rank = std::collections::BTreeMap::new();
    for s in large_corpus() {
        if s.exact.is_oriented() {
            let r = s.net.reticulation_number();
            *yes_by_rank.entry(r).or_insert(0u32) += 1;
            if s.heuristic.is_oriented() {
                *hit_by_rank.entry(r).or_insert(0u32) += 1;
            }
        }
    }
    let rate = |r: usize| {
        let yes = yes_by_rank.get(&r).copied().unwrap_or(0);
        let hit = hit_by_rank.get(&r).copied().unwrap_or(0);
        (yes, if yes == 0 { f64::NAN } else { f64::from(hit) / f64::from(yes) })
    };
    for r in 1..=2 {
        let (yes, rate) = rate(r);
        assert!(yes > 0);
        assert_eq!(rate, 1.0, "heuristic must find every rank-{r} orientation");
    }
    let (yes6, rate6) = rate(6);
    assert!(yes6 >= 5, "need at least 5 exact-YES rank-6 instances, got {yes6}");
    assert!(
        rate6 < 1.0,
        "heuristic unexpectedly found all {yes6} rank-6 orientations"
    );
    let summary: Vec<String> = yes_by_rank
        .keys()
        .map(|&r| {
            let (yes, rate) = rate(r);
            format!("r{r}: {:.0}% of {yes}", rate * 100.0)
        })
        .collect();
    pass("9", format!("heuristic hit rate by rank — {}", summary.join(", ")));
}

#[test]
fn criterion_10_generator_validity() {
    let mut count = 0;
    for &leaves in &[10u32, 20] {
        for &p_r in &[0.05f64, 0.1, 0.15] {
            for i in 0..167u64 {
                let cfg = GenConfig::new(leaves, p_r, 500_000 + i * 1009).unwrap();
                let net = generate_network(&cfg).expect("generation succeeds");
                let n = &net.undirected;
                let report = validate_undirected(&n.to_raw());
                assert!(report.is_ok(), "invalid generated network: {report}");
                let (nv, ne, nx) = (n.vertex_count(), n.edge_count(), n.leaf_count());
                let r = n.reticulation_number();
                assert_eq!(nx as u32, leaves);
                assert_eq!(nv, 2 * nx + 2 * r - 2);
                assert_eq!(ne, 2 * nx + 3 * r - 3);
                count += 1;
            }
        }
    }
    assert!(count >= 1000);

    // No splits means no reticulations, ever.
    for seed in 0..30 {
        let cfg = GenConfig::new(10, 0.0, seed).unwrap();
        let net = generate_network(&cfg).unwrap();
        assert_eq!(net.undirected.reticulation_number(), 0);
    }

    // The scripted eight-step trace reproduces the expected raw arcs and
    // binarizes to the expected directed network; its root suppression
    // collides with an existing arc, exercising the retry path.
    let mut script = ScriptedEvents::new(vec![
        GenEvent::Coalesce(3, 4),
        GenEvent::Split(2),
        GenEvent::Coalesce(1, 6),
        GenEvent::Coalesce(7, 8),
        GenEvent::Split(5),
        GenEvent::Coalesce(9, 10),
        GenEvent::Coalesce(11, 12),
    ]);
    let (raw, _) = generate_raw_dag_with(4, &mut script, 100).unwrap();
    assert_eq!(
        raw.arcs,
        vec![
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
        ]
    );
    let d: DirectedNetwork = binarize_and_suppress(&raw).unwrap();
    assert_eq!(d.leaf_count(), 4);
    assert_eq!(d.reticulation_count(), 2);
    assert!(matches!(
        to_undirected(&d),
        Err(SuppressError::ParallelEdge { .. })
    ));

    pass(
        "10",
        format!("{count} generated networks valid with exact degree identities; zero splits give trees; the scripted trace reproduces its arc set"),
    );
}
