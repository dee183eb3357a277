//! Single-network commands: orient, gen, basis.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use netorient::cyclebasis::minimal_cycle_basis;
use netorient::fileio;
use netorient::generator::{generate_network, GenConfig, RNG_NAME};
use netorient::solvers::{
    baseline_c_orientation_opts, exact_c_orientation_opts, tree_child_heuristic_opts,
    BaselineOptions, Outcome, SolveError, SolveOptions, Verdict,
};

use crate::{Algo, GenArgs, OrientArgs, BasisArgs};

pub fn deadline_from(timeout_secs: u64) -> Option<Instant> {
    (timeout_secs > 0).then(|| Instant::now() + Duration::from_secs(timeout_secs))
}

pub fn install_pool(threads: usize) -> Result<Option<rayon::ThreadPool>, String> {
    if threads <= 1 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| format!("failed to build thread pool: {e}"))
}

pub fn run_solver(
    algo: Algo,
    n: &netorient::netmodel::UndirectedNetwork,
    cls: &netorient::solvers::ClassPredicate,
    solve: SolveOptions,
    baseline_budget: u128,
) -> Result<Outcome, SolveError> {
    match algo {
        Algo::Exact => exact_c_orientation_opts(n, cls, &solve),
        Algo::Heuristic => tree_child_heuristic_opts(n, &solve),
        Algo::Baseline => baseline_c_orientation_opts(
            n,
            cls,
            &BaselineOptions {
                budget: baseline_budget,
                admissibility_pruning: false,
                solve,
            },
        ),
    }
}

pub fn cmd_orient(args: OrientArgs) -> Result<ExitCode, String> {
    if matches!(args.algo, Algo::Heuristic) && !matches!(args.class_, crate::ClassArg::TreeChild) {
        return Err("the heuristic solver targets the tree-child class only".into());
    }
    let n = fileio::read_undirected_file(&args.file).map_err(|e| e.to_string())?;
    let cls = args.class_.predicate();
    let solve = SolveOptions {
        deadline: deadline_from(args.timeout),
        parallel: args.parallel > 1,
    };
    let pool = install_pool(args.parallel)?;
    let run = || run_solver(args.algo, &n, &cls, solve, args.baseline_budget);
    let outcome = match pool {
        Some(pool) => pool.install(run),
        None => run(),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(SolveError::DeadlineExceeded) => {
            println!("TIMEOUT");
            return Ok(ExitCode::from(2));
        }
        Err(e @ SolveError::BudgetExceeded { .. }) => return Err(e.to_string()),
    };

    let stats = &outcome.stats;
    match &outcome.verdict {
        Verdict::Oriented(res) => {
            let out_path = args.out.clone().unwrap_or_else(|| {
                let mut p = args.file.clone();
                let stem = p
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "network".into());
                p.set_file_name(format!("{stem}.oriented.txt"));
                p
            });
            let header = vec![
                format!("verdict ORIENTED"),
                format!("algo {}", args.algo.name()),
                format!("class {}", cls.name()),
                format!("root-edge {} {}", res.root_edge.0, res.root_edge.1),
                format!("reticulations {}", res.reticulations.join(" ")),
            ];
            fileio::write_directed_file(&out_path, &res.network, &header)
                .map_err(|e| e.to_string())?;
            if args.newick {
                let mut nwk = out_path.clone();
                nwk.set_extension("nwk");
                std::fs::write(&nwk, fileio::to_extended_newick(&res.network) + "\n")
                    .map_err(|e| e.to_string())?;
            }
            println!("ORIENTED");
            print_stats(stats);
            println!("output {}", out_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Verdict::No => {
            println!("NO");
            print_stats(stats);
            Ok(ExitCode::from(1))
        }
        Verdict::ProbablyNo => {
            println!("PROBABLY_NO");
            print_stats(stats);
            Ok(ExitCode::from(1))
        }
    }
}

fn print_stats(stats: &netorient::solvers::SolveStats) {
    println!(
        "placements_tried {} constrained_calls {} elapsed_secs {:.6}",
        stats.placements_tried,
        stats.constrained_calls,
        stats.elapsed.as_secs_f64()
    );
}

/// Filename fragment for a float that stays stable across locales.
fn fmt_pr(p: f64) -> String {
    format!("{p}")
}

pub fn cmd_gen(args: GenArgs) -> Result<ExitCode, String> {
    std::fs::create_dir_all(&args.out).map_err(|e| e.to_string())?;
    let mut histogram: std::collections::BTreeMap<usize, u64> = std::collections::BTreeMap::new();
    for i in 0..args.count {
        let seed = args.seed + i;
        let cfg = GenConfig::new(args.leaves, args.pr, seed).map_err(|e| e.to_string())?;
        let net = generate_network(&cfg).map_err(|e| e.to_string())?;
        let r = net.undirected.reticulation_number();
        *histogram.entry(r).or_insert(0) += 1;
        let header = vec![
            format!(
                "generated leaves={} pr={} seed={} rng={}",
                args.leaves,
                fmt_pr(args.pr),
                seed,
                RNG_NAME
            ),
            format!(
                "seed-used={} retries={} r={}",
                net.seed_used, net.trace.retries, r
            ),
        ];
        let path: PathBuf = args.out.join(format!(
            "net_{}_{}_{}.txt",
            args.leaves,
            fmt_pr(args.pr),
            seed
        ));
        fileio::write_undirected_file(&path, &net.undirected, &header)
            .map_err(|e| e.to_string())?;
    }
    let hist_path = args.out.join(format!(
        "net_{}_{}_{}.hist",
        args.leaves,
        fmt_pr(args.pr),
        args.seed
    ));
    let mut hist = format!(
        "# r histogram for leaves={} pr={} seeds {}..{}\n",
        args.leaves,
        fmt_pr(args.pr),
        args.seed,
        args.seed + args.count
    );
    for (r, count) in &histogram {
        hist.push_str(&format!("{r} {count}\n"));
    }
    std::fs::write(&hist_path, hist).map_err(|e| e.to_string())?;
    println!(
        "wrote {} networks to {} (histogram: {})",
        args.count,
        args.out.display(),
        hist_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_basis(args: BasisArgs) -> Result<ExitCode, String> {
    let n = fileio::read_undirected_file(&args.file).map_err(|e| e.to_string())?;
    let basis = minimal_cycle_basis(&n).map_err(|e| e.to_string())?;
    for cycle in &basis.cycles {
        let names: Vec<&str> = cycle.vertices.iter().map(|&v| n.name(v)).collect();
        println!("{}", names.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}
