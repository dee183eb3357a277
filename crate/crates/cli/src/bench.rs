//! Corpus benchmark harness: per-instance records and per-(r, solver)
//! summaries as CSV.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rayon::prelude::*;

use netorient::cyclebasis::{baseline_space_size, minimal_cycle_basis, search_space_size};
use netorient::fileio;
use netorient::netmodel::{is_acyclic, same_topology, UndirectedNetwork};
use netorient::solvers::{ClassPredicate, Outcome, SolveError, SolveOptions};

use crate::commands::{deadline_from, install_pool, run_solver};
use crate::BenchArgs;

pub const CSV_HEADER: &str = "instance,n_leaves,r,solver,verdict,elapsed_secs,\
                              placements_tried,constrained_calls,search_space_exact,search_space_baseline";

#[derive(Debug, Clone)]
struct Record {
    instance: String,
    n_leaves: usize,
    r: usize,
    solver: &'static str,
    verdict: String,
    elapsed_secs: f64,
    placements_tried: u64,
    constrained_calls: u64,
    search_space_exact: u128,
    search_space_baseline: u128,
}

impl Record {
    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{},{},{},{}",
            self.instance,
            self.n_leaves,
            self.r,
            self.solver,
            self.verdict,
            self.elapsed_secs,
            self.placements_tried,
            self.constrained_calls,
            self.search_space_exact,
            self.search_space_baseline
        )
    }
}

pub fn cmd_bench(args: BenchArgs) -> Result<ExitCode, String> {
    let files = corpus_files(&args.corpus)?;
    if files.is_empty() {
        return Err(format!(
            "no .txt network files found in {}",
            args.corpus.display()
        ));
    }
    let cls = args.class_.predicate();
    let pool = install_pool(args.parallel)?;

    let run_instance = |path: &PathBuf| -> Result<Vec<Record>, String> {
        let n = fileio::read_undirected_file(path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        let instance = sanitize(
            &path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        );
        bench_instance(&instance, &n, &args, &cls)
    };
    let results: Result<Vec<Vec<Record>>, String> = match &pool {
        Some(pool) => pool.install(|| files.par_iter().map(run_instance).collect()),
        None => files.iter().map(run_instance).collect(),
    };
    let mut records: Vec<Record> = results?.into_iter().flatten().collect();
    records.sort_by(|a, b| (&a.instance, a.solver).cmp(&(&b.instance, b.solver)));

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for rec in &records {
        csv.push_str(&rec.csv_line());
        csv.push('\n');
    }
    std::fs::write(&args.out, &csv).map_err(|e| e.to_string())?;

    let summary = summarize(&records);
    let summary_path = args.out.with_extension("summary.csv");
    std::fs::write(&summary_path, &summary).map_err(|e| e.to_string())?;

    println!(
        "wrote {} records for {} instances to {}",
        records.len(),
        files.len(),
        args.out.display()
    );
    print!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    files.sort();
    Ok(files)
}

fn sanitize(stem: &str) -> String {
    stem.replace([',', ' ', '\t'], "_")
}

fn bench_instance(
    instance: &str,
    n: &UndirectedNetwork,
    args: &BenchArgs,
    cls: &ClassPredicate,
) -> Result<Vec<Record>, String> {
    let r = n.reticulation_number();
    let space_exact = if r == 0 {
        1
    } else {
        let basis = minimal_cycle_basis(n).expect("r >= 1");
        search_space_size(&basis)
    };
    let space_baseline = baseline_space_size(n);

    let mut records = Vec::new();
    for &algo in &args.algos {
        let solve = SolveOptions {
            deadline: deadline_from(args.timeout),
            parallel: false,
        };
        let started = std::time::Instant::now();
        let result = run_solver(algo, n, cls, solve, args.baseline_budget);
        let (verdict, elapsed, placements, calls) = match result {
            Ok(outcome) => {
                verify_oriented(instance, n, &outcome, cls)?;
                let v = match &outcome.verdict {
                    netorient::solvers::Verdict::Oriented(_) => "ORIENTED",
                    netorient::solvers::Verdict::No => "NO",
                    netorient::solvers::Verdict::ProbablyNo => "PROBABLY_NO",
                };
                (
                    v.to_string(),
                    outcome.stats.elapsed.as_secs_f64(),
                    outcome.stats.placements_tried,
                    outcome.stats.constrained_calls,
                )
            }
            Err(SolveError::DeadlineExceeded) => (
                "TIMEOUT".to_string(),
                started.elapsed().as_secs_f64(),
                0,
                0,
            ),
            Err(SolveError::BudgetExceeded { .. }) => {
                ("BUDGET_EXCEEDED".to_string(), 0.0, 0, 0)
            }
        };
        records.push(Record {
            instance: instance.to_string(),
            n_leaves: n.leaf_count(),
            r,
            solver: algo.name(),
            verdict,
            elapsed_secs: elapsed,
            placements_tried: placements,
            constrained_calls: calls,
            search_space_exact: space_exact,
            search_space_baseline: space_baseline,
        });
    }
    Ok(records)
}

/// Re-verify every positive verdict before it is written out.
fn verify_oriented(
    instance: &str,
    n: &UndirectedNetwork,
    outcome: &Outcome,
    cls: &ClassPredicate,
) -> Result<(), String> {
    let Some(res) = outcome.oriented() else {
        return Ok(());
    };
    let d = &res.network;
    let fail = |what: &str| Err(format!("{instance}: oriented output failed check: {what}"));
    if !cls.test(d) {
        return fail("class predicate");
    }
    if !is_acyclic(d.vertex_count(), d.arcs()) {
        return fail("acyclicity");
    }
    if d.reticulation_count() != n.reticulation_number() {
        return fail("reticulation count");
    }
    for name in &res.reticulations {
        let v = d
            .vertex(name)
            .ok_or_else(|| format!("{instance}: reticulation {name} missing"))?;
        if d.indegree(v) != 2 {
            return fail("reticulation in-degree");
        }
    }
    match d.suppress_root() {
        Ok(back) if same_topology(n, &back) => Ok(()),
        Ok(_) => fail("round trip topology"),
        Err(e) => fail(&format!("root suppression: {e}")),
    }
}

/// Per-(r, group, solver) accuracy and timing, with the exact solver's
/// verdict as reference. Instances without a definite exact verdict are
/// skipped.
fn summarize(records: &[Record]) -> String {
    use std::collections::BTreeMap;

    let mut exact_verdict: BTreeMap<&str, bool> = BTreeMap::new();
    for rec in records {
        if rec.solver == "exact" {
            match rec.verdict.as_str() {
                "ORIENTED" => {
                    exact_verdict.insert(&rec.instance, true);
                }
                "NO" => {
                    exact_verdict.insert(&rec.instance, false);
                }
                _ => {}
            }
        }
    }

    #[derive(Default)]
    struct Cell {
        n: u64,
        answered: u64,
        agree: u64,
        times: Vec<f64>,
    }
    let mut cells: BTreeMap<(usize, &'static str, &str), Cell> = BTreeMap::new();
    for rec in records {
        let Some(&reference) = exact_verdict.get(rec.instance.as_str()) else {
            continue;
        };
        let group = if reference { "YES" } else { "NO" };
        let cell = cells.entry((rec.r, group, rec.solver)).or_default();
        cell.n += 1;
        let answer = match rec.verdict.as_str() {
            "ORIENTED" => Some(true),
            "NO" | "PROBABLY_NO" => Some(false),
            _ => None,
        };
        if let Some(answer) = answer {
            cell.answered += 1;
            if answer == reference {
                cell.agree += 1;
            }
            cell.times.push(rec.elapsed_secs);
        }
    }

    let mut out =
        String::from("r,group,solver,instances,answered,agree,accuracy_pct,mean_s,min_s,max_s\n");
    for ((r, group, solver), cell) in &cells {
        let accuracy = if cell.answered > 0 {
            100.0 * cell.agree as f64 / cell.answered as f64
        } else {
            f64::NAN
        };
        let (mean, min, max) = if cell.times.is_empty() {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            let sum: f64 = cell.times.iter().sum();
            (
                sum / cell.times.len() as f64,
                cell.times.iter().cloned().fold(f64::INFINITY, f64::min),
                cell.times.iter().cloned().fold(0.0, f64::max),
            )
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.1},{:.6},{:.6},{:.6}\n",
            r, group, solver, cell.n, cell.answered, cell.agree, accuracy, mean, min, max
        ));
    }
    out
}
