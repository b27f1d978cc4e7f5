//! Multi-run campaigns: every (algorithm × function × run) cell, executed
//! deterministically and aggregated into report tables.

use crate::cli_config::{build_function, HarnessConfig};
use crate::output::{write_file, write_run_files};
use anyhow::{Context, Result};
use fwa::rng::derive_run_seed;
use fwa::stats::{median, rank_table, significance_matrix};
use fwa::swarm::AlgorithmConfig;
use fwa::telemetry::amplitude_ratio_histogram;
use fwa::{ObjectiveSpec, RunResult};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub struct CampaignPlan {
    /// Algorithm spellings in user order (e.g. `coffwa`, `dynfwa-ng`).
    pub algorithms: Vec<String>,
    pub functions: Vec<String>,
    pub dim: usize,
    pub runs: u32,
    pub seed_base: u64,
    pub suite_seed: u64,
    pub jobs: usize,
    /// External per-run results to include in the rank table, keyed by a
    /// display name.
    pub external: Vec<(String, Vec<(String, Vec<f64>)>)>,
}

struct Cell {
    algo_index: usize,
    func_index: usize,
    run_index: u32,
}

pub struct CampaignOutcome {
    /// `results[algo][func][run]`
    pub results: Vec<Vec<Vec<RunResult>>>,
    pub failures: Vec<String>,
}

/// Executes every cell of the campaign. Each cell derives its seed purely
/// from `(seed_base, algorithm, function, run_index)`, so any cell can be
/// reproduced in isolation; `jobs` only controls scheduling.
pub fn execute(
    plan: &CampaignPlan,
    config: &HarnessConfig,
    out_dir: &Path,
) -> Result<CampaignOutcome> {
    let specs: Vec<ObjectiveSpec> = plan
        .functions
        .iter()
        .map(|name| build_function(config, plan.dim, plan.suite_seed, name))
        .collect::<Result<_>>()?;
    let algo_configs: Vec<AlgorithmConfig> = plan
        .algorithms
        .iter()
        .map(|spelling| config.algorithm_config(spelling))
        .collect::<Result<_>>()?;
    let variants: Vec<fwa::Algorithm> = plan
        .algorithms
        .iter()
        .map(|spelling| crate::cli_config::parse_algorithm(spelling).map(|(a, _)| a))
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for algo_index in 0..plan.algorithms.len() {
        for func_index in 0..plan.functions.len() {
            for run_index in 0..plan.runs {
                cells.push(Cell {
                    algo_index,
                    func_index,
                    run_index,
                });
            }
        }
    }

    let slots: Vec<Vec<Mutex<Vec<Option<RunResult>>>>> = (0..plan.algorithms.len())
        .map(|_| {
            (0..plan.functions.len())
                .map(|_| Mutex::new((0..plan.runs).map(|_| None).collect()))
                .collect()
        })
        .collect();
    let failures: Mutex<Vec<String>> = Mutex::new(Vec::new());
    let next_cell = AtomicUsize::new(0);
    let workers = plan.jobs.max(1).min(cells.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = next_cell.fetch_add(1, Ordering::Relaxed);
                let Some(cell) = cells.get(index) else { break };
                let spelling = &plan.algorithms[cell.algo_index];
                let function = &plan.functions[cell.func_index];
                let seed = derive_run_seed(plan.seed_base, spelling, function, cell.run_index);
                let outcome = fwa::run(
                    variants[cell.algo_index],
                    &algo_configs[cell.algo_index],
                    &specs[cell.func_index],
                    seed,
                )
                .map_err(anyhow::Error::from)
                .and_then(|result| {
                    let dir = out_dir.join(spelling).join(function);
                    write_run_files(&dir, &format!("run_{}", cell.run_index), &result)?;
                    Ok(result)
                });
                match outcome {
                    Ok(result) => {
                        slots[cell.algo_index][cell.func_index].lock().unwrap()
                            [cell.run_index as usize] = Some(result);
                    }
                    Err(err) => failures.lock().unwrap().push(format!(
                        "{spelling}/{function}/run_{}: {err:#}",
                        cell.run_index
                    )),
                }
            });
        }
    });

    let results = slots
        .into_iter()
        .map(|per_algo| {
            per_algo
                .into_iter()
                .map(|m| m.into_inner().unwrap().into_iter().flatten().collect())
                .collect()
        })
        .collect();
    Ok(CampaignOutcome {
        results,
        failures: failures.into_inner().unwrap(),
    })
}

/// Writes every aggregate report into `out_dir/reports/`.
pub fn write_reports(
    plan: &CampaignPlan,
    config: &HarnessConfig,
    outcome: &CampaignOutcome,
    out_dir: &Path,
) -> Result<()> {
    let reports = out_dir.join("reports");
    std::fs::create_dir_all(&reports).context("creating reports directory")?;

    write_rank_table(plan, outcome, &reports)?;
    write_wilcoxon_tables(plan, config, outcome, &reports)?;
    write_significance_metrics(plan, outcome, &reports)?;
    write_amplitude_ratios(plan, config, outcome, &reports)?;
    write_runtime_table(plan, outcome, &reports)?;
    if !outcome.failures.is_empty() {
        let mut text = String::from("cell,error\n");
        for failure in &outcome.failures {
            text.push_str(&failure.replace(',', ";"));
            text.push('\n');
        }
        write_file(&reports.join("failures.csv"), &text)?;
    }
    Ok(())
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map_or(String::new(), |v| v.to_string())
}

/// Mean-fitness and rank table, one row per function plus a final average
/// rank row. External result sets join as extra columns.
fn write_rank_table(plan: &CampaignPlan, outcome: &CampaignOutcome, reports: &Path) -> Result<()> {
    let mut columns: Vec<String> = plan.algorithms.clone();
    for (name, _) in &plan.external {
        columns.push(name.clone());
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (fi, function) in plan.functions.iter().enumerate() {
        let mut row: Vec<f64> = outcome
            .results
            .iter()
            .map(|per_algo| mean(per_algo[fi].iter().map(|r| r.best_fitness)))
            .collect();
        for (_, per_function) in &plan.external {
            let value = per_function
                .iter()
                .find(|(name, _)| name == function)
                .map_or(f64::NAN, |(_, finals)| mean(finals.iter().copied()));
            row.push(value);
        }
        rows.push(row);
    }

    // Drop external columns that failed to cover every function.
    let keep: Vec<usize> = (0..columns.len())
        .filter(|&ci| rows.iter().all(|row| row[ci].is_finite()))
        .collect();
    let columns: Vec<String> = keep.iter().map(|&ci| columns[ci].clone()).collect();
    let rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| keep.iter().map(|&ci| row[ci]).collect())
        .collect();

    let (ranks, average) = rank_table(&rows)?;
    let mut text = String::from("function");
    for column in &columns {
        text.push_str(&format!(",{column}_mean,{column}_rank"));
    }
    text.push('\n');
    for (fi, function) in plan.functions.iter().enumerate() {
        text.push_str(function);
        for ci in 0..columns.len() {
            text.push_str(&format!(",{},{}", rows[fi][ci], ranks[fi][ci]));
        }
        text.push('\n');
    }
    text.push_str("AR");
    for avg in &average {
        text.push_str(&format!(",,{avg:.2}"));
    }
    text.push('\n');
    write_file(&reports.join("mean_fitness_rank.csv"), &text)
}

/// One Wilcoxon verdict file per algorithm pair, rows per function. The
/// paired test needs at least five runs per cell; smaller campaigns skip
/// these tables.
fn write_wilcoxon_tables(
    plan: &CampaignPlan,
    config: &HarnessConfig,
    outcome: &CampaignOutcome,
    reports: &Path,
) -> Result<()> {
    if plan.runs < 5 {
        return Ok(());
    }
    for a in 0..plan.algorithms.len() {
        for b in (a + 1)..plan.algorithms.len() {
            let a_runs: Vec<Vec<f64>> = finals(&outcome.results[a]);
            let b_runs: Vec<Vec<f64>> = finals(&outcome.results[b]);
            let cells = significance_matrix(&a_runs, &b_runs, config.report.alpha)?;
            let mut text = String::from("function,p_value,verdict,median_a,median_b\n");
            for (fi, cell) in cells.iter().enumerate() {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    plan.functions[fi],
                    cell.p_value,
                    cell.verdict,
                    median(&a_runs[fi]),
                    median(&b_runs[fi]),
                ));
            }
            let name = format!(
                "wilcoxon_{}_vs_{}.csv",
                plan.algorithms[a], plan.algorithms[b]
            );
            write_file(&reports.join(name), &text)?;
        }
    }
    Ok(())
}

/// Per-(algorithm, function) improvement-share and resource-share averages.
/// GCF columns are reported only for the pooled-selection variants without
/// the Gaussian operator, where the membership rules are defined.
fn write_significance_metrics(
    plan: &CampaignPlan,
    outcome: &CampaignOutcome,
    reports: &Path,
) -> Result<()> {
    let mut text =
        String::from("algorithm,function,alpha_cf,beta_cf,theta_cf,alpha_gcf,beta_gcf,theta_gcf\n");
    for (ai, spelling) in plan.algorithms.iter().enumerate() {
        let gcf_defined = matches!(spelling.as_str(), "efwa-ng" | "dynfwa-ng");
        for (fi, function) in plan.functions.iter().enumerate() {
            let runs = &outcome.results[ai][fi];
            let avg = |get: &dyn Fn(&RunResult) -> Option<f64>| -> Option<f64> {
                let values: Vec<f64> = runs.iter().filter_map(get).collect();
                (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
            };
            let alpha_cf = avg(&|r| r.significance.alpha_cf);
            let beta_cf = avg(&|r| r.significance.beta_cf);
            let theta_cf = avg(&|r| r.significance.theta_cf);
            let (alpha_gcf, beta_gcf, theta_gcf) = if gcf_defined {
                (
                    avg(&|r| r.significance.alpha_gcf),
                    avg(&|r| r.significance.beta_gcf),
                    avg(&|r| r.significance.theta_gcf),
                )
            } else {
                (None, None, None)
            };
            text.push_str(&format!(
                "{spelling},{function},{},{},{},{},{},{}\n",
                fmt_opt(alpha_cf),
                fmt_opt(beta_cf),
                fmt_opt(theta_cf),
                fmt_opt(alpha_gcf),
                fmt_opt(beta_gcf),
                fmt_opt(theta_gcf),
            ));
        }
    }
    write_file(&reports.join("significance_metrics.csv"), &text)
}

/// Amplitude-ratio histograms and geometric means pooled over runs.
fn write_amplitude_ratios(
    plan: &CampaignPlan,
    config: &HarnessConfig,
    outcome: &CampaignOutcome,
    reports: &Path,
) -> Result<()> {
    let mut text = String::from(
        "algorithm,function,partition,geo_mean,count,bin_index,bin_lo,bin_hi,bin_count\n",
    );
    for (ai, spelling) in plan.algorithms.iter().enumerate() {
        for (fi, function) in plan.functions.iter().enumerate() {
            let pooled: Vec<_> = outcome.results[ai][fi]
                .iter()
                .flat_map(|r| r.amplitude_trace.iter().copied())
                .collect();
            if pooled.is_empty() {
                continue;
            }
            let analysis = amplitude_ratio_histogram(&pooled, config.report.histogram_bins);
            for (partition, stats) in [("improved", &analysis.improved), ("missed", &analysis.missed)]
            {
                for (bi, bin) in stats.histogram.iter().enumerate() {
                    text.push_str(&format!(
                        "{spelling},{function},{partition},{},{},{bi},{},{},{}\n",
                        fmt_opt(stats.geo_mean),
                        stats.count,
                        bin.lo,
                        bin.hi,
                        bin.count,
                    ));
                }
            }
        }
    }
    write_file(&reports.join("amplitude_ratios.csv"), &text)
}

/// Total wall time per algorithm, normalized so the dynamic-amplitude
/// variant reads 1.0 (falling back to the first algorithm when absent).
fn write_runtime_table(
    plan: &CampaignPlan,
    outcome: &CampaignOutcome,
    reports: &Path,
) -> Result<()> {
    let totals: Vec<f64> = outcome
        .results
        .iter()
        .map(|per_algo| {
            per_algo
                .iter()
                .flat_map(|runs| runs.iter().map(|r| r.wall_time))
                .sum()
        })
        .collect();
    let base_index = plan
        .algorithms
        .iter()
        .position(|name| name == "dynfwa" || name == "dynfwa-ng")
        .unwrap_or(0);
    let base = totals.get(base_index).copied().unwrap_or(1.0);
    let mut text = String::from("algorithm,total_wall_time_s,ratio\n");
    for (spelling, total) in plan.algorithms.iter().zip(&totals) {
        let ratio = if base > 0.0 { total / base } else { f64::NAN };
        text.push_str(&format!("{spelling},{total},{ratio}\n"));
    }
    write_file(&reports.join("runtime_ratio.csv"), &text)
}

fn finals(per_function: &[Vec<RunResult>]) -> Vec<Vec<f64>> {
    per_function
        .iter()
        .map(|runs| runs.iter().map(|r| r.best_fitness).collect())
        .collect()
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let collected: Vec<f64> = values.collect();
    collected.iter().sum::<f64>() / collected.len() as f64
}
