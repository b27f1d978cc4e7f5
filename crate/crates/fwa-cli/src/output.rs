//! File formats: per-run trace CSV, summary JSON and telemetry CSVs.
//!
//! All CSVs are plain comma-separated text with a fixed header row; nothing
//! is quoted (fields never contain commas). Floats print with Rust's
//! shortest-roundtrip formatting so files parse back losslessly and
//! identical runs produce byte-identical traces.

use anyhow::{Context, Result};
use fwa::RunResult;
use serde::Serialize;
use std::fs;
use std::path::Path;

/// The JSON summary written next to each trace.
#[derive(Debug, Serialize)]
pub struct RunSummary<'a> {
    pub algorithm: &'a str,
    pub function: &'a str,
    pub dim: usize,
    pub seed: u64,
    pub best_fitness: f64,
    pub best_position: &'a [f64],
    pub evals_used: u64,
    pub e_max: u64,
    pub iterations: u64,
    pub wall_time_s: f64,
    pub improvement_events: usize,
    pub alpha_cf: Option<f64>,
    pub beta_cf: Option<f64>,
    pub theta_cf: Option<f64>,
    pub alpha_gcf: Option<f64>,
    pub beta_gcf: Option<f64>,
    pub theta_gcf: Option<f64>,
}

impl<'a> RunSummary<'a> {
    pub fn new(result: &'a RunResult) -> Self {
        Self {
            algorithm: &result.algorithm,
            function: &result.function,
            dim: result.dim,
            seed: result.seed,
            best_fitness: result.best_fitness,
            best_position: &result.best_position,
            evals_used: result.evals_used,
            e_max: result.e_max,
            iterations: result.iterations,
            wall_time_s: result.wall_time,
            improvement_events: result.improvement_events.len(),
            alpha_cf: result.significance.alpha_cf,
            beta_cf: result.significance.beta_cf,
            theta_cf: result.significance.theta_cf,
            alpha_gcf: result.significance.alpha_gcf,
            beta_gcf: result.significance.beta_gcf,
            theta_gcf: result.significance.theta_gcf,
        }
    }
}

/// Writes `run_<k>.csv`, `run_<k>.json`, `run_<k>.events.csv` and
/// `run_<k>.ratios.csv` into `dir`.
pub fn write_run_files(dir: &Path, stem: &str, result: &RunResult) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let mut trace = String::from("evals,best_so_far\n");
    for point in &result.trace {
        trace.push_str(&format!("{},{}\n", point.evals, point.best));
    }
    write_file(&dir.join(format!("{stem}.csv")), &trace)?;

    let summary = serde_json::to_string_pretty(&RunSummary::new(result))?;
    write_file(&dir.join(format!("{stem}.json")), &summary)?;

    let mut events = String::from("evals,firework_id,is_cf,is_gcf\n");
    for event in &result.improvement_events {
        events.push_str(&format!(
            "{},{},{},{}\n",
            event.evals_at_event,
            event.credited_firework_id,
            event.credited_is_cf,
            event.credited_is_gcf
        ));
    }
    write_file(&dir.join(format!("{stem}.events.csv")), &events)?;

    let mut ratios = String::from("iteration,ratio,improved,clamped\n");
    for record in &result.amplitude_trace {
        ratios.push_str(&format!(
            "{},{},{},{}\n",
            record.iteration,
            record.ratio(),
            record.improved,
            record.clamped
        ));
    }
    write_file(&dir.join(format!("{stem}.ratios.csv")), &ratios)?;
    Ok(())
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Reads externally produced results: CSV rows `function_id,final_fitness`,
/// one row per run, with an optional header. Returns per-function final
/// fitness vectors keyed by the function id.
pub fn read_external_results(path: &Path) -> Result<Vec<(String, Vec<f64>)>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read external results {}", path.display()))?;
    let mut per_function: Vec<(String, Vec<f64>)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (id, value) = line
            .split_once(',')
            .with_context(|| format!("line {}: expected `function_id,final_fitness`", lineno + 1))?;
        let id = id.trim();
        let value = value.trim();
        if lineno == 0 && value.parse::<f64>().is_err() {
            continue; // header row
        }
        let fitness: f64 = value
            .parse()
            .with_context(|| format!("line {}: bad fitness {value:?}", lineno + 1))?;
        match per_function.iter_mut().find(|(name, _)| name == id) {
            Some((_, values)) => values.push(fitness),
            None => per_function.push((id.to_string(), vec![fitness])),
        }
    }
    Ok(per_function)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn external_results_parse_with_and_without_header() {
        let dir = std::env::temp_dir().join("fwa_cli_output_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("abc.csv");
        std::fs::write(
            &path,
            "function_id,final_fitness\nsphere,1.5\nsphere,2.5\nackley,0.25\n",
        )
        .unwrap();
        let parsed = read_external_results(&path).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0], ("sphere".to_string(), vec![1.5, 2.5]));
        assert_eq!(parsed[1], ("ackley".to_string(), vec![0.25]));

        std::fs::write(&path, "sphere,1.0\n").unwrap();
        let parsed = read_external_results(&path).unwrap();
        assert_eq!(parsed[0].1, vec![1.0]);
    }
}
