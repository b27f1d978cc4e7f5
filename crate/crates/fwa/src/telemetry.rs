//! Run instrumentation: significant-improvement events, general-core-firework
//! membership tracking, resource-share metrics and amplitude-ratio analysis.

use crate::amplitude::AmplitudeRecord;
use crate::operators::{SparkBatch, SparkKind};
use crate::swarm::EvalLedger;
use std::collections::BTreeSet;

/// One significant improvement: an iteration whose best explosion spark beat
/// every current firework, credited to the firework that generated it.
#[derive(Clone, Copy, Debug)]
pub struct ImprovementEvent {
    pub evals_at_event: u64,
    pub credited_firework_id: u64,
    pub credited_is_cf: bool,
    pub credited_is_gcf: bool,
}

/// Improvement-share and resource-share fractions. `None` marks a ratio whose
/// denominator was zero (no events, or no spark evaluations).
#[derive(Clone, Copy, Debug, Default)]
pub struct SignificanceMetrics {
    /// Core-firework share of all significant improvements.
    pub alpha_cf: Option<f64>,
    /// Same share restricted to events at or after `e_max / 30` evaluations.
    pub beta_cf: Option<f64>,
    pub alpha_gcf: Option<f64>,
    pub beta_gcf: Option<f64>,
    /// Core-firework share of spark evaluations.
    pub theta_cf: Option<f64>,
    pub theta_gcf: Option<f64>,
}

/// Checks one iteration's explosion sparks for a significant improvement.
///
/// Returns an event when the minimal-fitness explosion spark beats every
/// current firework (strictly); at most one event per iteration. Gaussian
/// sparks never qualify.
pub fn record_significant_improvement(
    iteration_sparks: &[SparkBatch],
    min_firework_fitness: f64,
    cf_id: u64,
    gcf_members: &BTreeSet<u64>,
    evals_used: u64,
) -> Option<ImprovementEvent> {
    let mut best: Option<(u64, f64)> = None;
    for batch in iteration_sparks {
        if batch.kind != SparkKind::Explosion {
            continue;
        }
        if let Some((_, fitness)) = batch.best() {
            if best.map_or(true, |(_, b)| fitness < b) {
                best = Some((batch.parent_id, fitness));
            }
        }
    }
    let (parent, fitness) = best?;
    (fitness < min_firework_fitness).then(|| ImprovementEvent {
        evals_at_event: evals_used,
        credited_firework_id: parent,
        credited_is_cf: parent == cf_id,
        credited_is_gcf: gcf_members.contains(&parent),
    })
}

/// A member of the next swarm, as seen by GCF tracking.
#[derive(Clone, Copy, Debug)]
pub struct SelectedIndividual {
    /// Id the individual carries into the next iteration.
    pub new_id: u64,
    pub origin: SelectionOrigin,
}

#[derive(Clone, Copy, Debug)]
pub enum SelectionOrigin {
    /// A firework that survived selection, with its stored parent link.
    Survivor { id: u64, parent_id: Option<u64> },
    /// A spark promoted to firework.
    Spark { parent_id: u64, kind: SparkKind },
}

/// Recomputes general-core-firework membership after selection.
///
/// With `x_b` the best explosion spark of the iteration and `P(x_b)` its
/// generating firework: if `x_b` improved on the core firework, the new
/// members are exactly the selected individuals sharing `x_b`'s parent plus
/// that parent itself; otherwise membership continues through individuals
/// parented by the core firework or already in the set. Membership is
/// defined over fireworks and explosion sparks; a selected Gaussian spark
/// never joins.
pub fn update_gcf_set(
    prev_cf_id: u64,
    prev_cf_fitness: f64,
    prev_gcf: &BTreeSet<u64>,
    best_spark: Option<(u64, f64)>,
    selected: &[SelectedIndividual],
) -> BTreeSet<u64> {
    let mut next = BTreeSet::new();
    match best_spark {
        Some((xb_parent, xb_fitness)) if xb_fitness < prev_cf_fitness => {
            for sel in selected {
                let member = match sel.origin {
                    SelectionOrigin::Spark {
                        parent_id,
                        kind: SparkKind::Explosion,
                    } => parent_id == xb_parent,
                    SelectionOrigin::Spark { .. } => false,
                    SelectionOrigin::Survivor { id, parent_id } => {
                        id == xb_parent || parent_id == Some(xb_parent)
                    }
                };
                if member {
                    next.insert(sel.new_id);
                }
            }
        }
        _ => {
            for sel in selected {
                let member = match sel.origin {
                    SelectionOrigin::Spark {
                        parent_id,
                        kind: SparkKind::Explosion,
                    } => parent_id == prev_cf_id,
                    SelectionOrigin::Spark { .. } => false,
                    SelectionOrigin::Survivor { id, parent_id } => {
                        prev_gcf.contains(&id) || parent_id == Some(prev_cf_id)
                    }
                };
                if member {
                    next.insert(sel.new_id);
                }
            }
        }
    }
    next
}

/// Computes the improvement-share and resource-share fractions for one run.
///
/// θ is the ledger's spark-evaluation share: initialization and reinit
/// evaluations are not attributed to any firework and sit outside both the
/// numerator and denominator.
pub fn compute_significance_metrics(
    events: &[ImprovementEvent],
    ledger: &EvalLedger,
    e_max: u64,
) -> SignificanceMetrics {
    let share = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);

    let total = events.len();
    let cf_total = events.iter().filter(|e| e.credited_is_cf).count();
    let gcf_total = events.iter().filter(|e| e.credited_is_gcf).count();

    let cutoff = e_max as f64 / 30.0;
    let late: Vec<&ImprovementEvent> = events
        .iter()
        .filter(|e| e.evals_at_event as f64 >= cutoff)
        .collect();
    let cf_late = late.iter().filter(|e| e.credited_is_cf).count();
    let gcf_late = late.iter().filter(|e| e.credited_is_gcf).count();

    SignificanceMetrics {
        alpha_cf: share(cf_total, total),
        beta_cf: share(cf_late, late.len()),
        alpha_gcf: share(gcf_total, total),
        beta_gcf: share(gcf_late, late.len()),
        theta_cf: ledger.theta_cf(),
        theta_gcf: ledger.theta_gcf(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

/// Ratio statistics for one partition (improved or missed iterations).
#[derive(Clone, Debug, Default)]
pub struct RatioPartition {
    pub count: usize,
    pub geo_mean: Option<f64>,
    pub histogram: Vec<HistogramBin>,
}

/// Amplitude-ratio analysis: per-update ratios `after / before` partitioned
/// by whether the iteration improved.
#[derive(Clone, Debug, Default)]
pub struct RatioAnalysis {
    pub improved: RatioPartition,
    pub missed: RatioPartition,
}

fn partition_stats(ratios: &[f64], bins: usize) -> RatioPartition {
    if ratios.is_empty() {
        return RatioPartition::default();
    }
    let geo_mean = (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp();
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let histogram = if min == max {
        vec![HistogramBin {
            lo: min,
            hi: max,
            count: ratios.len() as u64,
        }]
    } else {
        let width = (max - min) / bins as f64;
        let mut counts = vec![0u64; bins];
        for &r in ratios {
            let idx = (((r - min) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        counts
            .into_iter()
            .enumerate()
            .map(|(i, count)| HistogramBin {
                lo: min + i as f64 * width,
                hi: min + (i + 1) as f64 * width,
                count,
            })
            .collect()
    };
    RatioPartition {
        count: ratios.len(),
        geo_mean: Some(geo_mean),
        histogram,
    }
}

/// Builds per-partition histograms (uniform bins over each partition's
/// observed range) and geometric means from an amplitude trace.
pub fn amplitude_ratio_histogram(trace: &[AmplitudeRecord], bins: usize) -> RatioAnalysis {
    assert!(bins >= 1);
    let improved: Vec<f64> = trace
        .iter()
        .filter(|r| r.improved)
        .map(AmplitudeRecord::ratio)
        .collect();
    let missed: Vec<f64> = trace
        .iter()
        .filter(|r| !r.improved)
        .map(AmplitudeRecord::ratio)
        .collect();
    RatioAnalysis {
        improved: partition_stats(&improved, bins),
        missed: partition_stats(&missed, bins),
    }
}
