//! Nonparametric comparison machinery: the paired Wilcoxon signed-rank test
//! and mean-fitness rank tables.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("paired samples must have equal lengths, got {a} and {b}")]
    UnequalLengths { a: usize, b: usize },
    #[error("need at least {min} paired samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("run counts differ between algorithms at function {function}")]
    UnequalRunCounts { function: usize },
}

/// Treatment of zero differences.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ZeroPolicy {
    /// Classic Wilcoxon: zero differences are dropped before ranking.
    #[default]
    Drop,
    /// Pratt: zeros participate in ranking, then their ranks are discarded.
    Pratt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WilcoxonMethod {
    /// Full enumeration of the 2^n sign assignments (n <= 12).
    Exact,
    /// Normal approximation with tie-corrected variance and continuity
    /// correction.
    NormalApprox,
    /// All differences were zero; `p = 1` by convention.
    Degenerate,
}

#[derive(Clone, Copy, Debug)]
pub struct WilcoxonResult {
    /// `min(W+, W-)` over the signed ranks.
    pub w_statistic: f64,
    /// Two-sided p-value in `(0, 1]`.
    pub p_value: f64,
    /// Number of nonzero differences actually ranked.
    pub n_effective: usize,
    pub method: WilcoxonMethod,
}

impl WilcoxonResult {
    pub fn is_degenerate(&self) -> bool {
        self.method == WilcoxonMethod::Degenerate
    }
}

/// Paired two-sided Wilcoxon signed-rank test with classic zero handling.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult, StatsError> {
    wilcoxon_signed_rank_with(a, b, ZeroPolicy::Drop)
}

/// Paired two-sided Wilcoxon signed-rank test.
///
/// Differences `a - b` are ranked by absolute value with average ranks for
/// ties. For at most 12 effective samples the p-value enumerates all sign
/// assignments exactly; above that a normal approximation with tie-corrected
/// variance and a 0.5 continuity correction is used.
pub fn wilcoxon_signed_rank_with(
    a: &[f64],
    b: &[f64],
    policy: ZeroPolicy,
) -> Result<WilcoxonResult, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::UnequalLengths {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.len() < 5 {
        return Err(StatsError::TooFewSamples {
            min: 5,
            got: a.len(),
        });
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let zeros = diffs.iter().filter(|d| **d == 0.0).count();

    // Ranking set: nonzero diffs under Drop, everything under Pratt.
    let ranked: Vec<f64> = match policy {
        ZeroPolicy::Drop => diffs.iter().copied().filter(|d| *d != 0.0).collect(),
        ZeroPolicy::Pratt => diffs.clone(),
    };
    let n_effective = ranked.len() - if policy == ZeroPolicy::Pratt { zeros } else { 0 };
    if n_effective == 0 {
        return Ok(WilcoxonResult {
            w_statistic: 0.0,
            p_value: 1.0,
            n_effective: 0,
            method: WilcoxonMethod::Degenerate,
        });
    }

    let abs: Vec<f64> = ranked.iter().map(|d| d.abs()).collect();
    let doubled_ranks = doubled_average_ranks(&abs);

    // Signed-rank sums over nonzero differences, in doubled-rank units.
    let mut w_plus_2: u64 = 0;
    let mut total_2: u64 = 0;
    let mut nonzero_ranks_2: Vec<u64> = Vec::with_capacity(n_effective);
    for (d, &r2) in ranked.iter().zip(&doubled_ranks) {
        if *d == 0.0 {
            continue; // Pratt: zeros ranked but not summed
        }
        total_2 += r2;
        nonzero_ranks_2.push(r2);
        if *d > 0.0 {
            w_plus_2 += r2;
        }
    }
    let w_minus_2 = total_2 - w_plus_2;
    let w_min_2 = w_plus_2.min(w_minus_2);
    let w_statistic = w_min_2 as f64 / 2.0;

    if n_effective <= 12 {
        let p_value = exact_two_sided_p(&nonzero_ranks_2, w_min_2);
        return Ok(WilcoxonResult {
            w_statistic,
            p_value,
            n_effective,
            method: WilcoxonMethod::Exact,
        });
    }

    // Normal approximation. Mean and variance of W+ under the null; under
    // Pratt the zero ranks shift both.
    let n = ranked.len() as f64;
    let z = zeros as f64;
    let (mean, mut variance) = match policy {
        ZeroPolicy::Drop => {
            let m = n_effective as f64;
            (m * (m + 1.0) / 4.0, m * (m + 1.0) * (2.0 * m + 1.0) / 24.0)
        }
        ZeroPolicy::Pratt => (
            (n * (n + 1.0) - z * (z + 1.0)) / 4.0,
            (n * (n + 1.0) * (2.0 * n + 1.0) - z * (z + 1.0) * (2.0 * z + 1.0)) / 24.0,
        ),
    };
    variance -= tie_correction(&nonzero_ranks_2) / 48.0;
    let sd = variance.sqrt();
    let z_score = (w_min_2 as f64 / 2.0 - mean + 0.5) / sd;
    let p_value = (2.0 * normal_cdf(z_score)).clamp(f64::MIN_POSITIVE, 1.0);
    Ok(WilcoxonResult {
        w_statistic,
        p_value,
        n_effective,
        method: WilcoxonMethod::NormalApprox,
    })
}

/// Average ranks (1-based) scaled by two so ties of even size stay integral.
fn doubled_average_ranks(values: &[f64]) -> Vec<u64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut doubled = vec![0u64; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share the average (i + j + 2) / 2
        let avg_doubled = (i + j + 2) as u64;
        for k in i..=j {
            doubled[order[k]] = avg_doubled;
        }
        i = j + 1;
    }
    doubled
}

/// `Σ (t³ - t)` over tie groups, computed from doubled ranks.
fn tie_correction(doubled_ranks: &[u64]) -> f64 {
    let mut sorted = doubled_ranks.to_vec();
    sorted.sort_unstable();
    let mut sum = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        sum += t * t * t - t;
        i = j + 1;
    }
    sum
}

/// Exact two-sided p: the fraction of the 2^n equally likely sign
/// assignments whose `min(W+, W-)` does not exceed the observed one.
fn exact_two_sided_p(doubled_ranks: &[u64], observed_min_2: u64) -> f64 {
    let n = doubled_ranks.len();
    debug_assert!(n <= 20, "enumeration cost grows as 2^n");
    let total_2: u64 = doubled_ranks.iter().sum();
    let mut hits: u64 = 0;
    for mask in 0u32..(1 << n) {
        let mut w_plus_2: u64 = 0;
        for (bit, &r2) in doubled_ranks.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                w_plus_2 += r2;
            }
        }
        let w_min_2 = w_plus_2.min(total_2 - w_plus_2);
        if w_min_2 <= observed_min_2 {
            hits += 1;
        }
    }
    hits as f64 / (1u64 << n) as f64
}

/// Standard normal CDF.
fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Ranks each row with competition ranking (equal values share the smallest
/// rank; the next distinct value skips the tied positions) and averages the
/// ranks per column.
///
/// Rows are functions, columns are algorithms, entries are mean final
/// fitness; rank 1 is the smallest entry.
pub fn rank_table(rows: &[Vec<f64>]) -> Result<(Vec<Vec<u32>>, Vec<f64>), StatsError> {
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut ranks = Vec::with_capacity(rows.len());
    for (ri, row) in rows.iter().enumerate() {
        if let Some(ci) = row.iter().position(|v| !v.is_finite()) {
            return Err(StatsError::NonFiniteEntry { row: ri, col: ci });
        }
        let row_ranks: Vec<u32> = row
            .iter()
            .map(|v| 1 + row.iter().filter(|w| **w < *v).count() as u32)
            .collect();
        ranks.push(row_ranks);
    }
    let mut average = vec![0.0; n_cols];
    for row in &ranks {
        for (avg, &r) in average.iter_mut().zip(row) {
            *avg += f64::from(r);
        }
    }
    for avg in &mut average {
        *avg /= ranks.len() as f64;
    }
    Ok((ranks, average))
}

/// Outcome of one paired comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignificanceCell {
    pub p_value: f64,
    /// `1` first algorithm significantly better (smaller), `-1` significantly
    /// worse, `0` not significantly different.
    pub verdict: i8,
}

/// Compares two algorithms function by function: paired Wilcoxon on the final
/// fitness vectors at significance level `alpha`, with the winner decided by
/// the sample medians (minimization).
pub fn significance_matrix(
    a_runs: &[Vec<f64>],
    b_runs: &[Vec<f64>],
    alpha: f64,
) -> Result<Vec<SignificanceCell>, StatsError> {
    if a_runs.len() != b_runs.len() {
        return Err(StatsError::UnequalLengths {
            a: a_runs.len(),
            b: b_runs.len(),
        });
    }
    let mut cells = Vec::with_capacity(a_runs.len());
    for (fi, (a, b)) in a_runs.iter().zip(b_runs).enumerate() {
        if a.len() != b.len() {
            return Err(StatsError::UnequalRunCounts { function: fi });
        }
        let test = wilcoxon_signed_rank(a, b)?;
        let verdict = if test.p_value < alpha && !test.is_degenerate() {
            let ma = median(a);
            let mb = median(b);
            if ma < mb {
                1
            } else if ma > mb {
                -1
            } else {
                0
            }
        } else {
            0
        };
        cells.push(SignificanceCell {
            p_value: test.p_value,
            verdict,
        });
    }
    Ok(cells)
}

/// Sample median (average of the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}
