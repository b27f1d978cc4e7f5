//! The explosion operator (fitness-proportional amplitudes and spark counts,
//! spark generation, out-of-bounds remapping) and the Gaussian mutation
//! operator.
//!
//! Draw order inside a spark is fixed so runs replay exactly: the dimension
//! mask `z` is drawn first (one uniform per dimension), then offsets for the
//! selected dimensions in ascending order, with the remap draw (if any)
//! immediately after the offset that left the box.

use crate::rng::RandomSource;

/// Which operator produced a batch of sparks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SparkKind {
    Explosion,
    Gaussian,
}

/// Sparks generated by one firework in one iteration, with their fitness.
#[derive(Clone, Debug)]
pub struct SparkBatch {
    pub parent_id: u64,
    pub kind: SparkKind,
    pub positions: Vec<Vec<f64>>,
    pub fitnesses: Vec<f64>,
}

impl SparkBatch {
    pub fn new(parent_id: u64, kind: SparkKind) -> Self {
        Self {
            parent_id,
            kind,
            positions: Vec::new(),
            fitnesses: Vec::new(),
        }
    }

    pub fn push(&mut self, position: Vec<f64>, fitness: f64) {
        self.positions.push(position);
        self.fitnesses.push(fitness);
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Index and fitness of the best spark in the batch.
    pub fn best(&self) -> Option<(usize, f64)> {
        self.fitnesses
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Fitness-proportional explosion amplitudes:
/// `A_i = Â (f_i - y_min + ε) / (Σ (f_j - y_min) + ε)` with ε the f64
/// machine epsilon. Better fireworks get smaller amplitudes; when every
/// fitness is equal all amplitudes degenerate to `Â`.
pub fn compute_amplitudes(fitnesses: &[f64], amp_constant: f64) -> Vec<f64> {
    assert!(!fitnesses.is_empty());
    let eps = f64::EPSILON;
    let y_min = fitnesses.iter().copied().fold(f64::INFINITY, f64::min);
    let denom: f64 = fitnesses.iter().map(|f| f - y_min).sum::<f64>() + eps;
    fitnesses
        .iter()
        .map(|f| amp_constant * (f - y_min + eps) / denom)
        .collect()
}

/// Fitness-proportional spark counts:
/// `s_i = M_e (y_max - f_i + ε) / (Σ (y_max - f_j) + ε)`, rounded to nearest,
/// then clamped into `[round(frac_min * M_e), round(frac_max * M_e)]` and
/// floored at one. Better fireworks get more sparks.
pub fn compute_spark_counts(
    fitnesses: &[f64],
    total_sparks: u32,
    frac_min: f64,
    frac_max: f64,
) -> Vec<u32> {
    assert!(!fitnesses.is_empty());
    assert!(0.0 < frac_min && frac_min < frac_max && frac_max <= 1.0);
    let eps = f64::EPSILON;
    let m_e = f64::from(total_sparks);
    let y_max = fitnesses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let denom: f64 = fitnesses.iter().map(|f| y_max - f).sum::<f64>() + eps;
    let lo = ((frac_min * m_e).round() as u32).max(1);
    let hi = ((frac_max * m_e).round() as u32).max(lo);
    fitnesses
        .iter()
        .map(|f| {
            let raw = m_e * (y_max - f + eps) / denom;
            (raw.round() as u32).clamp(lo, hi)
        })
        .collect()
}

/// Remaps a coordinate that left `[lower, upper]` to a uniform position in
/// the dimension's range; in-bounds values pass through unchanged.
pub fn map_out_of_bounds(value: f64, lower: f64, upper: f64, rng: &mut dyn RandomSource) -> f64 {
    debug_assert!(lower < upper);
    if (lower..=upper).contains(&value) {
        value
    } else {
        lower + rng.next_f64() * (upper - lower)
    }
}

/// Generates one explosion spark around `parent`.
///
/// Each dimension is selected with probability 1/2 (`round(rand(0,1))`);
/// every selected dimension receives an independent offset
/// `amplitude * rand(-1, 1)` (or one shared offset when
/// `shared_offset` is set). Coordinates that leave the box are remapped.
pub fn generate_explosion_spark(
    parent: &[f64],
    amplitude: f64,
    lower: &[f64],
    upper: &[f64],
    shared_offset: bool,
    rng: &mut dyn RandomSource,
) -> Vec<f64> {
    let mut spark = parent.to_vec();
    let mask: Vec<bool> = (0..spark.len()).map(|_| rng.next_f64() >= 0.5).collect();
    let mut shared: Option<f64> = None;
    for k in 0..spark.len() {
        if !mask[k] {
            continue;
        }
        let offset = if shared_offset {
            *shared.get_or_insert_with(|| amplitude * rng.uniform(-1.0, 1.0))
        } else {
            amplitude * rng.uniform(-1.0, 1.0)
        };
        spark[k] += offset;
        spark[k] = map_out_of_bounds(spark[k], lower[k], upper[k], rng);
    }
    spark
}

/// Generates one Gaussian spark from `selected`, interpolating toward `best`
/// by a single standard-normal factor shared across the selected dimensions.
pub fn generate_gaussian_spark(
    selected: &[f64],
    best: &[f64],
    lower: &[f64],
    upper: &[f64],
    rng: &mut dyn RandomSource,
) -> Vec<f64> {
    let mut spark = selected.to_vec();
    let mask: Vec<bool> = (0..spark.len()).map(|_| rng.next_f64() >= 0.5).collect();
    let e = rng.standard_normal();
    for k in 0..spark.len() {
        if !mask[k] {
            continue;
        }
        spark[k] += (best[k] - spark[k]) * e;
        spark[k] = map_out_of_bounds(spark[k], lower[k], upper[k], rng);
    }
    spark
}
