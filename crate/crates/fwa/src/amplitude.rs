//! Explosion-amplitude control: the nonlinearly decaying minimum-amplitude
//! floor, the multiplicative dynamic rule, and the adaptive
//! infinity-norm-distance rule with smoothing.

use crate::operators::SparkBatch;
use crate::swarm::AdaptiveDistanceRule;

/// One core-firework amplitude update, as recorded in a run trace.
#[derive(Clone, Copy, Debug)]
pub struct AmplitudeRecord {
    pub iteration: u64,
    /// Amplitude used for this iteration's explosion.
    pub before: f64,
    /// Amplitude that will be used next iteration.
    pub after: f64,
    /// Whether any explosion spark improved on the core firework.
    pub improved: bool,
    /// Whether the upper clamp (search range) altered the update.
    pub clamped: bool,
}

impl AmplitudeRecord {
    pub fn ratio(&self) -> f64 {
        self.after / self.before
    }
}

/// The minimum-amplitude floor at evaluation count `t`:
/// `A_init - (A_init - A_final) / E_max * sqrt((2 E_max - t) t)`.
///
/// Decreases non-linearly from `a_init` at `t = 0` to `a_final` at
/// `t = e_max`.
pub fn meacs_min_amplitude(t: u64, e_max: u64, a_init: f64, a_final: f64) -> f64 {
    debug_assert!(t <= e_max);
    debug_assert!(a_final < a_init);
    // endpoints of the schedule are exact by definition
    if t == 0 {
        return a_init;
    }
    if t == e_max {
        return a_final;
    }
    let t = t as f64;
    let e_max = e_max as f64;
    a_init - (a_init - a_final) / e_max * ((2.0 * e_max - t) * t).sqrt()
}

/// Applies the minimum-amplitude check: amplitudes below the floor are
/// lifted to it.
pub fn apply_meacs(amplitude: f64, a_min: f64) -> f64 {
    amplitude.max(a_min)
}

/// The dynamic amplitude rule: amplify on improvement, reduce otherwise.
pub fn dyn_update(a_prev: f64, improved: bool, c_a: f64, c_r: f64) -> f64 {
    debug_assert!(c_r < 1.0 && 1.0 < c_a);
    if improved {
        a_prev * c_a
    } else {
        a_prev * c_r
    }
}

/// Infinity-norm distance, `max_k |a_k - b_k|`.
pub fn inf_norm(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "inf_norm requires equal-length vectors");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The adaptive amplitude update.
///
/// A candidate distance is chosen among the core firework's sparks whose
/// fitness is strictly worse than the core firework's, measured to the best
/// individual of `{CF} ∪ sparks`; the next amplitude is the smoothed value
/// `0.5 (a_used + lambda * candidate)`. With [`AdaptiveDistanceRule::MinWorse`]
/// the candidate is the smallest qualifying distance (falling back to
/// `a_used` when no spark qualifies); with
/// [`AdaptiveDistanceRule::MaxBeyondCurrent`] the candidate starts at
/// `a_used` and takes any larger qualifying distance.
pub fn afwa_update(
    a_used: f64,
    cf_fitness: f64,
    sparks: &SparkBatch,
    x_best: &[f64],
    lambda: f64,
    rule: AdaptiveDistanceRule,
) -> f64 {
    let candidate = match rule {
        AdaptiveDistanceRule::MinWorse => sparks
            .positions
            .iter()
            .zip(&sparks.fitnesses)
            .filter(|(_, &f)| f > cf_fitness)
            .map(|(pos, _)| inf_norm(pos, x_best))
            .fold(f64::INFINITY, f64::min),
        AdaptiveDistanceRule::MaxBeyondCurrent => {
            let mut candidate = a_used;
            for (pos, &f) in sparks.positions.iter().zip(&sparks.fitnesses) {
                let d = inf_norm(pos, x_best);
                if d > candidate && f > cf_fitness {
                    candidate = d;
                }
            }
            candidate
        }
    };
    let candidate = if candidate.is_finite() { candidate } else { a_used };
    0.5 * (a_used + lambda * candidate)
}

/// Run-level dynamic amplitude state for the core firework.
#[derive(Clone, Debug)]
pub struct DynamicAmplitude {
    pub current: f64,
    c_a: f64,
    c_r: f64,
    max: f64,
}

impl DynamicAmplitude {
    /// Starts at the full search range, which is also the upper clamp.
    pub fn new(search_range: f64, c_a: f64, c_r: f64) -> Self {
        Self {
            current: search_range,
            c_a,
            c_r,
            max: search_range,
        }
    }

    pub fn update(&mut self, iteration: u64, improved: bool) -> AmplitudeRecord {
        let before = self.current;
        let raw = dyn_update(before, improved, self.c_a, self.c_r);
        let after = raw.min(self.max);
        self.current = after;
        AmplitudeRecord {
            iteration,
            before,
            after,
            improved,
            clamped: after < raw,
        }
    }
}

/// Run-level adaptive amplitude state for the core firework.
#[derive(Clone, Debug)]
pub struct AdaptiveAmplitude {
    pub current: f64,
    lambda: f64,
    rule: AdaptiveDistanceRule,
    max: f64,
}

impl AdaptiveAmplitude {
    pub fn new(search_range: f64, lambda: f64, rule: AdaptiveDistanceRule) -> Self {
        Self {
            current: search_range,
            lambda,
            rule,
            max: search_range,
        }
    }

    pub fn update(
        &mut self,
        iteration: u64,
        improved: bool,
        cf_fitness: f64,
        cf_sparks: &SparkBatch,
        x_best: &[f64],
    ) -> AmplitudeRecord {
        let before = self.current;
        let raw = afwa_update(before, cf_fitness, cf_sparks, x_best, self.lambda, self.rule);
        let after = raw.min(self.max);
        self.current = after;
        AmplitudeRecord {
            iteration,
            before,
            after,
            improved,
            clamped: after < raw,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::SparkKind;

    const TOL: f64 = 1e-12;

    #[test]
    fn meacs_endpoints_are_exact() {
        assert_eq!(meacs_min_amplitude(0, 10_000, 2.0, 0.5), 2.0);
        assert_eq!(meacs_min_amplitude(10_000, 10_000, 2.0, 0.5), 0.5);
    }

    #[test]
    fn meacs_midpoint_matches_closed_form() {
        // a_init = 2, a_final = 0, t = E/2: 2 - 2 sqrt(0.75)
        let v = meacs_min_amplitude(5_000, 10_000, 2.0, 1e-300);
        let expected = 2.0 - 2.0 * 0.75f64.sqrt();
        assert!((v - expected).abs() < 1e-9, "{v} vs {expected}");
        assert!((expected - 0.267_949_192_431_122_7).abs() < TOL);
    }

    #[test]
    fn meacs_is_monotone_non_increasing() {
        let e_max = 1_000;
        let mut prev = f64::INFINITY;
        for t in 0..=e_max {
            let v = meacs_min_amplitude(t, e_max, 4.0, 0.2);
            assert!(v <= prev + TOL, "t = {t}");
            prev = v;
        }
    }

    #[test]
    fn meacs_floor_behavior() {
        assert_eq!(apply_meacs(0.001, 0.5), 0.5);
        assert_eq!(apply_meacs(2.0, 0.5), 2.0);
        assert_eq!(apply_meacs(0.5, 0.5), 0.5);
    }

    #[test]
    fn dynamic_rule_matches_factors() {
        assert!((dyn_update(1.0, true, 1.2, 0.9) - 1.2).abs() < TOL);
        assert!((dyn_update(1.0, false, 1.2, 0.9) - 0.9).abs() < TOL);
    }

    #[test]
    fn dynamic_rule_chains_multiplicatively() {
        let mut a = 1.0;
        a = dyn_update(a, true, 1.2, 0.9);
        a = dyn_update(a, false, 1.2, 0.9);
        a = dyn_update(a, false, 1.2, 0.9);
        assert!((a - 0.972).abs() < TOL);
    }

    #[test]
    fn dynamic_log_identity_holds_over_random_traces() {
        use crate::rng::{RandomSource, RngStream};
        let mut rng = RngStream::new(64);
        for _ in 0..50 {
            // huge clamp so no update is clamped
            let mut dyn_amp = DynamicAmplitude::new(1e12, 1.2, 0.9);
            dyn_amp.current = 1.0;
            let a0 = dyn_amp.current;
            let mut improvements = 0u32;
            let mut misses = 0u32;
            for it in 0..200 {
                let improved = rng.next_f64() < 0.4;
                let rec = dyn_amp.update(it, improved);
                assert!(!rec.clamped);
                if improved {
                    improvements += 1;
                } else {
                    misses += 1;
                }
            }
            let lhs = dyn_amp.current.ln() - a0.ln();
            let rhs = f64::from(improvements) * 1.2f64.ln() + f64::from(misses) * 0.9f64.ln();
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn dynamic_update_clamps_at_search_range() {
        let mut dyn_amp = DynamicAmplitude::new(10.0, 1.2, 0.9);
        let rec = dyn_amp.update(0, true);
        assert!(rec.clamped);
        assert_eq!(rec.after, 10.0);
        assert!((rec.ratio() - 1.0).abs() < TOL);
    }

    #[test]
    fn inf_norm_examples() {
        assert_eq!(inf_norm(&[3.0, -5.0], &[0.0, 0.0]), 5.0);
        assert_eq!(inf_norm(&[1.5, 2.5], &[1.5, 2.5]), 0.0);
        assert!((inf_norm(&[0.1, 0.2], &[0.8, -0.3]) - 0.7).abs() < TOL);
    }

    #[test]
    #[should_panic(expected = "equal-length")]
    fn inf_norm_rejects_length_mismatch() {
        inf_norm(&[1.0], &[1.0, 2.0]);
    }

    fn batch(parent: u64, sparks: &[(&[f64], f64)]) -> SparkBatch {
        let mut b = SparkBatch::new(parent, SparkKind::Explosion);
        for (pos, fit) in sparks {
            b.push(pos.to_vec(), *fit);
        }
        b
    }

    #[test]
    fn printed_rule_without_qualifying_spark_smooths_a_used() {
        // all sparks better than the CF: no candidate, so 0.5 (1 + 1.3 * 1)
        let sparks = batch(0, &[(&[0.1, 0.1], -1.0), (&[0.2, 0.2], -2.0)]);
        let a = afwa_update(
            1.0,
            0.0,
            &sparks,
            &[0.2, 0.2],
            1.3,
            AdaptiveDistanceRule::MaxBeyondCurrent,
        );
        assert!((a - 1.15).abs() < TOL);
    }

    #[test]
    fn printed_rule_takes_running_max_of_qualifying_distances() {
        // sphere around CF = (0,0) with f(CF) = 0; x_best = (0.1, 0.2);
        // qualifying distances: spark2 at inf-norm 2.4 (max)
        let sparks = batch(
            0,
            &[
                (&[0.1, 0.2], 0.05),
                (&[2.5, -0.3], 6.34),
                (&[-0.4, 0.9], 0.97),
            ],
        );
        let a = afwa_update(
            1.0,
            0.0,
            &sparks,
            &[0.1, 0.2],
            1.3,
            AdaptiveDistanceRule::MaxBeyondCurrent,
        );
        assert!((a - 2.06).abs() < TOL);
    }

    #[test]
    fn smoothing_fixed_point_when_sparks_sit_on_best() {
        // lambda = 1 and every qualifying distance equal to zero is excluded
        // by the fitness condition, so the candidate stays a_used.
        let sparks = batch(0, &[(&[1.0, 1.0], -5.0), (&[1.0, 1.0], -5.0)]);
        for rule in [
            AdaptiveDistanceRule::MinWorse,
            AdaptiveDistanceRule::MaxBeyondCurrent,
        ] {
            let a = afwa_update(0.7, 0.0, &sparks, &[1.0, 1.0], 1.0, rule);
            assert!((a - 0.7).abs() < TOL, "{rule:?}");
        }
    }

    #[test]
    fn min_worse_rule_takes_closest_qualifying_spark() {
        // worse sparks at distances 0.5 and 2.4 from x_best; min is 0.5
        let sparks = batch(
            0,
            &[
                (&[0.6, 0.2], 0.4),  // worse, distance 0.5
                (&[2.5, -0.3], 6.3), // worse, distance 2.4
                (&[0.1, 0.2], -1.0), // better, excluded
            ],
        );
        let a = afwa_update(
            1.0,
            0.0,
            &sparks,
            &[0.1, 0.2],
            1.3,
            AdaptiveDistanceRule::MinWorse,
        );
        // 0.5 * (1 + 1.3 * 0.5) = 0.825
        assert!((a - 0.825).abs() < TOL);
    }

    #[test]
    fn min_worse_rule_can_shrink_and_grow() {
        let shrink = afwa_update(
            1.0,
            0.0,
            &batch(0, &[(&[0.05, 0.0], 1.0)]),
            &[0.0, 0.0],
            1.3,
            AdaptiveDistanceRule::MinWorse,
        );
        assert!(shrink < 1.0);
        let grow = afwa_update(
            1.0,
            0.0,
            &batch(0, &[(&[1.9, 0.0], 1.0)]),
            &[0.0, 0.0],
            1.3,
            AdaptiveDistanceRule::MinWorse,
        );
        assert!(grow > 1.0);
    }

    #[test]
    fn afwa_output_is_positive_and_bounded() {
        use crate::rng::{RandomSource, RngStream};
        let mut rng = RngStream::new(21);
        let extent = 10.0;
        for _ in 0..300 {
            let a_used = rng.uniform(1e-6, extent);
            let lambda = rng.uniform(0.5, 2.0);
            let cf_fitness = rng.uniform(-5.0, 5.0);
            let mut sparks = SparkBatch::new(0, SparkKind::Explosion);
            let x_best: Vec<f64> = (0..3).map(|_| rng.uniform(-extent / 2.0, extent / 2.0)).collect();
            for _ in 0..rng.index(8) + 1 {
                let pos: Vec<f64> = (0..3).map(|_| rng.uniform(-extent / 2.0, extent / 2.0)).collect();
                let fit = rng.uniform(-5.0, 5.0);
                sparks.push(pos, fit);
            }
            for rule in [
                AdaptiveDistanceRule::MinWorse,
                AdaptiveDistanceRule::MaxBeyondCurrent,
            ] {
                let a = afwa_update(a_used, cf_fitness, &sparks, &x_best, lambda, rule);
                assert!(a > 0.0);
                let bound = 0.5 * (a_used + lambda * a_used.max(extent));
                assert!(a <= bound + 1e-9, "{a} > {bound}");
            }
        }
    }
}
