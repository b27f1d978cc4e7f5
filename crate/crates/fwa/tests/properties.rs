//! Property tests over the pure operator and statistics surfaces.

use fwa::amplitude::{inf_norm, meacs_min_amplitude};
use fwa::operators::{
    compute_amplitudes, compute_spark_counts, generate_explosion_spark, generate_gaussian_spark,
    map_out_of_bounds,
};
use fwa::rng::{RandomSource, RngStream};
use fwa::selection::{elitism_random_select, Candidate, CandidateOrigin};
use fwa::stats::{rank_table, wilcoxon_signed_rank};
use proptest::collection::vec;
use proptest::prelude::*;

fn finite(range: std::ops::Range<f64>) -> impl Strategy<Value = f64> {
    range.prop_map(|v| if v == 0.0 { 0.0 } else { v })
}

proptest! {
    #[test]
    fn amplitudes_are_positive_and_fitness_ordered(
        fitnesses in vec(finite(-1e6..1e6), 1..12),
        amp_constant in finite(1e-3..1e3),
    ) {
        let amps = compute_amplitudes(&fitnesses, amp_constant);
        prop_assert!(amps.iter().all(|a| *a > 0.0));
        for i in 0..fitnesses.len() {
            for j in 0..fitnesses.len() {
                if fitnesses[i] < fitnesses[j] {
                    prop_assert!(amps[i] <= amps[j]);
                }
            }
        }
    }

    #[test]
    fn spark_counts_are_clamped_and_reverse_ordered(
        fitnesses in vec(finite(-1e6..1e6), 1..12),
        total in 10u32..400,
    ) {
        let counts = compute_spark_counts(&fitnesses, total, 0.04, 0.8);
        let lo = ((0.04 * f64::from(total)).round() as u32).max(1);
        let hi = (0.8 * f64::from(total)).round() as u32;
        prop_assert!(counts.iter().all(|c| (lo..=hi).contains(c)));
        for i in 0..fitnesses.len() {
            for j in 0..fitnesses.len() {
                if fitnesses[i] < fitnesses[j] {
                    prop_assert!(counts[i] >= counts[j]);
                }
            }
        }
    }

    #[test]
    fn meacs_schedule_is_monotone_between_its_endpoints(
        e_max in 10u64..100_000,
        a_init in finite(0.1..100.0),
        shrink in finite(1e-4..0.99),
        steps in 2usize..40,
    ) {
        let a_final = a_init * shrink;
        let mut prev = f64::INFINITY;
        for k in 0..=steps {
            let t = e_max * k as u64 / steps as u64;
            let v = meacs_min_amplitude(t, e_max, a_init, a_final);
            prop_assert!(v <= prev + 1e-12);
            prop_assert!(v <= a_init + 1e-12 && v >= a_final - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn sparks_never_leave_the_box(
        seed in any::<u64>(),
        dim in 1usize..8,
        half_width in finite(0.5..50.0),
        amplitude in finite(1e-6..500.0),
    ) {
        let lower = vec![-half_width; dim];
        let upper = vec![half_width; dim];
        let mut rng = RngStream::new(seed);
        let parent: Vec<f64> = (0..dim).map(|_| rng.uniform(-half_width, half_width)).collect();
        let best: Vec<f64> = (0..dim).map(|_| rng.uniform(-half_width, half_width)).collect();
        for _ in 0..20 {
            let spark =
                generate_explosion_spark(&parent, amplitude, &lower, &upper, false, &mut rng);
            prop_assert!(spark.iter().all(|v| (-half_width..=half_width).contains(v)));
            let gspark = generate_gaussian_spark(&parent, &best, &lower, &upper, &mut rng);
            prop_assert!(gspark.iter().all(|v| (-half_width..=half_width).contains(v)));
        }
    }

    #[test]
    fn out_of_bounds_mapping_is_idempotent_on_the_box(
        seed in any::<u64>(),
        value in finite(-1e4..1e4),
        lo in finite(-100.0..0.0),
        width in finite(1.0..200.0),
    ) {
        let hi = lo + width;
        let mut rng = RngStream::new(seed);
        let mapped = map_out_of_bounds(value, lo, hi, &mut rng);
        prop_assert!(mapped >= lo && mapped <= hi);
        if value >= lo && value <= hi {
            prop_assert_eq!(mapped, value);
        }
    }

    #[test]
    fn inf_norm_is_a_symmetric_premetric(
        a in vec(finite(-1e6..1e6), 1..10),
        shift in finite(-10.0..10.0),
    ) {
        let b: Vec<f64> = a.iter().map(|v| v + shift).collect();
        prop_assert_eq!(inf_norm(&a, &b).to_bits(), inf_norm(&b, &a).to_bits());
        prop_assert!((inf_norm(&a, &b) - shift.abs()).abs() < 1e-9);
        prop_assert_eq!(inf_norm(&a, &a), 0.0);
    }

    #[test]
    fn wilcoxon_p_is_in_range_and_swap_invariant(
        pairs in vec((finite(-10.0..10.0), finite(-10.0..10.0)), 5..40),
    ) {
        let a: Vec<f64> = pairs.iter().map(|(x, _)| *x).collect();
        let b: Vec<f64> = pairs.iter().map(|(_, y)| *y).collect();
        let ab = wilcoxon_signed_rank(&a, &b).unwrap();
        let ba = wilcoxon_signed_rank(&b, &a).unwrap();
        prop_assert!(ab.p_value > 0.0 && ab.p_value <= 1.0);
        prop_assert_eq!(ab.p_value.to_bits(), ba.p_value.to_bits());
        prop_assert_eq!(ab.w_statistic.to_bits(), ba.w_statistic.to_bits());
    }

    #[test]
    fn row_ranks_are_competition_ranks(row in vec(finite(-1e6..1e6), 1..10)) {
        let (ranks, average) = rank_table(&[row.clone()]).unwrap();
        for (i, &rank) in ranks[0].iter().enumerate() {
            let smaller = row.iter().filter(|v| **v < row[i]).count() as u32;
            prop_assert_eq!(rank, smaller + 1);
        }
        prop_assert!(ranks[0].contains(&1));
        for (rank, avg) in ranks[0].iter().zip(&average) {
            prop_assert_eq!(f64::from(*rank), *avg);
        }
    }

    #[test]
    fn elitism_selection_keeps_the_best_without_duplicates(
        fitnesses in vec(finite(-1e3..1e3), 2..30),
        n in 1usize..6,
        seed in any::<u64>(),
    ) {
        prop_assume!(n <= fitnesses.len());
        let candidates: Vec<Candidate> = fitnesses
            .iter()
            .enumerate()
            .map(|(i, &fitness)| Candidate {
                position: vec![i as f64],
                fitness,
                origin: CandidateOrigin::Firework { id: i as u64 },
            })
            .collect();
        let mut rng = RngStream::new(seed);
        let picked = elitism_random_select(&candidates, n, &mut rng);
        prop_assert_eq!(picked.len(), n);
        let mut sorted = picked.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), n);
        let best = (0..fitnesses.len())
            .min_by(|&i, &j| fitnesses[i].total_cmp(&fitnesses[j]))
            .unwrap();
        let best_fitness = fitnesses[best];
        prop_assert!(picked.iter().any(|&i| fitnesses[i] == best_fitness));
    }
}
