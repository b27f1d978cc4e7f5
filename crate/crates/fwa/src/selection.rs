//! Population selection: elitism-random selection over the pooled
//! candidates, per-firework independent selection, and the
//! crowdness-avoiding reinitialization.

use crate::amplitude::inf_norm;
use crate::operators::{SparkBatch, SparkKind};
use crate::rng::RandomSource;
use crate::swarm::{BudgetExhausted, EvalTag, Firework, SwarmState};
use crate::objectives::ObjectiveSpec;

/// Where a selection candidate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateOrigin {
    /// A firework surviving from the current iteration.
    Firework { id: u64 },
    /// A spark generated this iteration.
    Spark { parent_id: u64, kind: SparkKind },
}

/// One entry in the pooled selection set.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub position: Vec<f64>,
    pub fitness: f64,
    pub origin: CandidateOrigin,
}

/// Keeps the minimal-fitness candidate, fills the remaining `n - 1` slots
/// uniformly without replacement from the rest. Returns indices into
/// `candidates`; ties for the best break toward the lowest index.
pub fn elitism_random_select(
    candidates: &[Candidate],
    n: usize,
    rng: &mut dyn RandomSource,
) -> Vec<usize> {
    assert!(n >= 1);
    assert!(
        candidates.len() >= n,
        "cannot select {n} from {} candidates",
        candidates.len()
    );
    let best = candidates
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.fitness.total_cmp(&b.1.fitness))
        .map(|(i, _)| i)
        .expect("candidates nonempty");

    let mut selected = Vec::with_capacity(n);
    selected.push(best);
    if n > 1 {
        // draw from the candidate list with the best entry removed
        let rest = candidates.len() - 1;
        for pick in rng.sample_distinct(rest, n - 1) {
            let idx = if pick >= best { pick + 1 } else { pick };
            selected.push(idx);
        }
    }
    selected
}

/// Keeps the better of the firework and its own sparks; the incumbent wins
/// fitness ties. A winning spark keeps the firework's id (lineage
/// continuity) with `parent_id` pointing at it and its age reset.
pub fn independent_select(firework: &Firework, own_sparks: &SparkBatch) -> Firework {
    debug_assert_eq!(own_sparks.parent_id, firework.id);
    match own_sparks.best() {
        Some((idx, fitness)) if fitness < firework.fitness => Firework {
            id: firework.id,
            position: own_sparks.positions[idx].clone(),
            fitness,
            amplitude: firework.amplitude,
            parent_id: Some(firework.id),
            age: 0,
        },
        _ => {
            let mut kept = firework.clone();
            kept.age += 1;
            kept
        }
    }
}

/// Outcome of one crowdness pass.
#[derive(Clone, Debug, Default)]
pub struct CrowdnessOutcome {
    /// `(old_id, new_id)` for every reinitialized firework.
    pub reinitialized: Vec<(u64, u64)>,
}

/// Reinitializes every non-core firework strictly closer than
/// `tau_factor * a_cf` (infinity norm) to the core firework. Single pass: a
/// freshly reinitialized firework may land inside the radius again and is
/// not re-checked this iteration. Re-evaluations consume budget; on
/// exhaustion the pass stops cleanly with the state consistent.
pub fn crowdness_avoid(
    state: &mut SwarmState,
    spec: &ObjectiveSpec,
    a_cf: f64,
    tau_factor: f64,
) -> Result<CrowdnessOutcome, BudgetExhausted> {
    let tau = tau_factor * a_cf;
    let cf_position = state.fireworks[state.cf_index].position.clone();
    let range = spec.search_range();
    let mut outcome = CrowdnessOutcome::default();

    for i in 0..state.fireworks.len() {
        if i == state.cf_index {
            continue;
        }
        if inf_norm(&state.fireworks[i].position, &cf_position) >= tau {
            continue;
        }
        let position: Vec<f64> = (0..spec.dim())
            .map(|k| state.rng.uniform(spec.lower()[k], spec.upper()[k]))
            .collect();
        // evaluate first so a budget failure leaves the firework untouched
        let fitness = state.consume_evaluation(spec, &position, EvalTag::Reinit)?;
        let old_id = state.fireworks[i].id;
        let new_id = state.fresh_id();
        state.gcf_members.remove(&old_id);
        state.fireworks[i] = Firework {
            id: new_id,
            position,
            fitness,
            amplitude: range,
            parent_id: None,
            age: 0,
        };
        outcome.reinitialized.push((old_id, new_id));
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{BaseFunction, ObjectiveSpec};
    use crate::rng::RngStream;
    use crate::swarm::{init_swarm, AlgorithmConfig};
    use std::collections::HashMap;

    fn candidates(fits: &[f64]) -> Vec<Candidate> {
        fits.iter()
            .enumerate()
            .map(|(i, &fitness)| Candidate {
                position: vec![i as f64, 0.0],
                fitness,
                origin: CandidateOrigin::Firework { id: i as u64 },
            })
            .collect()
    }

    #[test]
    fn selecting_all_returns_everything() {
        let pool = candidates(&[5.0, 1.0, 3.0]);
        let mut rng = RngStream::new(1);
        let mut got = elitism_random_select(&pool, 3, &mut rng);
        got.sort_unstable();
        assert_eq!(got, vec![0, 1, 2]);
    }

    #[test]
    fn selecting_one_returns_the_best() {
        let pool = candidates(&[5.0, 1.0, 3.0]);
        let mut rng = RngStream::new(1);
        assert_eq!(elitism_random_select(&pool, 1, &mut rng), vec![1]);
    }

    #[test]
    fn never_duplicates_candidates() {
        let pool = candidates(&[4.0, 2.0, 9.0, 1.0, 7.0, 3.0]);
        let mut rng = RngStream::new(3);
        for _ in 0..500 {
            let mut got = elitism_random_select(&pool, 4, &mut rng);
            got.sort_unstable();
            got.dedup();
            assert_eq!(got.len(), 4);
        }
    }

    #[test]
    fn non_best_candidates_are_picked_uniformly() {
        // 10 candidates, n = 3: best always present, each other candidate
        // should appear with frequency 2/9.
        let pool = candidates(&[0.0, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0, 8.5, 9.0]);
        let mut rng = RngStream::new(99);
        let trials = 10_000;
        let mut hits: HashMap<usize, u32> = HashMap::new();
        for _ in 0..trials {
            let got = elitism_random_select(&pool, 3, &mut rng);
            assert!(got.contains(&0), "best candidate missing");
            for idx in got {
                *hits.entry(idx).or_insert(0) += 1;
            }
        }
        assert_eq!(hits[&0], trials);
        let expected = 2.0 / 9.0;
        for idx in 1..10 {
            let freq = f64::from(hits[&idx]) / f64::from(trials);
            assert!(
                (freq - expected).abs() < 0.02,
                "candidate {idx} frequency {freq}"
            );
        }
    }

    fn firework(id: u64, fitness: f64) -> Firework {
        Firework {
            id,
            position: vec![0.0, 0.0],
            fitness,
            amplitude: 1.0,
            parent_id: None,
            age: 3,
        }
    }

    #[test]
    fn incumbent_survives_when_better() {
        let fw = firework(7, 1.0);
        let mut sparks = SparkBatch::new(7, SparkKind::Explosion);
        sparks.push(vec![1.0, 1.0], 2.0);
        let next = independent_select(&fw, &sparks);
        assert_eq!(next.id, 7);
        assert_eq!(next.fitness, 1.0);
        assert_eq!(next.age, 4);
        assert_eq!(next.parent_id, None);
    }

    #[test]
    fn better_spark_replaces_incumbent() {
        let fw = firework(7, 1.0);
        let mut sparks = SparkBatch::new(7, SparkKind::Explosion);
        sparks.push(vec![1.0, 1.0], 0.25);
        let next = independent_select(&fw, &sparks);
        assert_eq!(next.id, 7);
        assert_eq!(next.fitness, 0.25);
        assert_eq!(next.position, vec![1.0, 1.0]);
        assert_eq!(next.parent_id, Some(7));
        assert_eq!(next.age, 0);
    }

    #[test]
    fn fitness_tie_keeps_incumbent() {
        let fw = firework(7, 1.0);
        let mut sparks = SparkBatch::new(7, SparkKind::Explosion);
        sparks.push(vec![1.0, 1.0], 1.0);
        let next = independent_select(&fw, &sparks);
        assert_eq!(next.position, vec![0.0, 0.0]);
        assert_eq!(next.age, 4);
    }

    #[test]
    fn selection_never_increases_fitness() {
        let mut rng = RngStream::new(8);
        for _ in 0..200 {
            let fw = firework(1, rng.uniform(-10.0, 10.0));
            let mut sparks = SparkBatch::new(1, SparkKind::Explosion);
            for _ in 0..rng.index(6) {
                sparks.push(vec![0.0, 0.0], rng.uniform(-10.0, 10.0));
            }
            let next = independent_select(&fw, &sparks);
            assert!(next.fitness <= fw.fitness);
        }
    }

    fn crowd_setup() -> (ObjectiveSpec, SwarmState) {
        let spec =
            ObjectiveSpec::boxed("sphere", BaseFunction::Sphere, 2, -100.0, 100.0).unwrap();
        let config = AlgorithmConfig {
            e_max: Some(1_000),
            ..AlgorithmConfig::default()
        };
        let state = init_swarm(&config, &spec, 12).unwrap();
        (spec, state)
    }

    #[test]
    fn nearby_firework_is_reinitialized() {
        let (spec, mut state) = crowd_setup();
        let cf = state.cf_index;
        let cf_pos = state.fireworks[cf].position.clone();
        let victim = (cf + 1) % state.fireworks.len();
        // place a non-CF at distance 0.5 tau
        let tau = 10.0 * 1.0;
        state.fireworks[victim].position = vec![cf_pos[0], (cf_pos[1] + 0.5 * tau).min(100.0)];
        let old_id = state.fireworks[victim].id;
        state.gcf_members.insert(old_id);

        let outcome = crowdness_avoid(&mut state, &spec, 1.0, 10.0).unwrap();
        assert!(outcome.reinitialized.iter().any(|(old, _)| *old == old_id));
        assert!(!state.gcf_members.contains(&old_id));
        let reinit = &state.fireworks[victim];
        assert_ne!(reinit.id, old_id);
        assert_eq!(reinit.parent_id, None);
        assert_eq!(reinit.age, 0);
    }

    #[test]
    fn firework_exactly_at_tau_is_kept() {
        let (spec, mut state) = crowd_setup();
        let cf = state.cf_index;
        let cf_pos = state.fireworks[cf].position.clone();
        let victim = (cf + 1) % state.fireworks.len();
        let tau = 2.0;
        state.fireworks[victim].position = vec![cf_pos[0] + tau, cf_pos[1]];
        // keep the other fireworks far away
        for i in 0..state.fireworks.len() {
            if i != cf && i != victim {
                state.fireworks[i].position = vec![-95.0, -95.0 + i as f64];
            }
        }
        let old_id = state.fireworks[victim].id;
        let outcome = crowdness_avoid(&mut state, &spec, 0.2, 10.0).unwrap();
        assert!(outcome.reinitialized.is_empty());
        assert_eq!(state.fireworks[victim].id, old_id);
    }

    #[test]
    fn core_firework_is_never_reinitialized() {
        let (spec, mut state) = crowd_setup();
        let cf_id = state.cf_id();
        // enormous radius: everything but the CF must be reinitialized
        crowdness_avoid(&mut state, &spec, 100.0, 10.0).unwrap();
        assert!(state.fireworks.iter().any(|fw| fw.id == cf_id));
        assert_eq!(state.fireworks[state.cf_index].id, cf_id);
    }

    #[test]
    fn budget_exhaustion_stops_the_pass_cleanly() {
        let (spec, mut state) = crowd_setup();
        state.e_max = state.evals_used + 1; // room for exactly one reinit
        let err = crowdness_avoid(&mut state, &spec, 100.0, 10.0);
        assert!(err.is_err());
        assert_eq!(state.evals_used, state.e_max);
        // fireworks still well-formed
        for fw in &state.fireworks {
            assert_eq!(fw.position.len(), 2);
            assert!(fw.fitness.is_finite());
        }
    }
}
