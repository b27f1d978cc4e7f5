//! Full optimization runs for the five algorithm variants.
//!
//! All variants share the explosion machinery; they differ in how the core
//! firework's amplitude is controlled and in how the next population is
//! selected:
//!
//! * `efwa` — per-firework fitness-proportional amplitudes with the decaying
//!   minimum-amplitude floor, elitism-random selection, optional Gaussian
//!   mutation;
//! * `dynfwa` — core amplitude by the multiplicative dynamic rule, otherwise
//!   as `efwa` without the floor;
//! * `afwa` — core amplitude by the adaptive distance rule;
//! * `mfwa` — a single firework with greedy selection (the minimalist
//!   reduction);
//! * `coffwa` — per-firework independent selection plus the
//!   crowdness-avoiding reinitialization; no Gaussian operator.
//!
//! A run consumes its budget exactly: the final iteration generates sparks
//! until the last evaluation is spent and runs selection on the partial
//! batch.

use crate::amplitude::{
    apply_meacs, meacs_min_amplitude, AdaptiveAmplitude, AmplitudeRecord, DynamicAmplitude,
};
use crate::objectives::ObjectiveSpec;
use crate::operators::{
    compute_amplitudes, compute_spark_counts, generate_explosion_spark, generate_gaussian_spark,
    SparkBatch, SparkKind,
};
use crate::rng::RandomSource;
use crate::selection::{elitism_random_select, independent_select, Candidate, CandidateOrigin};
use crate::swarm::{
    init_swarm, AlgorithmConfig, ConfigError, EvalLedger, EvalTag, Firework, SwarmState,
};
use crate::telemetry::{
    compute_significance_metrics, record_significant_improvement, update_gcf_set,
    ImprovementEvent, SelectedIndividual, SelectionOrigin, SignificanceMetrics,
};
use std::time::Instant;

/// The algorithm variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Efwa,
    DynFwa,
    Afwa,
    Mfwa,
    CoFfwa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Efwa,
        Algorithm::DynFwa,
        Algorithm::Afwa,
        Algorithm::Mfwa,
        Algorithm::CoFfwa,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Efwa => "efwa",
            Algorithm::DynFwa => "dynfwa",
            Algorithm::Afwa => "afwa",
            Algorithm::Mfwa => "mfwa",
            Algorithm::CoFfwa => "coffwa",
        }
    }

    /// Whether the variant ever runs the Gaussian mutation operator.
    pub fn supports_gaussian(&self) -> bool {
        matches!(self, Algorithm::Efwa | Algorithm::DynFwa | Algorithm::Afwa)
    }

    /// Label including the `-ng` suffix for Gaussian-less configurations of
    /// variants that support the operator.
    pub fn label(&self, gaussian_enabled: bool) -> String {
        if self.supports_gaussian() && !gaussian_enabled {
            format!("{}-ng", self.name())
        } else {
            self.name().to_string()
        }
    }
}

/// One best-so-far observation, taken after every iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub evals: u64,
    pub best: f64,
}

/// Everything a finished run reports.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub algorithm: String,
    pub function: String,
    pub dim: usize,
    pub seed: u64,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub trace: Vec<TracePoint>,
    pub improvement_events: Vec<ImprovementEvent>,
    pub amplitude_trace: Vec<AmplitudeRecord>,
    pub significance: SignificanceMetrics,
    pub ledger: EvalLedger,
    pub evals_used: u64,
    pub e_max: u64,
    pub iterations: u64,
    pub wall_time: f64,
}

/// Runs one optimization with the given variant.
pub fn run(
    algorithm: Algorithm,
    config: &AlgorithmConfig,
    spec: &ObjectiveSpec,
    seed: u64,
) -> Result<RunResult, ConfigError> {
    config.validate()?;
    match algorithm {
        Algorithm::Efwa | Algorithm::DynFwa | Algorithm::Afwa => {
            run_pooled(algorithm, config, spec, seed)
        }
        Algorithm::Mfwa => run_mfwa_inner(config, spec, seed),
        Algorithm::CoFfwa => run_coffwa_inner(config, spec, seed),
    }
}

pub fn run_efwa(
    config: &AlgorithmConfig,
    spec: &ObjectiveSpec,
    seed: u64,
) -> Result<RunResult, ConfigError> {
    run(Algorithm::Efwa, config, spec, seed)
}

pub fn run_dynfwa(
    config: &AlgorithmConfig,
    spec: &ObjectiveSpec,
    seed: u64,
) -> Result<RunResult, ConfigError> {
    run(Algorithm::DynFwa, config, spec, seed)
}

pub fn run_afwa(
    config: &AlgorithmConfig,
    spec: &ObjectiveSpec,
    seed: u64,
) -> Result<RunResult, ConfigError> {
    run(Algorithm::Afwa, config, spec, seed)
}

pub fn run_mfwa(
    config: &AlgorithmConfig,
    spec: &ObjectiveSpec,
    seed: u64,
) -> Result<RunResult, ConfigError> {
    run(Algorithm::Mfwa, config, spec, seed)
}

pub fn run_coffwa(
    config: &AlgorithmConfig,
    spec: &ObjectiveSpec,
    seed: u64,
) -> Result<RunResult, ConfigError> {
    run(Algorithm::CoFfwa, config, spec, seed)
}

/// Best-so-far bookkeeping shared by every run loop.
struct Recorder {
    best_fitness: f64,
    best_position: Vec<f64>,
    trace: Vec<TracePoint>,
    events: Vec<ImprovementEvent>,
    amplitude_trace: Vec<AmplitudeRecord>,
}

impl Recorder {
    fn new(state: &SwarmState) -> Self {
        let cf = state.cf();
        let mut rec = Self {
            best_fitness: cf.fitness,
            best_position: cf.position.clone(),
            trace: Vec::new(),
            events: Vec::new(),
            amplitude_trace: Vec::new(),
        };
        rec.trace_point(state.evals_used);
        rec
    }

    fn observe(&mut self, position: &[f64], fitness: f64) {
        if fitness < self.best_fitness {
            self.best_fitness = fitness;
            self.best_position.clear();
            self.best_position.extend_from_slice(position);
        }
    }

    fn trace_point(&mut self, evals: u64) {
        self.trace.push(TracePoint {
            evals,
            best: self.best_fitness,
        });
    }

    fn finish(
        self,
        algorithm: String,
        spec: &ObjectiveSpec,
        seed: u64,
        state: SwarmState,
        started: Instant,
    ) -> RunResult {
        let significance =
            compute_significance_metrics(&self.events, &state.ledger, state.e_max);
        RunResult {
            algorithm,
            function: spec.name().to_string(),
            dim: spec.dim(),
            seed,
            best_position: self.best_position,
            best_fitness: self.best_fitness,
            trace: self.trace,
            improvement_events: self.events,
            amplitude_trace: self.amplitude_trace,
            significance,
            ledger: state.ledger,
            evals_used: state.evals_used,
            e_max: state.e_max,
            iterations: state.iteration,
            wall_time: started.elapsed().as_secs_f64(),
        }
    }
}

/// Generates and evaluates the explosion sparks of one firework. Returns the
/// (possibly partial) batch and whether the budget ran out.
fn explode_firework(
    state: &mut SwarmState,
    spec: &ObjectiveSpec,
    recorder: &mut Recorder,
    index: usize,
    count: u32,
    shared_offset: bool,
) -> (SparkBatch, bool) {
    let parent_id = state.fireworks[index].id;
    let amplitude = state.fireworks[index].amplitude;
    let parent_position = state.fireworks[index].position.clone();
    let tag = EvalTag::ExplosionSpark {
        parent: parent_id,
        parent_is_cf: index == state.cf_index,
        parent_is_gcf: state.gcf_members.contains(&parent_id),
    };
    let mut batch = SparkBatch::new(parent_id, SparkKind::Explosion);
    for _ in 0..count {
        let position = generate_explosion_spark(
            &parent_position,
            amplitude,
            spec.lower(),
            spec.upper(),
            shared_offset,
            &mut state.rng,
        );
        match state.consume_evaluation(spec, &position, tag) {
            Ok(fitness) => {
                recorder.observe(&position, fitness);
                batch.push(position, fitness);
            }
            Err(_) => return (batch, true),
        }
    }
    (batch, false)
}

/// Best explosion spark across all batches: `(parent_id, batch_index,
/// spark_index, fitness)`.
fn best_explosion_spark(batches: &[SparkBatch]) -> Option<(u64, usize, usize, f64)> {
    let mut best: Option<(u64, usize, usize, f64)> = None;
    for (bi, batch) in batches.iter().enumerate() {
        if let Some((si, fitness)) = batch.best() {
            if best.map_or(true, |(_, _, _, b)| fitness < b) {
                best = Some((batch.parent_id, bi, si, fitness));
            }
        }
    }
    best
}

/// The pooled-selection family: efwa, dynfwa and afwa.
fn run_pooled(
    variant: Algorithm,
    config: &AlgorithmConfig,
    spec: &ObjectiveSpec,
    seed: u64,
) -> Result<RunResult, ConfigError> {
    let started = Instant::now();
    let gaussian_enabled = config.gaussian_enabled;
    let label = variant.label(gaussian_enabled);

    let mut state = init_swarm(config, spec, seed).expect("budget admits initialization");
    let mut recorder = Recorder::new(&state);
    let range = spec.search_range();
    let e_max = state.e_max;

    let mut dynamic = DynamicAmplitude::new(range, config.c_a, config.c_r);
    let mut adaptive = AdaptiveAmplitude::new(range, config.lambda_smooth, config.adaptive_rule);

    while state.evals_used < e_max {
        let evals_at_start = state.evals_used;
        let fitnesses: Vec<f64> = state.fireworks.iter().map(|fw| fw.fitness).collect();
        let mut amplitudes = compute_amplitudes(&fitnesses, config.amp_constant);
        match variant {
            Algorithm::Efwa => {
                let floor = meacs_min_amplitude(
                    evals_at_start,
                    e_max,
                    config.a_init * range,
                    config.a_final * range,
                );
                for a in &mut amplitudes {
                    *a = apply_meacs(*a, floor);
                }
            }
            Algorithm::DynFwa => amplitudes[state.cf_index] = dynamic.current,
            Algorithm::Afwa => amplitudes[state.cf_index] = adaptive.current,
            _ => unreachable!(),
        }
        for (fw, &a) in state.fireworks.iter_mut().zip(&amplitudes) {
            fw.amplitude = a;
        }
        let counts = compute_spark_counts(
            &fitnesses,
            config.total_sparks,
            config.spark_frac_min,
            config.spark_frac_max,
        );

        let prev_cf_index = state.cf_index;
        let prev_cf_id = state.cf_id();
        let prev_cf_fitness = state.cf_fitness();
        let prev_gcf = state.gcf_members.clone();

        let mut batches: Vec<SparkBatch> = Vec::with_capacity(state.fireworks.len());
        let mut exhausted = false;
        for i in 0..state.fireworks.len() {
            let (batch, out) = explode_firework(
                &mut state,
                spec,
                &mut recorder,
                i,
                counts[i],
                config.shared_explosion_offset,
            );
            batches.push(batch);
            if out {
                exhausted = true;
                break;
            }
        }

        if let Some(event) = record_significant_improvement(
            &batches,
            prev_cf_fitness,
            prev_cf_id,
            &prev_gcf,
            state.evals_used,
        ) {
            recorder.events.push(event);
        }

        let best_spark = best_explosion_spark(&batches);
        let improved = best_spark.map_or(false, |(_, _, _, f)| f < prev_cf_fitness);
        match variant {
            Algorithm::DynFwa => {
                recorder
                    .amplitude_trace
                    .push(dynamic.update(state.iteration, improved));
            }
            Algorithm::Afwa => {
                // the core firework's own batch, and the best individual
                // among the core firework and its sparks; the batch can be
                // missing only when the budget died before the core
                // firework's slot in the final partial iteration
                if let Some(cf_batch) = batches.iter().find(|b| b.parent_id == prev_cf_id) {
                    let (x_best, _) = cf_batch
                        .best()
                        .filter(|(_, f)| *f < prev_cf_fitness)
                        .map(|(si, f)| (cf_batch.positions[si].as_slice(), f))
                        .unwrap_or((
                            state.fireworks[prev_cf_index].position.as_slice(),
                            prev_cf_fitness,
                        ));
                    let x_best = x_best.to_vec();
                    let record = adaptive.update(
                        state.iteration,
                        improved,
                        prev_cf_fitness,
                        cf_batch,
                        &x_best,
                    );
                    recorder.amplitude_trace.push(record);
                }
            }
            _ => {}
        }

        // Gaussian sparks interpolate a uniformly chosen firework toward the
        // best position found so far.
        let mut gaussian_sparks: Vec<(u64, Vec<f64>, f64)> = Vec::new();
        if gaussian_enabled && !exhausted {
            let best_position = recorder.best_position.clone();
            for _ in 0..config.m_gaussian {
                let pick = state.rng.index(state.fireworks.len());
                let parent_id = state.fireworks[pick].id;
                let tag = EvalTag::GaussianSpark {
                    parent: parent_id,
                    parent_is_cf: pick == state.cf_index,
                    parent_is_gcf: state.gcf_members.contains(&parent_id),
                };
                let selected = state.fireworks[pick].position.clone();
                let position = generate_gaussian_spark(
                    &selected,
                    &best_position,
                    spec.lower(),
                    spec.upper(),
                    &mut state.rng,
                );
                match state.consume_evaluation(spec, &position, tag) {
                    Ok(fitness) => {
                        recorder.observe(&position, fitness);
                        gaussian_sparks.push((parent_id, position, fitness));
                    }
                    Err(_) => {
                        exhausted = true;
                        break;
                    }
                }
            }
        }

        // Pooled selection over fireworks and every spark.
        let mut candidates: Vec<Candidate> = Vec::new();
        for fw in &state.fireworks {
            candidates.push(Candidate {
                position: fw.position.clone(),
                fitness: fw.fitness,
                origin: CandidateOrigin::Firework { id: fw.id },
            });
        }
        for batch in batches {
            let parent_id = batch.parent_id;
            for (position, fitness) in batch.positions.into_iter().zip(batch.fitnesses) {
                candidates.push(Candidate {
                    position,
                    fitness,
                    origin: CandidateOrigin::Spark {
                        parent_id,
                        kind: SparkKind::Explosion,
                    },
                });
            }
        }
        for (parent_id, position, fitness) in gaussian_sparks {
            candidates.push(Candidate {
                position,
                fitness,
                origin: CandidateOrigin::Spark {
                    parent_id,
                    kind: SparkKind::Gaussian,
                },
            });
        }

        let picked = elitism_random_select(&candidates, config.n_fireworks, &mut state.rng);
        let mut next_fireworks = Vec::with_capacity(picked.len());
        let mut selected_individuals = Vec::with_capacity(picked.len());
        for idx in picked {
            let candidate = &candidates[idx];
            match candidate.origin {
                CandidateOrigin::Firework { id } => {
                    let mut fw = state
                        .fireworks
                        .iter()
                        .find(|fw| fw.id == id)
                        .expect("surviving firework exists")
                        .clone();
                    fw.age += 1;
                    selected_individuals.push(SelectedIndividual {
                        new_id: fw.id,
                        origin: SelectionOrigin::Survivor {
                            id: fw.id,
                            parent_id: fw.parent_id,
                        },
                    });
                    next_fireworks.push(fw);
                }
                CandidateOrigin::Spark { parent_id, kind } => {
                    let id = state.fresh_id();
                    let amplitude = state
                        .fireworks
                        .iter()
                        .find(|fw| fw.id == parent_id)
                        .map_or(range, |fw| fw.amplitude);
                    selected_individuals.push(SelectedIndividual {
                        new_id: id,
                        origin: SelectionOrigin::Spark { parent_id, kind },
                    });
                    next_fireworks.push(Firework {
                        id,
                        position: candidate.position.clone(),
                        fitness: candidate.fitness,
                        amplitude,
                        parent_id: Some(parent_id),
                        age: 0,
                    });
                }
            }
        }

        state.gcf_members = update_gcf_set(
            prev_cf_id,
            prev_cf_fitness,
            &prev_gcf,
            best_spark.map(|(parent, _, _, fitness)| (parent, fitness)),
            &selected_individuals,
        );
        state.fireworks = next_fireworks;
        state.refresh_cf_index();
        state.iteration += 1;
        recorder.trace_point(state.evals_used);
        #[cfg(debug_assertions)]
        state.debug_check_invariants(spec);
        if exhausted {
            break;
        }
    }

    Ok(recorder.finish(label, spec, seed, state, started))
}

/// The minimalist single-firework algorithm: explode, update the amplitude,
/// keep the best individual. The firework count is forced to one and the
/// Gaussian operator never runs.
fn run_mfwa_inner(
    config: &AlgorithmConfig,
    spec: &ObjectiveSpec,
    seed: u64,
) -> Result<RunResult, ConfigError> {
    let started = Instant::now();
    let single = AlgorithmConfig {
        n_fireworks: 1,
        gaussian_enabled: false,
        ..config.clone()
    };
    let mut state = init_swarm(&single, spec, seed).expect("budget admits initialization");
    let mut recorder = Recorder::new(&state);
    let range = spec.search_range();
    let e_max = state.e_max;

    let mut dynamic = DynamicAmplitude::new(range, single.c_a, single.c_r);
    let mut adaptive = AdaptiveAmplitude::new(range, single.lambda_smooth, single.adaptive_rule);

    // With one firework the standard count rule degenerates to its upper
    // clamp, so every iteration explodes with the same spark count.
    let spark_count = compute_spark_counts(
        &[0.0],
        single.total_sparks,
        single.spark_frac_min,
        single.spark_frac_max,
    )[0];

    while state.evals_used < e_max {
        let amplitude = if single.mfwa_adaptive {
            adaptive.current
        } else {
            dynamic.current
        };
        state.fireworks[0].amplitude = amplitude;
        let prev_fitness = state.fireworks[0].fitness;

        let (batch, exhausted) = explode_firework(
            &mut state,
            spec,
            &mut recorder,
            0,
            spark_count,
            single.shared_explosion_offset,
        );

        let batches = [batch];
        if let Some(event) = record_significant_improvement(
            &batches,
            prev_fitness,
            state.cf_id(),
            &state.gcf_members,
            state.evals_used,
        ) {
            recorder.events.push(event);
        }
        let [batch] = batches;

        let improved = batch.best().map_or(false, |(_, f)| f < prev_fitness);
        let record = if single.mfwa_adaptive {
            let (x_best, _) = batch
                .best()
                .filter(|(_, f)| *f < prev_fitness)
                .map(|(si, f)| (batch.positions[si].as_slice(), f))
                .unwrap_or((state.fireworks[0].position.as_slice(), prev_fitness));
            let x_best = x_best.to_vec();
            adaptive.update(state.iteration, improved, prev_fitness, &batch, &x_best)
        } else {
            dynamic.update(state.iteration, improved)
        };
        recorder.amplitude_trace.push(record);

        state.fireworks[0] = independent_select(&state.fireworks[0], &batch);
        state.refresh_cf_index();
        state.gcf_members.clear();
        state.gcf_members.insert(state.cf_id());
        state.iteration += 1;
        recorder.trace_point(state.evals_used);
        #[cfg(debug_assertions)]
        state.debug_check_invariants(spec);
        if exhausted {
            break;
        }
    }

    Ok(recorder.finish(
        Algorithm::Mfwa.name().to_string(),
        spec,
        seed,
        state,
        started,
    ))
}

/// The cooperative framework: independent per-firework selection plus the
/// crowdness-avoiding reinitialization. The Gaussian operator is always off.
fn run_coffwa_inner(
    config: &AlgorithmConfig,
    spec: &ObjectiveSpec,
    seed: u64,
) -> Result<RunResult, ConfigError> {
    let started = Instant::now();
    let mut state = init_swarm(config, spec, seed).expect("budget admits initialization");
    let mut recorder = Recorder::new(&state);
    let range = spec.search_range();
    let e_max = state.e_max;

    let mut dynamic = DynamicAmplitude::new(range, config.c_a, config.c_r);

    while state.evals_used < e_max {
        let fitnesses: Vec<f64> = state.fireworks.iter().map(|fw| fw.fitness).collect();
        let mut amplitudes = compute_amplitudes(&fitnesses, config.amp_constant);
        amplitudes[state.cf_index] = dynamic.current;
        for (fw, &a) in state.fireworks.iter_mut().zip(&amplitudes) {
            fw.amplitude = a;
        }
        let counts = compute_spark_counts(
            &fitnesses,
            config.total_sparks,
            config.spark_frac_min,
            config.spark_frac_max,
        );

        let prev_cf_id = state.cf_id();
        let prev_cf_fitness = state.cf_fitness();

        let mut batches: Vec<SparkBatch> = Vec::with_capacity(state.fireworks.len());
        let mut exhausted = false;
        for i in 0..state.fireworks.len() {
            let (batch, out) = explode_firework(
                &mut state,
                spec,
                &mut recorder,
                i,
                counts[i],
                config.shared_explosion_offset,
            );
            batches.push(batch);
            if out {
                exhausted = true;
                break;
            }
        }

        if let Some(event) = record_significant_improvement(
            &batches,
            prev_cf_fitness,
            prev_cf_id,
            &state.gcf_members,
            state.evals_used,
        ) {
            recorder.events.push(event);
        }

        let improved =
            best_explosion_spark(&batches).map_or(false, |(_, _, _, f)| f < prev_cf_fitness);
        recorder
            .amplitude_trace
            .push(dynamic.update(state.iteration, improved));

        // Independent selection: each firework keeps the best of itself and
        // its own sparks. Fireworks that never exploded (budget ran out
        // first) survive unchanged.
        for (i, batch) in batches.iter().enumerate() {
            state.fireworks[i] = independent_select(&state.fireworks[i], batch);
        }
        for i in batches.len()..state.fireworks.len() {
            state.fireworks[i].age += 1;
        }
        state.refresh_cf_index();

        // Crowdness avoidance, radius scaled from the freshly updated core
        // amplitude. Budget exhaustion inside the pass ends the run.
        if !exhausted {
            exhausted = crowdness_avoid_step(&mut state, spec, dynamic.current, config.tau_factor);
            state.refresh_cf_index();
        }

        state.gcf_members.clear();
        state.gcf_members.insert(state.cf_id());
        state.iteration += 1;
        recorder.trace_point(state.evals_used);
        #[cfg(debug_assertions)]
        state.debug_check_invariants(spec);
        if exhausted {
            break;
        }
    }

    Ok(recorder.finish(
        Algorithm::CoFfwa.name().to_string(),
        spec,
        seed,
        state,
        started,
    ))
}

fn crowdness_avoid_step(
    state: &mut SwarmState,
    spec: &ObjectiveSpec,
    a_cf: f64,
    tau_factor: f64,
) -> bool {
    crate::selection::crowdness_avoid(state, spec, a_cf, tau_factor).is_err()
}

/// Convenience check used by tests: every firework inside the box.
#[doc(hidden)]
pub fn positions_feasible(spec: &ObjectiveSpec, positions: &[Vec<f64>]) -> bool {
    positions.iter().all(|p| {
        p.iter()
            .enumerate()
            .all(|(k, &v)| v >= spec.lower()[k] && v <= spec.upper()[k])
    })
}
