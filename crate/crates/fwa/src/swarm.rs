//! Shared run state: fireworks, configuration, the evaluation budget and the
//! attribution ledger every algorithm reports into.
//!
//! All objective evaluations inside a run go through
//! [`SwarmState::consume_evaluation`], the single accounting point for the
//! budget and for per-firework resource attribution. The budget is never
//! silently exceeded: the call that would pass `e_max` fails with
//! [`BudgetExhausted`] and the run loop terminates cleanly.

use crate::objectives::ObjectiveSpec;
use crate::rng::{RandomSource, RngStream};
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("evaluation budget of {e_max} exhausted")]
pub struct BudgetExhausted {
    pub e_max: u64,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{field} must be positive")]
    NotPositive { field: &'static str },
    #[error("reduction factor must satisfy c_r < 1 < c_a, got c_r = {c_r}, c_a = {c_a}")]
    BadFactors { c_r: f64, c_a: f64 },
    #[error("spark fractions must satisfy 0 < min < max <= 1, got ({min}, {max})")]
    BadSparkFractions { min: f64, max: f64 },
    #[error("MEACS endpoints must satisfy a_final < a_init, got ({a_init}, {a_final})")]
    BadMeacsEndpoints { a_init: f64, a_final: f64 },
}

/// How the adaptive amplitude rule picks its reference spark.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AdaptiveDistanceRule {
    /// Distance of the *closest* spark to the best individual among those
    /// with fitness worse than the core firework. This is the update that
    /// both shrinks and grows the amplitude, and is the default.
    #[default]
    MinWorse,
    /// Running maximum seeded with the amplitude in use: scan the sparks and
    /// take any worse-fitness spark farther from the best individual than the
    /// current candidate. Monotonically non-decreasing before smoothing;
    /// provided for comparison.
    MaxBeyondCurrent,
}

/// Every constant the algorithm family uses, with the conventional defaults.
///
/// `a_init` / `a_final` are fractions of the search range (the MEACS floor is
/// scaled by `max_k (upper - lower)` at run time); everything else is
/// absolute.
#[derive(Clone, Debug)]
pub struct AlgorithmConfig {
    /// Number of fireworks N.
    pub n_fireworks: usize,
    /// Total explosion sparks per iteration, M_e.
    pub total_sparks: u32,
    /// Amplitude constant Â shared by the fitness-proportional rule.
    pub amp_constant: f64,
    /// Amplification factor C_a for the dynamic amplitude.
    pub c_a: f64,
    /// Reduction factor C_r for the dynamic amplitude.
    pub c_r: f64,
    /// Smoothing rate λ of the adaptive amplitude.
    pub lambda_smooth: f64,
    /// Crowdness radius as a multiple of the core firework's amplitude.
    pub tau_factor: f64,
    /// Initial MEACS floor as a fraction of the search range.
    pub a_init: f64,
    /// Final MEACS floor as a fraction of the search range.
    pub a_final: f64,
    /// Gaussian sparks per iteration, M_g.
    pub m_gaussian: u32,
    /// Lower clamp on per-firework spark counts as a fraction of M_e.
    pub spark_frac_min: f64,
    /// Upper clamp on per-firework spark counts as a fraction of M_e.
    pub spark_frac_max: f64,
    /// Evaluation budget; `None` means `dim * 10_000`.
    pub e_max: Option<u64>,
    /// Whether the Gaussian mutation operator runs ("-G" vs "-NG" variants).
    pub gaussian_enabled: bool,
    /// Adaptive-amplitude candidate rule.
    pub adaptive_rule: AdaptiveDistanceRule,
    /// Draw one explosion offset shared by all selected dimensions instead of
    /// one draw per dimension.
    pub shared_explosion_offset: bool,
    /// Use the adaptive amplitude rule (instead of the dynamic one) in the
    /// single-firework algorithm.
    pub mfwa_adaptive: bool,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            n_fireworks: 5,
            total_sparks: 150,
            amp_constant: 40.0,
            c_a: 1.2,
            c_r: 0.9,
            lambda_smooth: 2.6,
            tau_factor: 10.0,
            a_init: 0.02,
            a_final: 0.001,
            m_gaussian: 5,
            spark_frac_min: 0.04,
            spark_frac_max: 0.8,
            e_max: None,
            gaussian_enabled: true,
            adaptive_rule: AdaptiveDistanceRule::default(),
            shared_explosion_offset: false,
            mfwa_adaptive: false,
        }
    }
}

impl AlgorithmConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(value: f64, field: &'static str) -> Result<(), ConfigError> {
            if value > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::NotPositive { field })
            }
        }
        if self.n_fireworks == 0 {
            return Err(ConfigError::NotPositive {
                field: "n_fireworks",
            });
        }
        if self.total_sparks == 0 {
            return Err(ConfigError::NotPositive {
                field: "total_sparks",
            });
        }
        positive(self.amp_constant, "amp_constant")?;
        positive(self.c_a, "c_a")?;
        positive(self.c_r, "c_r")?;
        positive(self.lambda_smooth, "lambda_smooth")?;
        positive(self.tau_factor, "tau_factor")?;
        positive(self.a_init, "a_init")?;
        positive(self.a_final, "a_final")?;
        if !(self.c_r < 1.0 && 1.0 < self.c_a) {
            return Err(ConfigError::BadFactors {
                c_r: self.c_r,
                c_a: self.c_a,
            });
        }
        if !(0.0 < self.spark_frac_min
            && self.spark_frac_min < self.spark_frac_max
            && self.spark_frac_max <= 1.0)
        {
            return Err(ConfigError::BadSparkFractions {
                min: self.spark_frac_min,
                max: self.spark_frac_max,
            });
        }
        if !(self.a_final < self.a_init) {
            return Err(ConfigError::BadMeacsEndpoints {
                a_init: self.a_init,
                a_final: self.a_final,
            });
        }
        if let Some(e_max) = self.e_max {
            if e_max == 0 {
                return Err(ConfigError::NotPositive { field: "e_max" });
            }
        }
        Ok(())
    }

    /// The evaluation budget for a `dim`-dimensional problem.
    pub fn evaluation_budget(&self, dim: usize) -> u64 {
        self.e_max.unwrap_or(dim as u64 * 10_000)
    }
}

/// A candidate solution performing a local explosion search.
#[derive(Clone, Debug)]
pub struct Firework {
    /// Unique within a run.
    pub id: u64,
    pub position: Vec<f64>,
    pub fitness: f64,
    /// The explosion amplitude this firework used most recently.
    pub amplitude: f64,
    /// Id of the firework whose explosion produced this individual, if any.
    pub parent_id: Option<u64>,
    /// Iterations survived since creation.
    pub age: u32,
}

/// What an evaluation was spent on; recorded in the [`EvalLedger`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalTag {
    /// Initial evaluation of a starting firework.
    Init,
    /// An explosion spark generated by `parent`.
    ExplosionSpark {
        parent: u64,
        parent_is_cf: bool,
        parent_is_gcf: bool,
    },
    /// A Gaussian spark seeded from `parent`.
    GaussianSpark {
        parent: u64,
        parent_is_cf: bool,
        parent_is_gcf: bool,
    },
    /// Re-evaluation after a crowdness reinitialization.
    Reinit,
}

/// Per-run evaluation attribution. Reconciles exactly:
/// `init + spark_total + reinit == evals_used`.
#[derive(Clone, Debug, Default)]
pub struct EvalLedger {
    pub init: u64,
    pub reinit: u64,
    /// Explosion + Gaussian spark evaluations keyed by generating firework.
    pub sparks_by_firework: BTreeMap<u64, u64>,
    /// Spark evaluations whose generator was the core firework at spend time.
    pub cf_sparks: u64,
    /// Spark evaluations whose generator was in the GCF set at spend time.
    pub gcf_sparks: u64,
    pub spark_total: u64,
    /// How many of the spark evaluations were Gaussian sparks.
    pub gaussian_total: u64,
}

impl EvalLedger {
    pub(crate) fn record(&mut self, tag: EvalTag) {
        match tag {
            EvalTag::Init => self.init += 1,
            EvalTag::Reinit => self.reinit += 1,
            EvalTag::ExplosionSpark {
                parent,
                parent_is_cf,
                parent_is_gcf,
            }
            | EvalTag::GaussianSpark {
                parent,
                parent_is_cf,
                parent_is_gcf,
            } => {
                if matches!(tag, EvalTag::GaussianSpark { .. }) {
                    self.gaussian_total += 1;
                }
                *self.sparks_by_firework.entry(parent).or_insert(0) += 1;
                self.spark_total += 1;
                if parent_is_cf {
                    self.cf_sparks += 1;
                }
                if parent_is_gcf {
                    self.gcf_sparks += 1;
                }
            }
        }
    }

    /// Fraction of spark evaluations spent by the core firework, if any
    /// sparks were evaluated at all.
    pub fn theta_cf(&self) -> Option<f64> {
        (self.spark_total > 0).then(|| self.cf_sparks as f64 / self.spark_total as f64)
    }

    /// Fraction of spark evaluations spent by GCF members.
    pub fn theta_gcf(&self) -> Option<f64> {
        (self.spark_total > 0).then(|| self.gcf_sparks as f64 / self.spark_total as f64)
    }
}

/// The live state of one optimization run.
#[derive(Clone, Debug)]
pub struct SwarmState {
    pub fireworks: Vec<Firework>,
    /// Index of the firework with minimal fitness (the core firework).
    pub cf_index: usize,
    /// Ids of general-core-firework members.
    pub gcf_members: BTreeSet<u64>,
    pub evals_used: u64,
    pub e_max: u64,
    pub iteration: u64,
    pub rng: RngStream,
    pub ledger: EvalLedger,
    next_id: u64,
}

impl SwarmState {
    /// Id of the current core firework.
    pub fn cf_id(&self) -> u64 {
        self.fireworks[self.cf_index].id
    }

    pub fn cf(&self) -> &Firework {
        &self.fireworks[self.cf_index]
    }

    /// Smallest fitness among the fireworks.
    pub fn cf_fitness(&self) -> f64 {
        self.fireworks[self.cf_index].fitness
    }

    pub fn fresh_id(&mut self) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    /// Recomputes `cf_index`; ties break toward the lowest firework id.
    pub fn refresh_cf_index(&mut self) {
        let mut best = 0;
        for i in 1..self.fireworks.len() {
            let better = self.fireworks[i].fitness < self.fireworks[best].fitness
                || (self.fireworks[i].fitness == self.fireworks[best].fitness
                    && self.fireworks[i].id < self.fireworks[best].id);
            if better {
                best = i;
            }
        }
        self.cf_index = best;
    }

    /// Evaluates `x`, spending one unit of budget and recording `tag`.
    pub fn consume_evaluation(
        &mut self,
        spec: &ObjectiveSpec,
        x: &[f64],
        tag: EvalTag,
    ) -> Result<f64, BudgetExhausted> {
        if self.evals_used >= self.e_max {
            return Err(BudgetExhausted { e_max: self.e_max });
        }
        let fitness = spec
            .evaluate(x)
            .expect("operator positions are finite and well-formed");
        self.evals_used += 1;
        self.ledger.record(tag);
        Ok(fitness)
    }

    #[cfg(debug_assertions)]
    pub fn debug_check_invariants(&self, spec: &ObjectiveSpec) {
        assert!(self.evals_used <= self.e_max);
        let min = self
            .fireworks
            .iter()
            .map(|fw| fw.fitness)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(self.fireworks[self.cf_index].fitness, min);
        for fw in &self.fireworks {
            assert!(fw.amplitude > 0.0);
            for k in 0..spec.dim() {
                assert!(fw.position[k] >= spec.lower()[k] && fw.position[k] <= spec.upper()[k]);
            }
        }
        for id in &self.gcf_members {
            assert!(self.fireworks.iter().any(|fw| fw.id == *id));
        }
    }
}

/// Places N fireworks uniformly in the box and evaluates them.
///
/// Every amplitude starts at the full search range; the GCF set starts as the
/// singleton containing the core firework.
pub fn init_swarm(
    config: &AlgorithmConfig,
    spec: &ObjectiveSpec,
    seed: u64,
) -> Result<SwarmState, BudgetExhausted> {
    let e_max = config.evaluation_budget(spec.dim());
    let mut rng = RngStream::new(seed);
    let range = spec.search_range();

    let mut state = SwarmState {
        fireworks: Vec::with_capacity(config.n_fireworks),
        cf_index: 0,
        gcf_members: BTreeSet::new(),
        evals_used: 0,
        e_max,
        iteration: 0,
        rng: RngStream::new(seed),
        ledger: EvalLedger::default(),
        next_id: 0,
    };

    for _ in 0..config.n_fireworks {
        let position: Vec<f64> = (0..spec.dim())
            .map(|k| rng.uniform(spec.lower()[k], spec.upper()[k]))
            .collect();
        let fitness = state.consume_evaluation(spec, &position, EvalTag::Init)?;
        let id = state.fresh_id();
        state.fireworks.push(Firework {
            id,
            position,
            fitness,
            amplitude: range,
            parent_id: None,
            age: 0,
        });
    }

    // Hand the position-drawing stream back so the run continues from where
    // initialization stopped.
    state.rng = rng;
    state.refresh_cf_index();
    state.gcf_members.insert(state.cf_id());
    Ok(state)
}
