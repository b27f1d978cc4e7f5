//! Fireworks-algorithm family optimizers with a benchmark and analysis
//! harness.
//!
//! A firework is a candidate solution that samples ("explodes") uniformly
//! within its explosion amplitude each iteration; better fireworks explode
//! with smaller amplitudes and more sparks. This crate implements five
//! variants of that scheme — `efwa`, `dynfwa`, `afwa`, the single-firework
//! `mfwa` and the cooperative `coffwa` — together with the instrumentation
//! used to compare them: improvement/resource accounting per firework,
//! amplitude-ratio analysis, the paired Wilcoxon signed-rank test and
//! mean-fitness rank tables.
//!
//! ```
//! use fwa::algorithms::{run, Algorithm};
//! use fwa::objectives::{BaseFunction, ObjectiveSpec};
//! use fwa::swarm::AlgorithmConfig;
//!
//! let spec = ObjectiveSpec::boxed("sphere", BaseFunction::Sphere, 5, -100.0, 100.0).unwrap();
//! let config = AlgorithmConfig::default(); // budget defaults to dim * 10_000
//! let result = run(Algorithm::CoFfwa, &config, &spec, 42).unwrap();
//! assert!(result.best_fitness < 1e-6);
//! ```
//!
//! Runs are deterministic: identical `(algorithm, config, objective, seed)`
//! reproduce identical traces on every platform.

pub mod algorithms;
pub mod amplitude;
pub mod objectives;
pub mod operators;
pub mod rng;
pub mod selection;
pub mod stats;
pub mod swarm;
pub mod telemetry;

pub use algorithms::{run, Algorithm, RunResult, TracePoint};
pub use objectives::{make_suite, BaseFunction, ObjectiveSpec};
pub use swarm::{AlgorithmConfig, ConfigError};
