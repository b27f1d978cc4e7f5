//! Config-file handling: a sectioned key-value format where every algorithm
//! constant is addressable and unknown keys fail fast.
//!
//! ```text
//! # comments start with '#' or ';'
//! [defaults]
//! n_fireworks = 5
//! total_sparks = 150
//!
//! [dynfwa]
//! gaussian_enabled = false
//!
//! [function.sphere]
//! shift_file = data/sphere_shift.txt
//! rotation_file = data/sphere_rot.txt
//!
//! [report]
//! histogram_bins = 50
//! alpha = 0.05
//! ```
//!
//! `[defaults]` applies to every algorithm; `[<algorithm>]` sections override
//! it per algorithm (section names accept the `-ng` spellings).

use anyhow::{anyhow, bail, Context, Result};
use fwa::swarm::{AdaptiveDistanceRule, AlgorithmConfig};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Known algorithm spellings, including the Gaussian-less variants.
pub const ALGORITHM_CHOICES: [&str; 8] = [
    "efwa",
    "efwa-ng",
    "dynfwa",
    "dynfwa-ng",
    "afwa",
    "afwa-ng",
    "mfwa",
    "coffwa",
];

/// Resolves an algorithm spelling to the variant and its Gaussian setting.
pub fn parse_algorithm(name: &str) -> Result<(fwa::Algorithm, bool)> {
    let (base, gaussian) = match name.strip_suffix("-ng") {
        Some(base) => (base, false),
        None => (name, true),
    };
    let algorithm = match base {
        "efwa" => fwa::Algorithm::Efwa,
        "dynfwa" => fwa::Algorithm::DynFwa,
        "afwa" => fwa::Algorithm::Afwa,
        "mfwa" if gaussian => fwa::Algorithm::Mfwa,
        "coffwa" if gaussian => fwa::Algorithm::CoFfwa,
        _ => bail!(
            "unknown algorithm {name:?}; choices: {}",
            ALGORITHM_CHOICES.join(", ")
        ),
    };
    // mfwa and coffwa never run the Gaussian operator
    let gaussian = gaussian && algorithm.supports_gaussian();
    Ok((algorithm, gaussian))
}

/// Report-level options.
#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub histogram_bins: usize,
    pub alpha: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            histogram_bins: 50,
            alpha: 0.05,
        }
    }
}

/// Parsed harness configuration.
#[derive(Clone, Debug, Default)]
pub struct HarnessConfig {
    defaults: BTreeMap<String, String>,
    per_algorithm: BTreeMap<String, BTreeMap<String, String>>,
    /// Optional shift/rotation files per suite function.
    pub function_files: BTreeMap<String, FunctionFiles>,
    pub report: ReportOptions,
    /// Budget override from the command line; wins over every section.
    pub evals_override: Option<u64>,
}

#[derive(Clone, Debug, Default)]
pub struct FunctionFiles {
    pub shift_file: Option<PathBuf>,
    pub rotation_file: Option<PathBuf>,
}

impl HarnessConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Self::default();
        let mut section = String::from("defaults");
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                let known = section == "defaults"
                    || section == "report"
                    || section.starts_with("function.")
                    || ALGORITHM_CHOICES.contains(&section.as_str());
                if !known {
                    bail!(
                        "line {}: unknown section [{section}]; expected [defaults], [report], \
                         [function.<name>] or an algorithm section",
                        lineno + 1
                    );
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`, got {raw:?}", lineno + 1))?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            match section.as_str() {
                "defaults" => {
                    check_algorithm_key(&key, lineno)?;
                    config.defaults.insert(key, value);
                }
                "report" => match key.as_str() {
                    "histogram_bins" => {
                        config.report.histogram_bins = value
                            .parse()
                            .map_err(|_| anyhow!("line {}: bad histogram_bins", lineno + 1))?
                    }
                    "alpha" => {
                        config.report.alpha = value
                            .parse()
                            .map_err(|_| anyhow!("line {}: bad alpha", lineno + 1))?
                    }
                    _ => bail!("line {}: unknown report key {key:?}", lineno + 1),
                },
                s if s.starts_with("function.") => {
                    let function = s.trim_start_matches("function.").to_string();
                    let entry = config.function_files.entry(function).or_default();
                    match key.as_str() {
                        "shift_file" => entry.shift_file = Some(PathBuf::from(value)),
                        "rotation_file" => entry.rotation_file = Some(PathBuf::from(value)),
                        _ => bail!("line {}: unknown function key {key:?}", lineno + 1),
                    }
                }
                algo => {
                    check_algorithm_key(&key, lineno)?;
                    config
                        .per_algorithm
                        .entry(algo.to_string())
                        .or_default()
                        .insert(key, value);
                }
            }
        }
        Ok(config)
    }

    /// Builds the effective config for one algorithm spelling: defaults,
    /// then the algorithm's own section, then the Gaussian setting implied
    /// by the spelling itself.
    pub fn algorithm_config(&self, spelling: &str) -> Result<AlgorithmConfig> {
        let (algorithm, gaussian) = parse_algorithm(spelling)?;
        let mut config = AlgorithmConfig::default();
        for (key, value) in &self.defaults {
            apply_key(&mut config, key, value)?;
        }
        if let Some(section) = self.per_algorithm.get(spelling) {
            for (key, value) in section {
                apply_key(&mut config, key, value)?;
            }
        }
        if let Some(evals) = self.evals_override {
            config.e_max = Some(evals);
        }
        config.gaussian_enabled = gaussian && algorithm.supports_gaussian();
        config.validate()?;
        Ok(config)
    }
}

const ALGORITHM_KEYS: [&str; 17] = [
    "n_fireworks",
    "total_sparks",
    "amp_constant",
    "c_a",
    "c_r",
    "lambda_smooth",
    "tau_factor",
    "a_init",
    "a_final",
    "m_gaussian",
    "spark_frac_min",
    "spark_frac_max",
    "e_max",
    "gaussian_enabled",
    "adaptive_rule",
    "shared_explosion_offset",
    "mfwa_adaptive",
];

fn check_algorithm_key(key: &str, lineno: usize) -> Result<()> {
    if ALGORITHM_KEYS.contains(&key) {
        Ok(())
    } else {
        bail!(
            "line {}: unknown key {key:?}; known keys: {}",
            lineno + 1,
            ALGORITHM_KEYS.join(", ")
        )
    }
}

fn apply_key(config: &mut AlgorithmConfig, key: &str, value: &str) -> Result<()> {
    fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
        value
            .parse()
            .map_err(|_| anyhow!("bad value {value:?} for {key}"))
    }
    match key {
        "n_fireworks" => config.n_fireworks = num(key, value)?,
        "total_sparks" => config.total_sparks = num(key, value)?,
        "amp_constant" => config.amp_constant = num(key, value)?,
        "c_a" => config.c_a = num(key, value)?,
        "c_r" => config.c_r = num(key, value)?,
        "lambda_smooth" => config.lambda_smooth = num(key, value)?,
        "tau_factor" => config.tau_factor = num(key, value)?,
        "a_init" => config.a_init = num(key, value)?,
        "a_final" => config.a_final = num(key, value)?,
        "m_gaussian" => config.m_gaussian = num(key, value)?,
        "spark_frac_min" => config.spark_frac_min = num(key, value)?,
        "spark_frac_max" => config.spark_frac_max = num(key, value)?,
        "e_max" => config.e_max = Some(num(key, value)?),
        "gaussian_enabled" => config.gaussian_enabled = num(key, value)?,
        "shared_explosion_offset" => config.shared_explosion_offset = num(key, value)?,
        "mfwa_adaptive" => config.mfwa_adaptive = num(key, value)?,
        "adaptive_rule" => {
            config.adaptive_rule = match value {
                "min-worse" => AdaptiveDistanceRule::MinWorse,
                "max-beyond-current" => AdaptiveDistanceRule::MaxBeyondCurrent,
                _ => bail!("adaptive_rule must be `min-worse` or `max-beyond-current`"),
            }
        }
        _ => bail!("unknown key {key:?}"),
    }
    Ok(())
}

/// Builds a suite function, applying any configured shift/rotation files.
pub fn build_function(
    config: &HarnessConfig,
    dim: usize,
    suite_seed: u64,
    name: &str,
) -> Result<fwa::ObjectiveSpec> {
    let mut spec = fwa::objectives::suite_function(dim, suite_seed, name)?;
    if let Some(files) = config.function_files.get(name) {
        if let Some(path) = &files.shift_file {
            spec = spec.with_shift_from_file(path)?;
        }
        if let Some(path) = &files.rotation_file {
            spec = spec.with_rotation_from_file(path)?;
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_sections_layer() {
        let text = "\
[defaults]
n_fireworks = 8
[dynfwa]
c_a = 1.5
";
        let config = HarnessConfig::parse(text).unwrap();
        let dynfwa = config.algorithm_config("dynfwa").unwrap();
        assert_eq!(dynfwa.n_fireworks, 8);
        assert_eq!(dynfwa.c_a, 1.5);
        let efwa = config.algorithm_config("efwa").unwrap();
        assert_eq!(efwa.n_fireworks, 8);
        assert_eq!(efwa.c_a, 1.2);
    }

    #[test]
    fn ng_spelling_disables_gaussian() {
        let config = HarnessConfig::default();
        assert!(config.algorithm_config("dynfwa").unwrap().gaussian_enabled);
        assert!(!config.algorithm_config("dynfwa-ng").unwrap().gaussian_enabled);
        assert!(!config.algorithm_config("coffwa").unwrap().gaussian_enabled);
    }

    #[test]
    fn unknown_keys_fail_fast() {
        assert!(HarnessConfig::parse("[defaults]\nsparkliness = 3\n").is_err());
        assert!(HarnessConfig::parse("[weird]\n").is_err());
        assert!(HarnessConfig::parse("[report]\nbogus = 1\n").is_err());
    }

    #[test]
    fn unknown_algorithm_is_an_error() {
        let err = parse_algorithm("pso").unwrap_err().to_string();
        assert!(err.contains("choices"), "{err}");
        assert!(err.contains("coffwa"));
    }

    #[test]
    fn invalid_values_are_rejected() {
        let text = "[defaults]\nc_a = 0.5\n";
        let config = HarnessConfig::parse(text).unwrap();
        assert!(config.algorithm_config("dynfwa").is_err());
    }
}
