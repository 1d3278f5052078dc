use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dqn::{PolicyMode, RewardMode, TrainingConfig};
use crate::env::EnvConfig;
use crate::error::{Error, Result};
use crate::grape::GrapeParams;

/// Number of independent trainings behind each reported average at full scale.
pub const PAPER_SEED_COUNT: u64 = 50;

/// The variants contrasted by `compare` when a config names fewer than two.
pub const ABLATION_VARIANTS: [Variant; 4] = [
    Variant::new(RewardMode::DiffWeighted, PolicyMode::Adaptive),
    Variant::new(RewardMode::DiffUnweighted, PolicyMode::Adaptive),
    Variant::new(RewardMode::Sparse, PolicyMode::Adaptive),
    Variant::new(RewardMode::DiffWeighted, PolicyMode::FixedDecay),
];

/// A reward mode paired with an action-selection mode, written `reward+policy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variant {
    pub reward: RewardMode,
    pub policy: PolicyMode,
}

impl Variant {
    pub const fn new(reward: RewardMode, policy: PolicyMode) -> Self {
        Self { reward, policy }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl Default for Variant {
    fn default() -> Self {
        Self::new(RewardMode::DiffWeighted, PolicyMode::Adaptive)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.reward, self.policy)
    }
}

impl FromStr for Variant {
    type Err = Error;

    /// Accepts `reward+policy` or a bare reward mode (adaptive selection).
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('+') {
            Some((r, p)) => Ok(Self::new(r.trim().parse()?, p.trim().parse()?)),
            None => Ok(Self::new(s.trim().parse()?, PolicyMode::Adaptive)),
        }
    }
}

impl Serialize for Variant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Variant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A seed sweep over one or more variants.
///
/// Every field has a default, so `{}` describes five seeds of the
/// weighted-difference agent at the standard settings. `train.env` must not
/// be given; the top-level `env` applies to training, GRAPE and the oracle.
/// The `reward_mode`, `policy_mode` and `seed` fields of `train` are
/// overwritten per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub env: EnvConfig,
    pub train: TrainingConfig,
    pub variants: Vec<Variant>,
    pub seeds: Vec<u64>,
    /// Not written back out; neither is `workers`.
    #[serde(skip_serializing)]
    pub output_dir: PathBuf,
    pub grape: GrapeParams,
    /// Concurrent training runs; 0 picks the number of available cores.
    #[serde(skip_serializing)]
    pub workers: usize,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            env: EnvConfig::default(),
            train: TrainingConfig::default(),
            variants: vec![Variant::default()],
            seeds: (0..5).collect(),
            output_dir: PathBuf::from("out"),
            grape: GrapeParams::default(),
            workers: 0,
        }
    }
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        if raw.get("train").and_then(|t| t.get("env")).is_some() {
            return Err(Error::Config(
                "`train.env` is not allowed; set the top-level `env` instead".into(),
            ));
        }
        let spec: Self = serde_json::from_value(raw).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::Config("at least one variant is required".into()));
        }
        self.env.validate()?;
        self.training_config(Variant::default(), 0).validate()
    }

    /// The training configuration of one run.
    pub fn training_config(&self, variant: Variant, seed: u64) -> TrainingConfig {
        TrainingConfig {
            env: self.env.clone(),
            seed,
            reward_mode: variant.reward,
            policy_mode: variant.policy,
            ..self.train.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_default() {
        let spec = ExperimentSpec::from_json("{}").unwrap();
        assert_eq!(spec, ExperimentSpec::default());
        assert_eq!(spec.train.learning_rate, 0.005);
        assert_eq!(spec.env.n_pulses, 10);
    }

    #[test]
    fn variant_names() {
        let v: Variant = "sparse+fixed_decay".parse().unwrap();
        assert_eq!(v, Variant::new(RewardMode::Sparse, PolicyMode::FixedDecay));
        assert_eq!(v.to_string(), "sparse+fixed_decay");
        assert_eq!("diff_unweighted".parse::<Variant>().unwrap().policy, PolicyMode::Adaptive);
        assert!(matches!("diff+adaptive".parse::<Variant>(), Err(Error::Config(_))));
        assert!(matches!(
            ExperimentSpec::from_json(r#"{"variants": ["nope"]}"#),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn rejects_bad_specs() {
        for text in [
            r#"{"seeds": []}"#,
            r#"{"variants": []}"#,
            r#"{"train": {"env": {}}}"#,
            r#"{"unknown": 1}"#,
            r#"{"env": {"n_pulses": 0}}"#,
            r#"{"train": {"gamma": 2.0}}"#,
            "not json",
        ] {
            let err = ExperimentSpec::from_json(text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}: {err}");
        }
    }

    #[test]
    fn grape_section() {
        let spec = ExperimentSpec::from_json(r#"{"grape": {"n_slices": 10, "learning_rate": 0.3, "seed": 4}}"#).unwrap();
        assert_eq!(spec.grape.n_slices, 10);
        assert_eq!(spec.grape.ascent.learning_rate, 0.3);
        assert_eq!(spec.grape.ascent.max_iters, 2000);
        assert!(ExperimentSpec::from_json(r#"{"grape": {"step": 1}}"#).is_err());
    }

    #[test]
    fn per_run_config_uses_top_level_env() {
        let spec = ExperimentSpec::from_json(r#"{"env": {"n_pulses": 20}, "train": {"episodes": 7}}"#).unwrap();
        let cfg = spec.training_config("sparse+boltzmann".parse().unwrap(), 3);
        assert_eq!(cfg.env.n_pulses, 20);
        assert_eq!(cfg.episodes, 7);
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.reward_mode, RewardMode::Sparse);
    }
}
