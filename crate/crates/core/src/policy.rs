//! Action selection: adaptive epsilon-greedy, the fixed-decay baseline and Boltzmann.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exploration rate driven by a count of high-fidelity events.
///
/// `epsilon = eps_min + (eps_max - eps_min) * exp(-lambda / cardinality)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpsilonSchedule {
    pub eps_min: f64,
    pub eps_max: f64,
    /// Update cardinality `C`.
    pub cardinality: u64,
    /// Number of recorded events with fidelity above the threshold.
    pub lambda: u64,
    pub fidelity_threshold: f64,
}

impl Default for EpsilonSchedule {
    fn default() -> Self {
        Self {
            eps_min: 0.01,
            eps_max: 0.9,
            cardinality: 500,
            lambda: 0,
            fidelity_threshold: 0.8,
        }
    }
}

impl EpsilonSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.eps_min && self.eps_min < self.eps_max && self.eps_max <= 1.0) {
            return Err(Error::Config(format!(
                "epsilon bounds must satisfy 0 <= eps_min < eps_max <= 1 (got {}, {})",
                self.eps_min, self.eps_max
            )));
        }
        if self.cardinality == 0 {
            return Err(Error::Config("epsilon cardinality must be at least 1".into()));
        }
        Ok(())
    }

    pub fn epsilon(&self) -> f64 {
        adaptive_epsilon(self)
    }
}

pub fn adaptive_epsilon(s: &EpsilonSchedule) -> f64 {
    s.eps_min + (s.eps_max - s.eps_min) * (-(s.lambda as f64) / s.cardinality as f64).exp()
}

/// Counts one event when `fidelity_observed` is strictly above the threshold.
pub fn bump_lambda(s: EpsilonSchedule, fidelity_observed: f64) -> EpsilonSchedule {
    if fidelity_observed > s.fidelity_threshold {
        EpsilonSchedule {
            lambda: s.lambda + 1,
            ..s
        }
    } else {
        s
    }
}

pub const FIXED_DECAY_START: f64 = 0.91;
pub const FIXED_DECAY_STEP: f64 = 0.005;
pub const FIXED_DECAY_FLOOR: f64 = 0.01;

/// Baseline schedule: 0.91 minus 0.005 per finished round, floored at 0.01.
pub fn fixed_decay_epsilon(round: usize) -> f64 {
    (FIXED_DECAY_START - FIXED_DECAY_STEP * round as f64).max(FIXED_DECAY_FLOOR)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoltzmannParams {
    pub temperature: f64,
}

impl Default for BoltzmannParams {
    fn default() -> Self {
        Self { temperature: 0.5 }
    }
}

/// Softmax of `q / temperature`, shifted by the maximum for stability.
pub fn boltzmann_probs(q: &[f64], p: &BoltzmannParams) -> Result<Vec<f64>> {
    if !(p.temperature > 0.0) {
        return Err(Error::InvalidInput(format!(
            "temperature must be positive, got {}",
            p.temperature
        )));
    }
    let max = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = q.iter().map(|&v| ((v - max) / p.temperature).exp()).collect();
    let total: f64 = exps.iter().sum();
    Ok(exps.into_iter().map(|e| e / total).collect())
}

/// Index of the largest value; the lowest index wins ties.
pub fn argmax(q: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in q.iter().enumerate().skip(1) {
        if v > q[best] {
            best = i;
        }
    }
    best
}

/// Epsilon-greedy choice over `q`.
///
/// One uniform draw decides explore vs exploit; exploring takes a second
/// draw for the action index.
pub fn select_action<R: Rng + ?Sized>(q: &[f64], eps: f64, rng: &mut R) -> usize {
    if eps > 0.0 && rng.random::<f64>() < eps {
        rng.random_range(0..q.len())
    } else {
        argmax(q)
    }
}

/// Samples an index from the Boltzmann distribution over `q`.
pub fn select_boltzmann<R: Rng + ?Sized>(q: &[f64], p: &BoltzmannParams, rng: &mut R) -> Result<usize> {
    let probs = boltzmann_probs(q, p)?;
    let draw: f64 = rng.random();
    let mut acc = 0.0;
    for (i, pi) in probs.iter().enumerate() {
        acc += pi;
        if draw < acc {
            return Ok(i);
        }
    }
    Ok(probs.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn adaptive_epsilon_closed_form() {
        let s = EpsilonSchedule::default();
        assert_eq!(adaptive_epsilon(&s), 0.9);
        let s500 = EpsilonSchedule { lambda: 500, ..s };
        assert!((adaptive_epsilon(&s500) - 0.337_413).abs() < 1e-6);
        let s5000 = EpsilonSchedule { lambda: 5000, ..s };
        assert!((adaptive_epsilon(&s5000) - 0.010_040_4).abs() < 1e-7);
    }

    #[test]
    fn lambda_bumps() {
        let s = EpsilonSchedule::default();
        assert_eq!(bump_lambda(s, 0.9).lambda, 1);
        let s7 = EpsilonSchedule { lambda: 7, ..s };
        assert_eq!(bump_lambda(s7, 0.8).lambda, 7);
        let bumped = (0..100).fold(s, |acc, _| bump_lambda(acc, 0.95));
        assert_eq!(bumped.lambda, 100);
    }

    #[test]
    fn schedule_validation() {
        assert!(EpsilonSchedule::default().validate().is_ok());
        let bad = EpsilonSchedule { eps_min: 0.9, eps_max: 0.01, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = EpsilonSchedule { cardinality: 0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn fixed_decay_examples() {
        assert_eq!(fixed_decay_epsilon(0), 0.91);
        assert!((fixed_decay_epsilon(180) - 0.01).abs() < 1e-12);
        assert_eq!(fixed_decay_epsilon(500), 0.01);
    }

    #[test]
    fn boltzmann_examples() {
        let p = BoltzmannParams { temperature: 1.0 };
        let probs = boltzmann_probs(&[0.3; 9], &p).unwrap();
        for v in &probs {
            assert!((v - 1.0 / 9.0).abs() < 1e-15);
        }
        let mut q = [0.0; 9];
        q[0] = 1.0;
        let e = std::f64::consts::E;
        let probs = boltzmann_probs(&q, &p).unwrap();
        assert!((probs[0] - e / (e + 8.0)).abs() < 1e-12);
        assert!((probs[0] - 0.25361).abs() < 1e-5);
        let cold = boltzmann_probs(&q, &BoltzmannParams { temperature: 0.01 }).unwrap();
        assert!(cold[0] > 0.999);
        assert!(boltzmann_probs(&q, &BoltzmannParams { temperature: 0.0 }).is_err());
        let huge = boltzmann_probs(&[1e6, 0.0, -1e6], &p).unwrap();
        assert!(huge.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn greedy_selection_and_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let q = [0.0, 0.1, 0.9, 0.3, 0.2, 0.9, 0.0, 0.0, 0.0];
        for _ in 0..100 {
            assert_eq!(select_action(&q, 0.0, &mut rng), 2);
        }
    }

    #[test]
    fn full_exploration_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = [0.0; 9];
        let draws = 100_000;
        let mut counts = [0usize; 9];
        for _ in 0..draws {
            counts[select_action(&q, 1.0, &mut rng)] += 1;
        }
        let p = 1.0 / 9.0;
        let mean = draws as f64 * p;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - mean).abs() < 3.0 * sigma, "count {c}");
        }
    }

    #[test]
    fn boltzmann_sampling_tracks_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = [1.0, 0.0, -1.0];
        let p = BoltzmannParams { temperature: 1.0 };
        let probs = boltzmann_probs(&q, &p).unwrap();
        let mut counts = [0usize; 3];
        for _ in 0..30_000 {
            counts[select_boltzmann(&q, &p, &mut rng).unwrap()] += 1;
        }
        for i in 0..3 {
            assert!((counts[i] as f64 / 30_000.0 - probs[i]).abs() < 0.01);
        }
    }
}
