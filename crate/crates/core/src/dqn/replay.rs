use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::env::{ControlAction, OBSERVATION_LEN};
use crate::error::{Error, Result};

/// Added to `|delta|` so no stored transition has zero sampling probability.
pub const PRIORITY_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub obs: [f64; OBSERVATION_LEN],
    pub action: ControlAction,
    pub reward: f64,
    pub next_obs: [f64; OBSERVATION_LEN],
    pub terminal: bool,
    /// Magnitude of the TD error at the last time this transition was scored.
    pub td_error_abs: f64,
}

/// Fixed-capacity ring buffer; once full, each insert overwrites the oldest entry.
#[derive(Debug, Clone)]
pub struct ReplayPool {
    capacity: usize,
    items: Vec<Transition>,
    next: usize,
}

impl ReplayPool {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::Config("replay capacity must be at least 1".into()));
        }
        Ok(Self {
            capacity,
            items: Vec::with_capacity(capacity),
            next: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn push(&mut self, tr: Transition) {
        if self.items.len() < self.capacity {
            self.items.push(tr);
        } else {
            self.items[self.next] = tr;
        }
        self.next = (self.next + 1) % self.capacity;
    }

    pub fn get(&self, index: usize) -> &Transition {
        &self.items[index]
    }

    /// Stored transitions from oldest to newest.
    pub fn iter_oldest_first(&self) -> impl Iterator<Item = &Transition> {
        let split = if self.items.len() < self.capacity { 0 } else { self.next };
        self.items[split..].iter().chain(&self.items[..split])
    }

    pub fn set_priority(&mut self, index: usize, td_error_abs: f64) {
        self.items[index].td_error_abs = td_error_abs;
    }

    /// Sampling probabilities `(|delta| + eps)^exponent`, normalized.
    pub fn probabilities(&self, exponent: f64) -> Vec<f64> {
        let w: Vec<f64> = self.items.iter().map(|t| priority_weight(t.td_error_abs, exponent)).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }
}

fn priority_weight(td_error_abs: f64, exponent: f64) -> f64 {
    (td_error_abs + PRIORITY_EPSILON).powf(exponent)
}

/// Draws `batch` indices with replacement, proportionally to `(|delta| + eps)^exponent`.
pub fn sample_prioritized<R: Rng + ?Sized>(
    pool: &ReplayPool,
    batch: usize,
    exponent: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if pool.is_empty() {
        return Err(Error::Usage("cannot sample from an empty replay pool".into()));
    }
    let weights = pool.items.iter().map(|t| priority_weight(t.td_error_abs, exponent));
    let dist = WeightedIndex::new(weights)
        .map_err(|e| Error::Numeric(format!("invalid replay priorities: {e}")))?;
    Ok((0..batch).map(|_| dist.sample(rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tr(reward: f64, td: f64) -> Transition {
        Transition {
            obs: [0.0; 8],
            action: ControlAction::from_index(0).unwrap(),
            reward,
            next_obs: [0.0; 8],
            terminal: false,
            td_error_abs: td,
        }
    }

    #[test]
    fn evicts_oldest_first() {
        let mut pool = ReplayPool::new(3).unwrap();
        for k in 0..5 {
            pool.push(tr(k as f64, 1.0));
            assert!(pool.len() <= 3);
        }
        let rewards: Vec<f64> = pool.iter_oldest_first().map(|t| t.reward).collect();
        assert_eq!(rewards, vec![2.0, 3.0, 4.0]);
        assert!(ReplayPool::new(0).is_err());
    }

    #[test]
    fn empty_pool_is_an_error() {
        let pool = ReplayPool::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(sample_prioritized(&pool, 2, 0.6, &mut rng), Err(Error::Usage(_))));
    }

    fn chi_square(counts: &[usize], probs: &[f64]) -> f64 {
        let n: usize = counts.iter().sum();
        counts
            .iter()
            .zip(probs)
            .map(|(&c, &p)| {
                let e = n as f64 * p;
                (c as f64 - e).powi(2) / e
            })
            .sum()
    }

    #[test]
    fn zero_exponent_is_uniform() {
        let mut pool = ReplayPool::new(4).unwrap();
        for td in [0.0, 1.0, 5.0, 100.0] {
            pool.push(tr(0.0, td));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let idx = sample_prioritized(&pool, 100_000, 0.0, &mut rng).unwrap();
        let mut counts = [0usize; 4];
        idx.iter().for_each(|&i| counts[i] += 1);
        // 3 degrees of freedom, 99.9% quantile 16.27.
        assert!(chi_square(&counts, &[0.25; 4]) < 16.27);
    }

    #[test]
    fn proportional_to_td_error() {
        let mut pool = ReplayPool::new(2).unwrap();
        pool.push(tr(0.0, 3.0));
        pool.push(tr(0.0, 1.0));
        let probs = pool.probabilities(1.0);
        assert!((probs[0] - 0.75).abs() < 1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let idx = sample_prioritized(&pool, 100_000, 1.0, &mut rng).unwrap();
        let first = idx.iter().filter(|&&i| i == 0).count() as f64 / 1e5;
        assert!((first - 0.75).abs() < 0.005);
    }

    #[test]
    fn equal_errors_are_uniform_for_any_exponent() {
        let mut pool = ReplayPool::new(5).unwrap();
        for _ in 0..5 {
            pool.push(tr(0.0, 0.4));
        }
        for exponent in [0.0, 0.6, 1.0, 3.0] {
            for p in pool.probabilities(exponent) {
                assert!((p - 0.2).abs() < 1e-12);
            }
        }
    }
}
