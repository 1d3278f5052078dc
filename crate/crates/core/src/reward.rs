//! Weighted difference dynamic reward and the sparse terminal baseline.
//!
//! Each step is scored from three fidelities to the target: the current
//! state, the realized next state and the next state the greedy action would
//! have produced. In the first learning rounds the three are averaged. Later
//! rounds weight them by how often each position improved on the previous
//! round (see [`round_indicators`] and [`round_weights`]).

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{fidelity, QuantumState};

/// Fidelities to the target of the current, realized-next and predicted-next states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceTriple {
    pub d_t: f64,
    pub d_next: f64,
    pub d_pred: f64,
}

pub fn distance_triple(
    s_t: &QuantumState,
    s_next: &QuantumState,
    s_pred: &QuantumState,
    target: &QuantumState,
) -> DistanceTriple {
    DistanceTriple {
        d_t: fidelity(s_t, target),
        d_next: fidelity(s_next, target),
        d_pred: fidelity(s_pred, target),
    }
}

/// Per-component reward weights `(W, Y, Z)` used during learning round `round` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardWeights {
    pub w: f64,
    pub y: f64,
    pub z: f64,
    pub round: usize,
}

impl RewardWeights {
    /// Equal thirds, the weighting of the first round.
    pub fn uniform(round: usize) -> Self {
        let third = 1.0 / 3.0;
        Self {
            w: third,
            y: third,
            z: third,
            round,
        }
    }

    pub fn first_round() -> Self {
        Self::uniform(1)
    }

    /// Raises every weight to at least `floor`.
    pub fn with_floor(self, floor: f64) -> Self {
        Self {
            w: self.w.max(floor),
            y: self.y.max(floor),
            z: self.z.max(floor),
            round: self.round,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.w == 0.0 && self.y == 0.0 && self.z == 0.0
    }
}

/// `W d_t + Y d_next + Z d_pred`.
pub fn step_reward(d: &DistanceTriple, w: &RewardWeights) -> f64 {
    w.w * d.d_t + w.y * d.d_next + w.z * d.d_pred
}

/// Fidelities recorded position by position over one learning round.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub f_cur: Vec<f64>,
    pub f_next: Vec<f64>,
    pub f_pred: Vec<f64>,
}

impl RoundTrace {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            f_cur: Vec::with_capacity(n),
            f_next: Vec::with_capacity(n),
            f_pred: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, d: &DistanceTriple) {
        self.f_cur.push(d.d_t);
        self.f_next.push(d.d_next);
        self.f_pred.push(d.d_pred);
    }

    pub fn len(&self) -> usize {
        self.f_cur.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f_cur.is_empty()
    }
}

/// Improvement flags `(w, y, z)` per position between two rounds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundIndicators {
    pub w: Vec<bool>,
    pub y: Vec<bool>,
    pub z: Vec<bool>,
}

/// Flags position `j` when `cur` is strictly better than `prev` there.
pub fn round_indicators(prev: &RoundTrace, cur: &RoundTrace) -> Result<RoundIndicators> {
    let n = prev.len();
    let lengths = [
        prev.f_next.len(),
        prev.f_pred.len(),
        cur.f_cur.len(),
        cur.f_next.len(),
        cur.f_pred.len(),
    ];
    if lengths.iter().any(|&l| l != n) {
        return Err(Error::Usage(format!(
            "round traces differ in length (previous {n}, current {})",
            cur.len()
        )));
    }
    let improved = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, c)| p < c).collect();
    Ok(RoundIndicators {
        w: improved(&prev.f_cur, &cur.f_cur),
        y: improved(&prev.f_next, &cur.f_next),
        z: improved(&prev.f_pred, &cur.f_pred),
    })
}

/// Fraction of set flags in each indicator vector, as weights for `round`.
pub fn round_weights(ind: &RoundIndicators, round: usize) -> Result<RewardWeights> {
    let n = ind.w.len();
    if n == 0 {
        return Err(Error::Usage("indicator vectors are empty".into()));
    }
    if ind.y.len() != n || ind.z.len() != n {
        return Err(Error::Usage("indicator vectors differ in length".into()));
    }
    let frac = |v: &[bool]| v.iter().filter(|&&b| b).count() as f64 / n as f64;
    Ok(RewardWeights {
        w: frac(&ind.w),
        y: frac(&ind.y),
        z: frac(&ind.z),
        round,
    })
}

/// Zero before the horizon, final fidelity at `t == n`.
pub fn sparse_terminal_reward(t: usize, n: usize, last: &QuantumState, target: &QuantumState) -> f64 {
    if t < n {
        0.0
    } else {
        fidelity(last, target)
    }
}

/// Tracks round traces and hands out the weights each round should use.
///
/// The comparison of rounds `k - 1` and `k` is consumed by round `k + lag`.
/// Rounds with no comparison available use [`RewardWeights::uniform`].
#[derive(Debug, Clone)]
pub struct WeightSchedule {
    floor: f64,
    lag: usize,
    previous: Option<RoundTrace>,
    pending: VecDeque<RewardWeights>,
    rounds_finished: usize,
}

impl WeightSchedule {
    pub fn new(floor: f64, lag: usize) -> Result<Self> {
        if lag == 0 {
            return Err(Error::Config("weight lag must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&floor) {
            return Err(Error::Config(format!("weight floor {floor} outside [0, 1]")));
        }
        Ok(Self {
            floor,
            lag,
            previous: None,
            pending: VecDeque::new(),
            rounds_finished: 0,
        })
    }

    /// Weights for the round about to start.
    pub fn current(&self) -> RewardWeights {
        let round = self.rounds_finished + 1;
        match self.pending.front() {
            Some(w) if w.round == round => *w,
            _ => RewardWeights::uniform(round),
        }
        .with_floor_if_weighted(self.floor, round)
    }

    /// Records the trace of the round that just ended.
    pub fn finish_round(&mut self, trace: RoundTrace) -> Result<()> {
        let finished = self.rounds_finished + 1;
        if self.pending.front().is_some_and(|w| w.round <= finished) {
            self.pending.pop_front();
        }
        if let Some(prev) = &self.previous {
            let ind = round_indicators(prev, &trace)?;
            self.pending.push_back(round_weights(&ind, finished + self.lag)?);
        }
        self.previous = Some(trace);
        self.rounds_finished = finished;
        Ok(())
    }
}

impl RewardWeights {
    fn with_floor_if_weighted(self, floor: f64, round: usize) -> Self {
        if round == 1 || floor == 0.0 {
            self
        } else {
            self.with_floor(floor)
        }
    }
}
