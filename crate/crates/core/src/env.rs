//! The fixed-horizon control task as an episodic environment.
//!
//! An episode applies exactly `n_pulses` piecewise-constant pulses of
//! duration `dt = total_time / n_pulses`, each drawn from the 9-element set
//! `{2, 0, -2}^2`. Rewards are computed by the caller (see [`crate::reward`]).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{self, Operator4, QuantumState};

/// Amplitude levels available to each control channel, in index order.
pub const PULSE_LEVELS: [f64; 3] = [2.0, 0.0, -2.0];
pub const ACTION_COUNT: usize = 9;
/// Length of [`encode_observation`] output.
pub const OBSERVATION_LEN: usize = 8;

/// One pulse pair `(u1, u2)`; index is `3 * level(u1) + level(u2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct ControlAction(u8);

pub type ControlSequence = Vec<ControlAction>;

impl ControlAction {
    pub fn from_index(index: usize) -> Result<Self> {
        if index < ACTION_COUNT {
            Ok(Self(index as u8))
        } else {
            Err(Error::InvalidInput(format!(
                "action index {index} out of range 0..{ACTION_COUNT}"
            )))
        }
    }

    /// Looks up the action for an exact pulse pair from [`PULSE_LEVELS`].
    pub fn from_pulses(u1: f64, u2: f64) -> Result<Self> {
        let level = |u: f64| {
            PULSE_LEVELS
                .iter()
                .position(|&l| l == u)
                .ok_or_else(|| Error::InvalidInput(format!("pulse amplitude {u} not in {{2, 0, -2}}")))
        };
        Ok(Self((3 * level(u1)? + level(u2)?) as u8))
    }

    pub fn all() -> impl Iterator<Item = ControlAction> {
        (0..ACTION_COUNT as u8).map(ControlAction)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn u1(self) -> f64 {
        PULSE_LEVELS[self.index() / 3]
    }

    pub fn u2(self) -> f64 {
        PULSE_LEVELS[self.index() % 3]
    }
}

impl TryFrom<usize> for ControlAction {
    type Error = Error;

    fn try_from(index: usize) -> Result<Self> {
        Self::from_index(index)
    }
}

impl From<ControlAction> for usize {
    fn from(a: ControlAction) -> usize {
        a.index()
    }
}

impl fmt::Display for ControlAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u1(), self.u2())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvConfig {
    pub total_time: f64,
    pub n_pulses: usize,
    #[serde(with = "state_repr")]
    pub initial: QuantumState,
    #[serde(with = "state_repr")]
    pub target: QuantumState,
    /// Rotate observations to a canonical global phase before encoding.
    pub canonical_phase: bool,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            total_time: 4.0,
            n_pulses: 10,
            initial: QuantumState::basis_index(1),
            target: QuantumState::basis_index(2),
            canonical_phase: false,
        }
    }
}

impl EnvConfig {
    pub fn with_pulses(n_pulses: usize) -> Self {
        Self {
            n_pulses,
            ..Self::default()
        }
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.n_pulses as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.total_time > 0.0) || !self.total_time.is_finite() {
            return Err(Error::Config(format!(
                "total_time must be positive, got {}",
                self.total_time
            )));
        }
        if self.n_pulses == 0 {
            return Err(Error::Config("n_pulses must be at least 1".into()));
        }
        Ok(())
    }
}

/// Position within an episode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvState {
    pub t: usize,
    pub psi: QuantumState,
    pub done: bool,
}

/// `exp(-i H(u1, u2) dt)` for each of the nine actions, in action-index order.
pub fn action_unitaries(cfg: &EnvConfig) -> Result<[Operator4; ACTION_COUNT]> {
    cfg.validate()?;
    let dt = cfg.dt();
    let mut out = [Operator4::identity(); ACTION_COUNT];
    for a in ControlAction::all() {
        out[a.index()] = qsim::propagator(&qsim::build_hamiltonian(a.u1(), a.u2()), dt)?;
    }
    Ok(out)
}

/// `(re a00, im a00, re a01, im a01, re a10, im a10, re a11, im a11)`.
pub fn encode_observation(psi: &QuantumState) -> [f64; OBSERVATION_LEN] {
    let mut out = [0.0; OBSERVATION_LEN];
    for (i, a) in psi.amplitudes().iter().enumerate() {
        out[2 * i] = a.re;
        out[2 * i + 1] = a.im;
    }
    out
}

/// The control environment with its nine propagators precomputed.
#[derive(Debug, Clone)]
pub struct QuantumControlEnv {
    cfg: EnvConfig,
    unitaries: [Operator4; ACTION_COUNT],
}

impl QuantumControlEnv {
    pub fn new(cfg: EnvConfig) -> Result<Self> {
        let unitaries = action_unitaries(&cfg)?;
        Ok(Self { cfg, unitaries })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.cfg
    }

    pub fn horizon(&self) -> usize {
        self.cfg.n_pulses
    }

    pub fn unitary(&self, a: ControlAction) -> &Operator4 {
        &self.unitaries[a.index()]
    }

    pub fn reset(&self) -> EnvState {
        EnvState {
            t: 0,
            psi: self.cfg.initial,
            done: false,
        }
    }

    /// Advances one pulse. Fails on a finished episode.
    pub fn step(&self, state: &EnvState, a: ControlAction) -> Result<EnvState> {
        if state.done {
            return Err(Error::Usage(format!(
                "episode already finished after {} pulses",
                state.t
            )));
        }
        let t = state.t + 1;
        Ok(EnvState {
            t,
            psi: self.peek(state, a),
            done: t >= self.cfg.n_pulses,
        })
    }

    /// The state `a` would produce, without advancing the episode.
    pub fn peek(&self, state: &EnvState, a: ControlAction) -> QuantumState {
        qsim::evolve(&state.psi, self.unitary(a))
    }

    /// Network input for `psi`, honoring the phase-canonicalization flag.
    pub fn observe(&self, psi: &QuantumState) -> [f64; OBSERVATION_LEN] {
        if self.cfg.canonical_phase {
            encode_observation(&psi.canonical_phase())
        } else {
            encode_observation(psi)
        }
    }

    pub fn target_fidelity(&self, psi: &QuantumState) -> f64 {
        qsim::fidelity(psi, &self.cfg.target)
    }

    /// Final state after applying `seq` from the initial state.
    ///
    /// Sequences shorter or longer than the horizon are allowed here; the
    /// step-wise API is the one that enforces it.
    pub fn rollout(&self, seq: &[ControlAction]) -> QuantumState {
        seq.iter()
            .fold(self.cfg.initial, |psi, &a| qsim::evolve(&psi, self.unitary(a)))
    }
}

/// Serde for states in config files: a basis label like `"01"` or four
/// `[re, im]` amplitude pairs.
pub mod state_repr {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::qsim::QuantumState;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Label(String),
        Amplitudes([[f64; 2]; 4]),
    }

    const LABELS: [&str; 4] = ["00", "01", "10", "11"];

    pub fn serialize<S: Serializer>(state: &QuantumState, s: S) -> Result<S::Ok, S::Error> {
        for (i, label) in LABELS.iter().enumerate() {
            if *state == QuantumState::basis_index(i) {
                return Repr::Label((*label).to_string()).serialize(s);
            }
        }
        Repr::Amplitudes(state.amplitudes().map(|a| [a.re, a.im])).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<QuantumState, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Label(label) => QuantumState::basis(&label).map_err(serde::de::Error::custom),
            Repr::Amplitudes(pairs) => {
                QuantumState::from_amplitudes(pairs.map(|[re, im]| Complex64::new(re, im)))
                    .map_err(serde::de::Error::custom)
            }
        }
    }
}
