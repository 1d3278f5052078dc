use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::network::{Architecture, Optimizer, OptimizerKind, QNetwork, Sample};
use super::replay::{sample_prioritized, ReplayPool, Transition};
use crate::env::{ControlAction, ControlSequence, EnvConfig, EnvState, QuantumControlEnv};
use crate::error::{Error, Result};
use crate::policy::{self, BoltzmannParams, EpsilonSchedule};
use crate::qsim::QuantumState;
use crate::reward::{self, RewardWeights, RoundTrace, WeightSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardMode {
    /// Round-adaptive weights `(W, Y, Z)`.
    DiffWeighted,
    /// Fixed one-third weights every round.
    DiffUnweighted,
    /// Zero until the last pulse, then the final fidelity.
    Sparse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyMode {
    Adaptive,
    FixedDecay,
    Boltzmann,
}

impl RewardMode {
    pub const ALL: [RewardMode; 3] = [RewardMode::DiffWeighted, RewardMode::DiffUnweighted, RewardMode::Sparse];

    pub fn name(self) -> &'static str {
        match self {
            RewardMode::DiffWeighted => "diff_weighted",
            RewardMode::DiffUnweighted => "diff_unweighted",
            RewardMode::Sparse => "sparse",
        }
    }
}

impl PolicyMode {
    pub const ALL: [PolicyMode; 3] = [PolicyMode::Adaptive, PolicyMode::FixedDecay, PolicyMode::Boltzmann];

    pub fn name(self) -> &'static str {
        match self {
            PolicyMode::Adaptive => "adaptive",
            PolicyMode::FixedDecay => "fixed_decay",
            PolicyMode::Boltzmann => "boltzmann",
        }
    }
}

impl fmt::Display for RewardMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for PolicyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RewardMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown reward mode {s:?}")))
    }
}

impl FromStr for PolicyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown policy mode {s:?}")))
    }
}

/// When the high-fidelity counter of the adaptive schedule is updated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaGranularity {
    /// On every step, from the realized next-state fidelity.
    PerStep,
    /// Once per round, from the final fidelity.
    PerRound,
}

/// Which greedy sequence `train` reports as its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicySelection {
    /// The best greedy rollout seen after any round (earliest on ties).
    BestGreedy,
    /// The greedy rollout of the network left after the last round.
    FinalNetwork,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingConfig {
    pub env: EnvConfig,
    pub learning_rate: f64,
    pub gamma: f64,
    pub episodes: usize,
    pub batch_size: usize,
    pub pool_capacity: usize,
    /// Exponent applied to `|delta|` when sampling from the replay pool.
    pub priority_exponent: f64,
    /// Use `min(lambda, 1)` from the epsilon schedule as the priority exponent instead.
    pub priority_exponent_from_lambda: bool,
    pub seed: u64,
    pub reward_mode: RewardMode,
    pub policy_mode: PolicyMode,
    pub epsilon: EpsilonSchedule,
    pub lambda_granularity: LambdaGranularity,
    pub boltzmann: BoltzmannParams,
    /// Lower bound applied to each round weight after the first round (0 disables).
    pub weight_floor: f64,
    /// The comparison of rounds `k - 1` and `k` is used by round `k + weight_lag`.
    pub weight_lag: usize,
    pub architecture: Architecture,
    pub grad_clip: f64,
    pub optimizer: OptimizerKind,
    /// Evaluate the greedy policy every this many rounds (and after the last one).
    pub greedy_eval_every: usize,
    pub policy_selection: PolicySelection,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            env: EnvConfig::default(),
            learning_rate: 0.005,
            gamma: 0.99,
            episodes: 500,
            batch_size: 64,
            pool_capacity: 2000,
            priority_exponent: 0.6,
            priority_exponent_from_lambda: false,
            seed: 0,
            reward_mode: RewardMode::DiffWeighted,
            policy_mode: PolicyMode::Adaptive,
            epsilon: EpsilonSchedule::default(),
            lambda_granularity: LambdaGranularity::PerStep,
            boltzmann: BoltzmannParams::default(),
            weight_floor: 0.0,
            weight_lag: 1,
            architecture: Architecture::default(),
            grad_clip: 10.0,
            optimizer: OptimizerKind::Sgd,
            greedy_eval_every: 10,
            policy_selection: PolicySelection::BestGreedy,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        self.epsilon.validate()?;
        self.architecture.validate()?;
        let fail = |msg: String| Err(Error::Config(msg));
        if !(0.0..=1.0).contains(&self.gamma) {
            return fail(format!("gamma must lie in [0, 1], got {}", self.gamma));
        }
        if !(self.learning_rate >= 0.0) {
            return fail(format!("learning rate must be non-negative, got {}", self.learning_rate));
        }
        if self.batch_size == 0 || self.batch_size > self.pool_capacity {
            return fail(format!(
                "batch size must be in 1..={} (pool capacity), got {}",
                self.pool_capacity, self.batch_size
            ));
        }
        if !(self.priority_exponent >= 0.0) {
            return fail("priority exponent must be non-negative".into());
        }
        if self.architecture.input_dim() != crate::env::OBSERVATION_LEN
            || self.architecture.output_dim() != crate::env::ACTION_COUNT
        {
            return fail(format!(
                "network must map {} inputs to {} outputs, got {:?}",
                crate::env::OBSERVATION_LEN,
                crate::env::ACTION_COUNT,
                self.architecture.layer_sizes
            ));
        }
        if !(self.boltzmann.temperature > 0.0) {
            return fail("Boltzmann temperature must be positive".into());
        }
        if !(self.grad_clip > 0.0) {
            return fail("grad_clip must be positive".into());
        }
        if self.greedy_eval_every == 0 {
            return fail("greedy_eval_every must be at least 1".into());
        }
        WeightSchedule::new(self.weight_floor, self.weight_lag)?;
        Ok(())
    }
}

/// One row of the learning curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    /// 1-based round index.
    pub episode: usize,
    /// Exploration rate at the start of the round (absent for Boltzmann selection).
    pub epsilon: Option<f64>,
    /// High-fidelity counter at the end of the round.
    pub lambda: u64,
    pub final_fidelity: f64,
    pub greedy_fidelity: Option<f64>,
    pub weights: RewardWeights,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingResult {
    pub episodes: Vec<EpisodeRecord>,
    pub policy: ControlSequence,
    pub greedy_fidelity: f64,
    /// 1-based round after which `policy` was the greedy rollout.
    pub policy_round: usize,
    pub network: QNetwork,
    pub transitions_stored: usize,
    pub pool: ReplayPool,
}

impl TrainingResult {
    pub fn final_fidelities(&self) -> Vec<f64> {
        self.episodes.iter().map(|e| e.final_fidelity).collect()
    }

    pub fn lambda_trace(&self) -> Vec<u64> {
        self.episodes.iter().map(|e| e.lambda).collect()
    }

    pub fn weights_trace(&self) -> Vec<RewardWeights> {
        self.episodes.iter().map(|e| e.weights).collect()
    }

    /// Area under the learning curve: mean per-round final fidelity.
    pub fn auc(&self) -> f64 {
        if self.episodes.is_empty() {
            return 0.0;
        }
        self.episodes.iter().map(|e| e.final_fidelity).sum::<f64>() / self.episodes.len() as f64
    }
}

impl PartialEq for ReplayPool {
    fn eq(&self, other: &Self) -> bool {
        self.capacity() == other.capacity() && self.iter_oldest_first().eq(other.iter_oldest_first())
    }
}

/// `r + gamma * max_a Q_target(s', a) * (1 - terminal) - Q_eval(s, a)`.
pub fn td_error(tr: &Transition, eval: &QNetwork, target: &QNetwork, gamma: f64) -> f64 {
    bootstrap_target(tr, target, gamma) - eval.forward(&tr.obs)[tr.action.index()]
}

fn bootstrap_target(tr: &Transition, target: &QNetwork, gamma: f64) -> f64 {
    if tr.terminal {
        tr.reward
    } else {
        let best = target.forward(&tr.next_obs).into_iter().fold(f64::NEG_INFINITY, f64::max);
        tr.reward + gamma * best
    }
}

/// The state the greedy action of `net` would reach from `state`; the episode is not advanced.
pub fn predict_next_state(net: &QNetwork, env: &QuantumControlEnv, state: &EnvState) -> QuantumState {
    let q = net.forward(&env.observe(&state.psi));
    env.peek(state, greedy_action(&q))
}

fn greedy_action(q: &[f64]) -> ControlAction {
    ControlAction::from_index(policy::argmax(q)).expect("network output has one entry per action")
}

/// Copies the evaluation parameters into a fresh target network.
pub fn sync_target(eval: &QNetwork) -> QNetwork {
    eval.clone()
}

/// Greedy rollout from the initial state. Returns the action sequence and its final fidelity.
pub fn extract_policy(net: &QNetwork, env: &QuantumControlEnv) -> (ControlSequence, f64) {
    let mut state = env.reset();
    let mut seq = Vec::with_capacity(env.horizon());
    while !state.done {
        let q = net.forward(&env.observe(&state.psi));
        let a = greedy_action(&q);
        seq.push(a);
        state = env.step(&state, a).expect("loop stops at the horizon");
    }
    let fidelity = env.target_fidelity(&env.rollout(&seq));
    (seq, fidelity)
}

/// Runs `cfg.episodes` learning rounds and extracts the greedy control sequence.
pub fn train(cfg: &TrainingConfig) -> Result<TrainingResult> {
    cfg.validate()?;
    let env = QuantumControlEnv::new(cfg.env.clone())?;
    let n = env.horizon();
    let target_state = cfg.env.target;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut eval = QNetwork::init(&cfg.architecture, &mut rng)?;
    let mut target = sync_target(&eval);
    let mut optimizer = Optimizer::new(cfg.optimizer, cfg.learning_rate, &eval);
    let mut pool = ReplayPool::new(cfg.pool_capacity)?;
    let mut schedule = cfg.epsilon;
    let mut weights = WeightSchedule::new(cfg.weight_floor, cfg.weight_lag)?;
    let mut records = Vec::with_capacity(cfg.episodes);
    let mut stored = 0usize;
    let mut best: Option<(ControlSequence, f64, usize)> = None;

    for round in 0..cfg.episodes {
        let round_weights = match cfg.reward_mode {
            RewardMode::DiffWeighted => weights.current(),
            RewardMode::DiffUnweighted | RewardMode::Sparse => RewardWeights::uniform(round + 1),
        };
        let epsilon_at_start = match cfg.policy_mode {
            PolicyMode::Adaptive => Some(schedule.epsilon()),
            PolicyMode::FixedDecay => Some(policy::fixed_decay_epsilon(round)),
            PolicyMode::Boltzmann => None,
        };
        let mut trace = RoundTrace::with_capacity(n);
        let mut state = env.reset();

        while !state.done {
            let obs = env.observe(&state.psi);
            let q = eval.forward(&obs);
            let chosen = match cfg.policy_mode {
                PolicyMode::Adaptive => policy::select_action(&q, schedule.epsilon(), &mut rng),
                PolicyMode::FixedDecay => policy::select_action(&q, policy::fixed_decay_epsilon(round), &mut rng),
                PolicyMode::Boltzmann => policy::select_boltzmann(&q, &cfg.boltzmann, &mut rng)?,
            };
            let action = ControlAction::from_index(chosen)?;
            let next = env.step(&state, action)?;
            let predicted = env.peek(&state, greedy_action(&q));

            let d = reward::distance_triple(&state.psi, &next.psi, &predicted, &target_state);
            trace.push(&d);
            let r = match cfg.reward_mode {
                RewardMode::DiffWeighted | RewardMode::DiffUnweighted => reward::step_reward(&d, &round_weights),
                RewardMode::Sparse => reward::sparse_terminal_reward(next.t, n, &next.psi, &target_state),
            };

            let mut tr = Transition {
                obs,
                action,
                reward: r,
                next_obs: env.observe(&next.psi),
                terminal: next.done,
                td_error_abs: 0.0,
            };
            tr.td_error_abs = td_error(&tr, &eval, &target, cfg.gamma).abs();
            pool.push(tr);
            stored += 1;

            if pool.len() >= cfg.batch_size {
                let exponent = if cfg.priority_exponent_from_lambda {
                    (schedule.lambda as f64).min(1.0)
                } else {
                    cfg.priority_exponent
                };
                let idx = sample_prioritized(&pool, cfg.batch_size, exponent, &mut rng)?;
                let mut targets = Vec::with_capacity(idx.len());
                for &i in &idx {
                    let t = pool.get(i);
                    let y = bootstrap_target(t, &target, cfg.gamma);
                    let delta = y - eval.forward(&t.obs)[t.action.index()];
                    targets.push(y);
                    pool.set_priority(i, delta.abs());
                }
                let batch: Vec<Sample> = idx
                    .iter()
                    .zip(&targets)
                    .map(|(&i, &y)| {
                        let t = pool.get(i);
                        Sample {
                            obs: &t.obs,
                            action: t.action.index(),
                            target: y,
                        }
                    })
                    .collect();
                eval.train_step_with(&batch, &mut optimizer, cfg.grad_clip);
            }

            if cfg.lambda_granularity == LambdaGranularity::PerStep {
                schedule = policy::bump_lambda(schedule, d.d_next);
            }
            state = next;
        }

        let final_fidelity = env.target_fidelity(&state.psi);
        if cfg.lambda_granularity == LambdaGranularity::PerRound {
            schedule = policy::bump_lambda(schedule, final_fidelity);
        }
        weights.finish_round(trace)?;
        target = sync_target(&eval);

        let evaluate = (round + 1) % cfg.greedy_eval_every == 0 || round + 1 == cfg.episodes;
        let greedy = (evaluate || cfg.policy_selection == PolicySelection::BestGreedy)
            .then(|| extract_policy(&eval, &env));
        if let Some((seq, f)) = &greedy {
            if cfg.policy_selection == PolicySelection::BestGreedy && best.as_ref().is_none_or(|b| *f > b.1) {
                best = Some((seq.clone(), *f, round + 1));
            }
        }
        records.push(EpisodeRecord {
            episode: round + 1,
            epsilon: epsilon_at_start,
            lambda: schedule.lambda,
            final_fidelity,
            greedy_fidelity: greedy.filter(|_| evaluate).map(|g| g.1),
            weights: round_weights,
        });
    }

    let (policy, greedy_fidelity, policy_round) = match best {
        Some(b) => b,
        None => {
            let (seq, f) = extract_policy(&eval, &env);
            (seq, f, cfg.episodes)
        }
    };
    Ok(TrainingResult {
        episodes: records,
        policy,
        greedy_fidelity,
        policy_round,
        network: eval,
        transitions_stored: stored,
        pool,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::ACTION_COUNT;

    fn small(n: usize, episodes: usize) -> TrainingConfig {
        TrainingConfig {
            env: EnvConfig::with_pulses(n),
            episodes,
            batch_size: 8,
            pool_capacity: 200,
            ..TrainingConfig::default()
        }
    }

    /// A network whose output is constant with the maximum at `action`.
    fn forced(action: usize) -> QNetwork {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut net = QNetwork::init(&Architecture::default(), &mut rng).unwrap();
        let mut p = vec![0.0; net.parameter_count()];
        let len = p.len();
        p[len - ACTION_COUNT + action] = 1.0;
        net.set_parameters(&p).unwrap();
        net
    }

    #[test]
    fn one_round_stores_one_transition_per_pulse() {
        let res = train(&small(5, 1)).unwrap();
        assert_eq!(res.transitions_stored, 5);
        assert_eq!(res.pool.len(), 5);
        assert_eq!(res.episodes.len(), 1);
        assert_eq!(res.policy.len(), 5);
    }

    #[test]
    fn identical_seeds_reproduce_bitwise() {
        let cfg = small(6, 40);
        let a = train(&cfg).unwrap();
        let b = train(&cfg).unwrap();
        assert_eq!(a, b);
        let c = train(&TrainingConfig { seed: 1, ..cfg }).unwrap();
        assert_ne!(a.network, c.network);
    }

    #[test]
    fn sparse_rewards_vanish_before_the_last_pulse() {
        let res = train(&TrainingConfig {
            reward_mode: RewardMode::Sparse,
            ..small(5, 20)
        })
        .unwrap();
        let mut terminal = 0;
        for t in res.pool.iter_oldest_first() {
            if t.terminal {
                terminal += 1;
                assert!((0.0..=1.0).contains(&t.reward));
            } else {
                assert_eq!(t.reward, 0.0);
            }
        }
        assert_eq!(terminal, 20);
    }

    #[test]
    fn lambda_never_decreases() {
        for granularity in [LambdaGranularity::PerStep, LambdaGranularity::PerRound] {
            let res = train(&TrainingConfig {
                lambda_granularity: granularity,
                ..small(10, 60)
            })
            .unwrap();
            let trace = res.lambda_trace();
            assert!(trace.windows(2).all(|w| w[0] <= w[1]), "{granularity:?}");
        }
    }

    #[test]
    fn first_round_weights_are_uniform() {
        let res = train(&small(4, 3)).unwrap();
        let w = res.episodes[0].weights;
        assert_eq!((w.w, w.y, w.z), (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));
    }

    #[test]
    fn greedy_fidelity_is_logged_on_schedule() {
        let res = train(&TrainingConfig {
            greedy_eval_every: 4,
            ..small(3, 10)
        })
        .unwrap();
        let logged: Vec<usize> = res
            .episodes
            .iter()
            .filter(|e| e.greedy_fidelity.is_some())
            .map(|e| e.episode)
            .collect();
        assert_eq!(logged, vec![4, 8, 10]);
    }

    #[test]
    fn best_greedy_dominates_every_logged_evaluation() {
        let cfg = TrainingConfig {
            greedy_eval_every: 1,
            ..small(5, 40)
        };
        let res = train(&cfg).unwrap();
        let env = QuantumControlEnv::new(cfg.env.clone()).unwrap();
        let logged: Vec<f64> = res.episodes.iter().filter_map(|e| e.greedy_fidelity).collect();
        let top = logged.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(res.greedy_fidelity, top);
        assert_eq!(logged[res.policy_round - 1], top);
        let recomputed = env.target_fidelity(&env.rollout(&res.policy));
        assert!((recomputed - res.greedy_fidelity).abs() < 1e-12);

        let last = train(&TrainingConfig {
            policy_selection: PolicySelection::FinalNetwork,
            ..cfg
        })
        .unwrap();
        assert_eq!(last.policy_round, 40);
        assert_eq!(extract_policy(&last.network, &env), (last.policy.clone(), last.greedy_fidelity));
    }

    #[test]
    fn forced_argmax_prediction() {
        let env = QuantumControlEnv::new(EnvConfig::with_pulses(5)).unwrap();
        let state = env.reset();
        for k in [0, 4, 8] {
            let a = ControlAction::from_index(k).unwrap();
            let predicted = predict_next_state(&forced(k), &env, &state);
            assert_eq!(predicted, env.step(&state, a).unwrap().psi);
        }
        assert_eq!(env.reset(), state);
    }

    #[test]
    fn forced_net_extracts_constant_sequence() {
        let env = QuantumControlEnv::new(EnvConfig::with_pulses(7)).unwrap();
        let (seq, f) = extract_policy(&forced(0), &env);
        assert_eq!(seq.len(), 7);
        assert!(seq.iter().all(|a| a.u1() == 2.0 && a.u2() == 2.0));
        let direct = crate::qsim::fidelity(&env.rollout(&seq), &env.config().target);
        assert!((f - direct).abs() < 1e-12);
    }

    #[test]
    fn td_error_arithmetic() {
        // Q_eval(s, a) = 0.5, max Q_target(s') = 2, r = 1, gamma = 0.99.
        let eval = forced_value(3, 0.5);
        let target = forced_value(6, 2.0);
        let mut tr = Transition {
            obs: [0.0; 8],
            action: ControlAction::from_index(3).unwrap(),
            reward: 1.0,
            next_obs: [0.0; 8],
            terminal: false,
            td_error_abs: 0.0,
        };
        assert!((td_error(&tr, &eval, &target, 0.99) - 2.48).abs() < 1e-12);
        tr.terminal = true;
        assert!((td_error(&tr, &eval, &target, 0.99) - 0.5).abs() < 1e-12);
    }

    fn forced_value(action: usize, value: f64) -> QNetwork {
        let mut net = forced(action);
        let mut p = net.parameters();
        let len = p.len();
        p[len - ACTION_COUNT + action] = value;
        net.set_parameters(&p).unwrap();
        net
    }

    #[test]
    fn sync_is_a_deep_copy() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut eval = QNetwork::init(&Architecture::default(), &mut rng).unwrap();
        let target = sync_target(&eval);
        let x = [0.3, -0.1, 0.5, 0.2, -0.7, 0.0, 0.1, 0.4];
        assert_eq!(eval.forward(&x), target.forward(&x));
        assert_eq!(sync_target(&target), target);
        let mut p = eval.parameters();
        p.iter_mut().for_each(|v| *v += 0.1);
        eval.set_parameters(&p).unwrap();
        assert_ne!(eval.forward(&x), target.forward(&x));
        assert_eq!(target, sync_target(&target));
    }

    #[test]
    fn train_step_lowers_the_batch_loss() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let trials = 100;
        let mut improved = 0;
        for _ in 0..trials {
            let mut net = QNetwork::init(&Architecture::default(), &mut rng).unwrap();
            let obs: Vec<[f64; 8]> = (0..16)
                .map(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
                .collect();
            let batch: Vec<Sample> = obs
                .iter()
                .map(|o| Sample {
                    obs: o,
                    action: rng.random_range(0..ACTION_COUNT),
                    target: rng.random_range(-1.0..1.0),
                })
                .collect();
            let before = net.train_step(&batch, 0.005, 10.0);
            let after = net.loss_and_gradient(&batch).0;
            if after < before {
                improved += 1;
            }
        }
        assert!(improved * 100 >= 95 * trials, "{improved}/{trials}");
    }

    #[test]
    fn rejects_invalid_configs() {
        let bad = [
            TrainingConfig { gamma: 1.5, ..TrainingConfig::default() },
            TrainingConfig { batch_size: 0, ..TrainingConfig::default() },
            TrainingConfig { batch_size: 3000, ..TrainingConfig::default() },
            TrainingConfig { greedy_eval_every: 0, ..TrainingConfig::default() },
            TrainingConfig {
                architecture: Architecture { layer_sizes: vec![8, 16, 4], ..Architecture::default() },
                ..TrainingConfig::default()
            },
        ];
        for cfg in bad {
            assert!(matches!(train(&cfg), Err(Error::Config(_))), "{cfg:?}");
        }
    }

    #[test]
    fn mode_names_round_trip() {
        for m in RewardMode::ALL {
            assert_eq!(m.name().parse::<RewardMode>().unwrap(), m);
        }
        for m in PolicyMode::ALL {
            assert_eq!(m.to_string().parse::<PolicyMode>().unwrap(), m);
        }
        assert!(matches!("dense".parse::<RewardMode>(), Err(Error::Config(_))));
    }
}
