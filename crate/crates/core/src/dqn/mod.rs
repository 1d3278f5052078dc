//! Deep Q-learning agent: Q-network, prioritized replay and the training loop.

mod agent;
mod network;
mod replay;

pub use agent::{
    extract_policy, predict_next_state, sync_target, td_error, train, EpisodeRecord, LambdaGranularity,
    PolicyMode, PolicySelection, RewardMode, TrainingConfig, TrainingResult,
};
pub use network::{Activation, Architecture, Checkpoint, DenseLayer, Gradients, NamedArray, Optimizer, OptimizerKind, QNetwork, Sample};
pub use replay::{sample_prioritized, ReplayPool, Transition, PRIORITY_EPSILON};
