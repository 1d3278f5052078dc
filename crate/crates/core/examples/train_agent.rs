// Train the weighted-difference DQN agent and save its network.
//
// `cargo run --release --example train_agent -- 20 500` trains at N = 20
// for 500 rounds; the defaults are small enough to finish in a second.

use qprep::dqn::{self, QNetwork, TrainingConfig};
use qprep::env::{EnvConfig, QuantumControlEnv};

pub fn run_example(n_pulses: usize, episodes: usize, seed: u64) -> qprep::Result<f64> {
    let cfg = TrainingConfig {
        env: EnvConfig::with_pulses(n_pulses),
        episodes,
        seed,
        ..TrainingConfig::default()
    };
    let res = dqn::train(&cfg)?;
    for e in res.episodes.iter().filter(|e| e.greedy_fidelity.is_some()) {
        println!(
            "round {:4}  eps {:.3}  lambda {:5}  final {:.4}  greedy {:.4}",
            e.episode,
            e.epsilon.unwrap_or(f64::NAN),
            e.lambda,
            e.final_fidelity,
            e.greedy_fidelity.unwrap()
        );
    }
    let pulses: Vec<String> = res.policy.iter().map(|a| a.to_string()).collect();
    println!("best greedy sequence (round {}): {}", res.policy_round, pulses.join(" "));
    println!("fidelity {:.6}, AUC {:.4}", res.greedy_fidelity, res.auc());

    let path = std::env::temp_dir().join(format!("qprep-net-seed{seed}.json"));
    res.network.save_json(&path)?;
    let restored = QNetwork::load_json(&path)?;
    let env = QuantumControlEnv::new(cfg.env)?;
    assert_eq!(dqn::extract_policy(&restored, &env), dqn::extract_policy(&res.network, &env));
    println!("network checkpoint written to {}", path.display());
    Ok(res.greedy_fidelity)
}

#[allow(dead_code)]
fn main() -> qprep::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>().ok());
    let n = args.next().flatten().unwrap_or(10);
    let episodes = args.next().flatten().unwrap_or(100);
    run_example(n, episodes, 0).map(|_| ())
}
