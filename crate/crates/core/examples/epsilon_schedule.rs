// Adaptive exploration: epsilon shrinks as high-fidelity events accumulate.

use qprep::policy::{self, EpsilonSchedule};

pub fn run_example() -> Vec<(u64, f64)> {
    let mut rows = Vec::new();
    for lambda in [0, 50, 100, 250, 500, 1000, 2000, 5000] {
        let s = EpsilonSchedule { lambda, ..EpsilonSchedule::default() };
        println!("lambda {lambda:5}: epsilon {:.6}", s.epsilon());
        rows.push((lambda, s.epsilon()));
    }

    let mut s = EpsilonSchedule::default();
    for f in [0.3, 0.85, 0.79, 0.95] {
        s = policy::bump_lambda(s, f);
        println!("observed fidelity {f}: lambda {}", s.lambda);
    }
    for round in [0, 100, 180, 400] {
        println!("fixed decay, round {round}: {:.3}", policy::fixed_decay_epsilon(round));
    }
    rows
}

#[allow(dead_code)]
fn main() {
    run_example();
}
