// Continuous-control GRAPE from a random start, |01> to |10> in T = 4.

use qprep::grape::{self, AscentSettings, ControlField};
use qprep::qsim::QuantumState;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> qprep::Result<f64> {
    let psi0 = QuantumState::basis("01")?;
    let target = QuantumState::basis("10")?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let init = ControlField::random(4.0, 20, &mut rng)?;

    let result = grape::optimize(&psi0, &target, init, &AscentSettings::default())?;
    for (i, j) in result.cost_history.iter().enumerate().step_by(50) {
        println!("iter {i:4}  J = {j:.6}");
    }
    println!(
        "stopped after {} iterations at J = {:.6}",
        result.iterations, result.final_fidelity
    );
    println!("u1 = {:.3?}", result.controls.values[0]);
    println!("u2 = {:.3?}", result.controls.values[1]);
    Ok(result.final_fidelity)
}

#[allow(dead_code)]
fn main() -> qprep::Result<()> {
    run_example().map(|_| ())
}
