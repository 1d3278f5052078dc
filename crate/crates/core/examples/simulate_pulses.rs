// Roll a fixed pulse sequence through the two-qubit model and watch the fidelity.

use qprep::env::{ControlAction, EnvConfig, QuantumControlEnv};
use qprep::qsim;

pub fn run_example() -> qprep::Result<Vec<f64>> {
    let env = QuantumControlEnv::new(EnvConfig::with_pulses(5))?;
    let seq = [(2.0, -2.0), (-2.0, 2.0), (2.0, -2.0), (-2.0, 2.0), (2.0, -2.0)]
        .into_iter()
        .map(|(u1, u2)| ControlAction::from_pulses(u1, u2))
        .collect::<qprep::Result<Vec<_>>>()?;

    let mut state = env.reset();
    let mut trace = vec![env.target_fidelity(&state.psi)];
    for &a in &seq {
        let u = env.unitary(a);
        println!(
            "t={} action {a}: unitarity defect {:.1e}",
            state.t,
            qsim::unitarity_defect(u)
        );
        state = env.step(&state, a)?;
        trace.push(env.target_fidelity(&state.psi));
    }
    println!("fidelity per step: {trace:.4?}");
    println!("norm after the episode: {:.15}", state.psi.norm_sqr());
    Ok(trace)
}

#[allow(dead_code)]
fn main() -> qprep::Result<()> {
    run_example().map(|_| ())
}
