// Best achievable discrete-pulse fidelity for short horizons, by enumeration.

use qprep::env::EnvConfig;
use qprep::harness::brute_force_optimum;

pub fn run_example(max_pulses: usize) -> qprep::Result<Vec<f64>> {
    let mut best = Vec::new();
    for n in 0..=max_pulses {
        let res = brute_force_optimum(&EnvConfig::with_pulses(n))?;
        let pulses: Vec<String> = res.best_sequence.iter().map(|a| a.to_string()).collect();
        println!(
            "N={n}: f* = {:.6} over {} sequences, best {}",
            res.f_star,
            res.sequences_evaluated,
            pulses.join(" ")
        );
        best.push(res.f_star);
    }
    Ok(best)
}

#[allow(dead_code)]
fn main() -> qprep::Result<()> {
    let max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    run_example(max).map(|_| ())
}
