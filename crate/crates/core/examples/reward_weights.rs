// How per-step rewards are weighted from one learning round to the next.

use qprep::reward::{
    round_indicators, round_weights, step_reward, DistanceTriple, RewardWeights, RoundTrace, WeightSchedule,
};

fn trace(rows: &[(f64, f64, f64)]) -> RoundTrace {
    let mut t = RoundTrace::with_capacity(rows.len());
    for &(d_t, d_next, d_pred) in rows {
        t.push(&DistanceTriple { d_t, d_next, d_pred });
    }
    t
}

pub fn run_example() -> qprep::Result<RewardWeights> {
    let first = trace(&[(0.0, 0.2, 0.1), (0.2, 0.5, 0.4), (0.5, 0.6, 0.7), (0.6, 0.4, 0.5)]);
    let second = trace(&[(0.0, 0.3, 0.2), (0.3, 0.4, 0.5), (0.4, 0.7, 0.6), (0.7, 0.8, 0.9)]);

    let ind = round_indicators(&first, &second)?;
    let w = round_weights(&ind, 3)?;
    println!("improved positions: W {:?} Y {:?} Z {:?}", ind.w, ind.y, ind.z);
    println!("weights for round 3: W={} Y={} Z={}", w.w, w.y, w.z);

    let d = DistanceTriple { d_t: 0.4, d_next: 0.7, d_pred: 0.6 };
    println!("first-round reward {:.4}", step_reward(&d, &RewardWeights::first_round()));
    println!("round-3 reward     {:.4}", step_reward(&d, &w));

    // The schedule does the same bookkeeping round by round.
    let mut schedule = WeightSchedule::new(0.0, 1)?;
    for t in [first, second] {
        println!("round {} uses {:?}", schedule.current().round, schedule.current());
        schedule.finish_round(t)?;
    }
    assert_eq!(schedule.current(), w);
    Ok(w)
}

#[allow(dead_code)]
fn main() -> qprep::Result<()> {
    run_example().map(|_| ())
}
