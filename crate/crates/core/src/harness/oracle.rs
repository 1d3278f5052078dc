use serde::Serialize;

use crate::env::{ControlAction, ControlSequence, EnvConfig, QuantumControlEnv, ACTION_COUNT};
use crate::error::{Error, Result};
use crate::qsim::{self, QuantumState};

/// Largest number of sequences [`brute_force_optimum`] will enumerate.
pub const ORACLE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub f_star: f64,
    pub best_sequence: ControlSequence,
    pub sequences_evaluated: u64,
}

/// Exhaustive maximum of the final fidelity over all `9^N` pulse sequences.
///
/// Prefixes are shared depth-first, in lexicographic action order, so the
/// first maximizer found is the lexicographically smallest one. States are
/// produced by the same `evolve` calls as an environment rollout, so the
/// fidelities agree bit for bit with [`QuantumControlEnv::rollout`].
pub fn brute_force_optimum(cfg: &EnvConfig) -> Result<OracleResult> {
    let n = cfg.n_pulses;
    let count = (ACTION_COUNT as u64)
        .checked_pow(n as u32)
        .filter(|&c| c <= ORACLE_LIMIT)
        .ok_or(Error::OracleGuard {
            n_pulses: n,
            limit: ORACLE_LIMIT,
        })?;
    if n == 0 {
        return Ok(OracleResult {
            f_star: qsim::fidelity(&cfg.initial, &cfg.target),
            best_sequence: Vec::new(),
            sequences_evaluated: 1,
        });
    }
    let env = QuantumControlEnv::new(cfg.clone())?;
    let unitaries: Vec<_> = ControlAction::all().map(|a| *env.unitary(a)).collect();

    let mut best = OracleResult {
        f_star: f64::NEG_INFINITY,
        best_sequence: Vec::new(),
        sequences_evaluated: count,
    };
    let mut prefix: Vec<u8> = Vec::with_capacity(n);
    let mut stack: Vec<QuantumState> = Vec::with_capacity(n + 1);
    stack.push(cfg.initial);
    search(&unitaries, &cfg.target, n, &mut prefix, &mut stack, &mut best);
    Ok(best)
}

fn search(
    unitaries: &[qsim::Operator4],
    target: &QuantumState,
    n: usize,
    prefix: &mut Vec<u8>,
    stack: &mut Vec<QuantumState>,
    best: &mut OracleResult,
) {
    let psi = *stack.last().unwrap();
    for (a, u) in unitaries.iter().enumerate() {
        let next = qsim::evolve(&psi, u);
        prefix.push(a as u8);
        if prefix.len() == n {
            let f = qsim::fidelity(&next, target);
            if f > best.f_star {
                best.f_star = f;
                best.best_sequence = prefix
                    .iter()
                    .map(|&i| ControlAction::from_index(i as usize).unwrap())
                    .collect();
            }
        } else {
            stack.push(next);
            search(unitaries, target, n, prefix, stack, best);
            stack.pop();
        }
        prefix.pop();
    }
}
