//! Gradient ascent pulse engineering (GRAPE) on piecewise-constant controls.
//!
//! The cost is `J(u) = |<psi(T)|psi_f>|^2`. [`gradient`] differentiates each
//! slice propagator exactly through the eigenbasis of the slice Hamiltonian
//! (Daleckii-Krein divided differences), so it agrees with finite differences
//! at any slice length. [`gradient_first_order`] is the familiar
//! `-i dt H_m U_j` approximation, only accurate for short slices.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{self, Operator4, QuantumState};

/// Number of control channels (`u1`, `u2`).
pub const CHANNELS: usize = 2;

/// Per-channel amplitude on each of `n_slices()` equal slices of `[0, total_time]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlField {
    pub total_time: f64,
    pub values: [Vec<f64>; CHANNELS],
}

impl ControlField {
    pub fn new(total_time: f64, values: [Vec<f64>; CHANNELS]) -> Result<Self> {
        let field = Self { total_time, values };
        field.validate()?;
        Ok(field)
    }

    pub fn zeros(total_time: f64, n_slices: usize) -> Result<Self> {
        Self::new(total_time, [vec![0.0; n_slices], vec![0.0; n_slices]])
    }

    /// Uniform random amplitudes in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(total_time: f64, n_slices: usize, rng: &mut R) -> Result<Self> {
        let mut draw = || (0..n_slices).map(|_| rng.random_range(-1.0..=1.0)).collect::<Vec<f64>>();
        let u1 = draw();
        let u2 = draw();
        Self::new(total_time, [u1, u2])
    }

    pub fn n_slices(&self) -> usize {
        self.values[0].len()
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.n_slices() as f64
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.values[0].len();
        if n == 0 {
            return Err(Error::InvalidInput("control field needs at least one slice".into()));
        }
        if self.values[1].len() != n {
            return Err(Error::InvalidInput("control channels differ in length".into()));
        }
        if !(self.total_time > 0.0) || !self.total_time.is_finite() {
            return Err(Error::InvalidInput(format!(
                "total time must be positive, got {}",
                self.total_time
            )));
        }
        if self.values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite control amplitude".into()));
        }
        Ok(())
    }

    fn slice_hamiltonian(&self, j: usize) -> Operator4 {
        qsim::build_hamiltonian(self.values[0][j], self.values[1][j])
    }

    fn axpy(&self, step: f64, direction: &[Vec<f64>; CHANNELS]) -> Self {
        let mut next = self.clone();
        for (ch, dir) in next.values.iter_mut().zip(direction) {
            for (v, d) in ch.iter_mut().zip(dir) {
                *v += step * d;
            }
        }
        next
    }
}

/// Outcome of [`optimize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrapeResult {
    pub controls: ControlField,
    /// Cost before the first update, then after every iteration.
    pub cost_history: Vec<f64>,
    pub final_fidelity: f64,
    pub iterations: usize,
}

/// Applies each slice propagator in order. Returns the final state and the propagators.
pub fn simulate_piecewise(controls: &ControlField, psi0: &QuantumState) -> Result<(QuantumState, Vec<Operator4>)> {
    controls.validate()?;
    let dt = controls.dt();
    let mut props = Vec::with_capacity(controls.n_slices());
    let mut psi = *psi0;
    for j in 0..controls.n_slices() {
        let u = qsim::propagator(&controls.slice_hamiltonian(j), dt)?;
        psi = qsim::evolve(&psi, &u);
        props.push(u);
    }
    Ok((psi, props))
}

pub fn cost(controls: &ControlField, psi0: &QuantumState, psif: &QuantumState) -> Result<f64> {
    let (last, _) = simulate_piecewise(controls, psi0)?;
    Ok(qsim::fidelity(&last, psif))
}

/// Per-slice forward states `U_j..U_1 psi0` (index 0 is `psi0`) and backward
/// co-states `U_{j+1}^dagger..U_N^dagger psi_f` (index `N` is `psi_f`).
struct Sweep {
    forward: Vec<QuantumState>,
    backward: Vec<QuantumState>,
    overlap: Complex64,
}

fn sweep(props: &[Operator4], psi0: &QuantumState, psif: &QuantumState) -> Sweep {
    let n = props.len();
    let mut forward = Vec::with_capacity(n + 1);
    forward.push(*psi0);
    for u in props {
        let next = qsim::evolve(forward.last().unwrap(), u);
        forward.push(next);
    }
    let mut backward = vec![*psif; n + 1];
    for j in (0..n).rev() {
        backward[j] = qsim::evolve(&backward[j + 1], &props[j].adjoint());
    }
    let overlap = psif.inner(&forward[n]);
    Sweep {
        forward,
        backward,
        overlap,
    }
}

fn sandwich(bra: &QuantumState, op: &Operator4, ket: &QuantumState) -> Complex64 {
    let b = bra.amplitudes();
    let k = ket.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..4 {
        let row: Complex64 = (0..4).map(|c| op[(r, c)] * k[c]).sum();
        acc += b[r].conj() * row;
    }
    acc
}

/// `(f(a) - f(b)) / (a - b)` for `f(x) = exp(-i x dt)`, stable as `a -> b`.
fn exp_divided_difference(a: f64, b: f64, dt: f64) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (a - b) * dt;
    let sinc = if half.abs() < 1e-8 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::new(0.0, -dt) * Complex64::from_polar(1.0, -mid * dt) * sinc
}

/// Exact `dJ/du_{m,j}` for every channel `m` and slice `j`.
pub fn gradient(controls: &ControlField, psi0: &QuantumState, psif: &QuantumState) -> Result<[Vec<f64>; CHANNELS]> {
    controls.validate()?;
    let n = controls.n_slices();
    let dt = controls.dt();
    let mut eigs = Vec::with_capacity(n);
    let mut props = Vec::with_capacity(n);
    for j in 0..n {
        let e = qsim::hermitian_eigen(&controls.slice_hamiltonian(j))?;
        props.push(e.exp_i(dt));
        eigs.push(e);
    }
    let sw = sweep(&props, psi0, psif);
    let hm = [qsim::control_hamiltonian(0), qsim::control_hamiltonian(1)];
    let mut grad = [vec![0.0; n], vec![0.0; n]];
    for (j, e) in eigs.iter().enumerate() {
        let v = &e.vectors;
        let vd = v.adjoint();
        let kernel = Operator4::from_fn(|k, l| exp_divided_difference(e.values[k], e.values[l], dt));
        for (m, h) in hm.iter().enumerate() {
            let in_eigenbasis = vd * h * v;
            let du = v * in_eigenbasis.component_mul(&kernel) * vd;
            let dc = sandwich(&sw.backward[j + 1], &du, &sw.forward[j]);
            grad[m][j] = 2.0 * (sw.overlap.conj() * dc).re;
        }
    }
    Ok(grad)
}

/// Gradient with the first-order slice derivative `dU_j/du_m = -i dt H_m U_j`.
pub fn gradient_first_order(
    controls: &ControlField,
    psi0: &QuantumState,
    psif: &QuantumState,
) -> Result<[Vec<f64>; CHANNELS]> {
    let (_, props) = simulate_piecewise(controls, psi0)?;
    let sw = sweep(&props, psi0, psif);
    let dt = controls.dt();
    let n = controls.n_slices();
    let mut grad = [vec![0.0; n], vec![0.0; n]];
    for (m, g) in grad.iter_mut().enumerate() {
        let h = qsim::control_hamiltonian(m);
        for (j, gj) in g.iter_mut().enumerate() {
            let dc = Complex64::new(0.0, -dt) * sandwich(&sw.backward[j + 1], &h, &sw.forward[j + 1]);
            *gj = 2.0 * (sw.overlap.conj() * dc).re;
        }
    }
    Ok(grad)
}

/// Step-size and stopping settings for [`optimize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AscentSettings {
    pub learning_rate: f64,
    pub max_iters: usize,
    pub target_fidelity: f64,
    /// Halve the step after a cost decrease (and skip that update); restore it after a success.
    pub backtracking: bool,
}

impl Default for AscentSettings {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            max_iters: 2000,
            target_fidelity: 0.999,
            backtracking: true,
        }
    }
}

const MIN_STEP: f64 = 1e-14;

/// Gradient ascent `u <- u + lr * dJ/du` until `max_iters` or `J >= target_fidelity`.
pub fn optimize(
    psi0: &QuantumState,
    psif: &QuantumState,
    init: ControlField,
    settings: &AscentSettings,
) -> Result<GrapeResult> {
    if !(settings.learning_rate >= 0.0) {
        return Err(Error::InvalidInput("learning rate must be non-negative".into()));
    }
    if !(settings.target_fidelity > 0.0 && settings.target_fidelity <= 1.0) {
        return Err(Error::InvalidInput("target fidelity must lie in (0, 1]".into()));
    }
    let mut controls = init;
    let mut current = cost(&controls, psi0, psif)?;
    let mut history = vec![current];
    let mut step = settings.learning_rate;
    let mut iterations = 0;
    while iterations < settings.max_iters && current < settings.target_fidelity {
        let grad = gradient(&controls, psi0, psif)?;
        let candidate = controls.axpy(step, &grad);
        let value = cost(&candidate, psi0, psif)?;
        if value >= current || !settings.backtracking {
            controls = candidate;
            current = value;
            step = settings.learning_rate;
        } else {
            step *= 0.5;
        }
        history.push(current);
        iterations += 1;
        if settings.backtracking && step < MIN_STEP {
            break;
        }
    }
    Ok(GrapeResult {
        controls,
        final_fidelity: current,
        cost_history: history,
        iterations,
    })
}

/// Parameters of a complete GRAPE baseline run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrapeParams {
    pub n_slices: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub ascent: AscentSettings,
}

impl Default for GrapeParams {
    fn default() -> Self {
        Self {
            n_slices: 20,
            seed: 0,
            ascent: AscentSettings::default(),
        }
    }
}
