//! Exact state-vector simulation of the closed two-qubit system.
//!
//! Basis ordering is `(|00>, |01>, |10>, |11>)`, i.e. the first qubit is the
//! most significant bit. Units have `hbar = 1`.
//!
//! The drift Hamiltonian is
//! `H0 = (Sz (x) I)(I (x) Sz) + Sy (x) I + I (x) Sy` and the two control
//! channels couple through `Sx (x) I` and `I (x) Sx`.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Operator2 = Matrix2<Complex64>;
pub type Operator4 = Matrix4<Complex64>;

/// Normalization tolerance accepted on construction.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Hermiticity tolerance enforced before exponentiating.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Drift in squared norm beyond which `evolve` renormalizes.
const RENORM_DRIFT: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A normalized pure state of two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState {
    amp: Vector4<Complex64>,
}

impl QuantumState {
    /// Builds a state from amplitudes `(a00, a01, a10, a11)`.
    ///
    /// The amplitudes must be finite and already normalized to within
    /// [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amp: [Complex64; 4]) -> Result<Self> {
        if amp.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite amplitude".into()));
        }
        let state = Self {
            amp: Vector4::from(amp),
        };
        let norm_sq = state.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "amplitudes are not normalized (sum |a|^2 = {norm_sq})"
            )));
        }
        Ok(state)
    }

    /// Normalizes arbitrary (non-zero, finite) amplitudes into a state.
    pub fn normalized(amp: [Complex64; 4]) -> Result<Self> {
        let v = Vector4::from(amp);
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::InvalidInput(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Ok(Self {
            amp: v.unscale(norm),
        })
    }

    /// The computational basis state with the given two-bit label.
    pub fn basis(label: &str) -> Result<Self> {
        let index = match label {
            "00" => 0,
            "01" => 1,
            "10" => 2,
            "11" => 3,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown basis label {other:?}; expected one of 00, 01, 10, 11"
                )))
            }
        };
        Ok(Self::basis_index(index))
    }

    /// Basis state `|index>` for `index` in `0..4`.
    ///
    /// # Panics
    /// If `index >= 4`.
    pub fn basis_index(index: usize) -> Self {
        assert!(index < 4, "basis index {index} out of range");
        let mut amp = Vector4::from_element(ZERO);
        amp[index] = ONE;
        Self { amp }
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.amp[0], self.amp[1], self.amp[2], self.amp[3]]
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amp[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The same state multiplied by `e^{i theta}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        Self {
            amp: self.amp * Complex64::from_polar(1.0, theta),
        }
    }

    /// Rotates the global phase so the largest-magnitude amplitude (lowest
    /// index on ties) is real and positive.
    pub fn canonical_phase(&self) -> Self {
        let mut best = 0;
        for i in 1..4 {
            if self.amp[i].norm_sqr() > self.amp[best].norm_sqr() {
                best = i;
            }
        }
        let pivot = self.amp[best];
        if pivot.norm() == 0.0 {
            return *self;
        }
        self.with_global_phase(-pivot.arg())
    }

    fn from_vector_unchecked(amp: Vector4<Complex64>) -> Self {
        Self { amp }
    }
}

/// Serialized as four `[re, im]` pairs.
impl Serialize for QuantumState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.amp.iter().map(|a| [a.re, a.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuantumState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = <[[f64; 2]; 4]>::deserialize(d)?;
        let amp = pairs.map(|[re, im]| Complex64::new(re, im));
        QuantumState::from_amplitudes(amp).map_err(serde::de::Error::custom)
    }
}

/// The spin-1/2 operators `(Sx, Sy, Sz)`, each half of the matching Pauli matrix.
pub fn spin_operators() -> (Operator2, Operator2, Operator2) {
    let h = Complex64::new(0.5, 0.0);
    let ih = Complex64::new(0.0, 0.5);
    let sx = Operator2::new(ZERO, h, h, ZERO);
    let sy = Operator2::new(ZERO, -ih, ih, ZERO);
    let sz = Operator2::new(h, ZERO, ZERO, -h);
    (sx, sy, sz)
}

/// Kronecker product `a (x) b` in the lexicographic two-qubit basis.
pub fn tensor_product(a: &Operator2, b: &Operator2) -> Operator4 {
    Operator4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Control Hamiltonian of channel `0` (`Sx (x) I`) or `1` (`I (x) Sx`).
///
/// # Panics
/// If `channel > 1`.
pub fn control_hamiltonian(channel: usize) -> Operator4 {
    let (sx, _, _) = spin_operators();
    let id = Operator2::identity();
    match channel {
        0 => tensor_product(&sx, &id),
        1 => tensor_product(&id, &sx),
        _ => panic!("the system has two control channels, got channel {channel}"),
    }
}

/// The control-free part of the Hamiltonian.
pub fn drift_hamiltonian() -> Operator4 {
    let (_, sy, sz) = spin_operators();
    let id = Operator2::identity();
    // (Sz (x) I)(I (x) Sz) is Sz (x) Sz, kept as the literal product.
    tensor_product(&sz, &id) * tensor_product(&id, &sz)
        + tensor_product(&sy, &id)
        + tensor_product(&id, &sy)
}

/// Full Hamiltonian for constant control amplitudes `(u1, u2)`.
pub fn build_hamiltonian(u1: f64, u2: f64) -> Operator4 {
    drift_hamiltonian()
        + control_hamiltonian(0) * Complex64::new(u1, 0.0)
        + control_hamiltonian(1) * Complex64::new(u2, 0.0)
}

/// Largest elementwise deviation `max |M - M^dagger|`.
pub fn hermitian_defect(m: &Operator4) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest elementwise deviation `max |U^dagger U - I|`.
pub fn unitarity_defect(u: &Operator4) -> f64 {
    (u.adjoint() * u - Operator4::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Eigendecomposition `H = V diag(lambda) V^dagger` of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: [f64; 4],
    pub vectors: Operator4,
}

pub fn hermitian_eigen(h: &Operator4) -> Result<HermitianEigen> {
    let defect = hermitian_defect(h);
    if defect > HERMITIAN_TOLERANCE {
        return Err(Error::Numeric(format!(
            "operator is not Hermitian (max |H - H^dagger| = {defect:e})"
        )));
    }
    // Symmetrize away round-off so the solver sees an exactly Hermitian input.
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("Hermitian eigensolver did not converge".into()))?;
    let values = [
        eig.eigenvalues[0],
        eig.eigenvalues[1],
        eig.eigenvalues[2],
        eig.eigenvalues[3],
    ];
    Ok(HermitianEigen {
        values,
        vectors: eig.eigenvectors,
    })
}

/// `exp(-i H dt)` for Hermitian `H`, via `V exp(-i Lambda dt) V^dagger`.
pub fn propagator(h: &Operator4, dt: f64) -> Result<Operator4> {
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::InvalidInput(format!(
            "time step must be finite and non-negative, got {dt}"
        )));
    }
    let eig = hermitian_eigen(h)?;
    Ok(eig.exp_i(dt))
}

impl HermitianEigen {
    /// `exp(-i H dt)` from the stored decomposition.
    pub fn exp_i(&self, dt: f64) -> Operator4 {
        let v = &self.vectors;
        let phases = self.values.map(|l| Complex64::from_polar(1.0, -l * dt));
        Operator4::from_fn(|r, c| {
            (0..4)
                .map(|k| v[(r, k)] * phases[k] * v[(c, k)].conj())
                .sum()
        })
    }
}

/// Applies `u` to `state`.
pub fn evolve(state: &QuantumState, u: &Operator4) -> QuantumState {
    let next = QuantumState::from_vector_unchecked(u * state.amp);
    let norm_sq = next.norm_sqr();
    if (norm_sq - 1.0).abs() > RENORM_DRIFT {
        QuantumState::from_vector_unchecked(next.amp.unscale(norm_sq.sqrt()))
    } else {
        next
    }
}

/// Transition probability `|<a|b>|^2`, clamped to `[0, 1]`.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> f64 {
    a.inner(b).norm_sqr().clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Qubit {
    First,
    Second,
}

/// Outcome of a projective single-qubit measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub outcome: u8,
    /// Probability of the returned outcome.
    pub probability: f64,
    pub post: QuantumState,
}

/// Probabilities `(P(0), P(1))` for measuring `which`.
pub fn branch_probabilities(state: &QuantumState, which: Qubit) -> (f64, f64) {
    let p = |i: usize| state.amp[i].norm_sqr();
    match which {
        Qubit::First => (p(0) + p(1), p(2) + p(3)),
        Qubit::Second => (p(0) + p(2), p(1) + p(3)),
    }
}

/// Measures one qubit in the computational basis and collapses the state.
pub fn measure_qubit<R: Rng + ?Sized>(
    state: &QuantumState,
    which: Qubit,
    rng: &mut R,
) -> Measurement {
    let (p0, p1) = branch_probabilities(state, which);
    let draw: f64 = rng.random();
    let mut outcome = if draw < p0 / (p0 + p1) { 0u8 } else { 1u8 };
    let prob = |o: u8| if o == 0 { p0 } else { p1 };
    if prob(outcome) < 1e-15 {
        outcome ^= 1;
    }
    let keep = |index: usize| -> bool {
        let bit = match which {
            Qubit::First => (index >> 1) & 1,
            Qubit::Second => index & 1,
        };
        bit as u8 == outcome
    };
    let probability = prob(outcome);
    let scale = probability.sqrt();
    let amp = Vector4::from_fn(|i, _| {
        if keep(i) {
            state.amp[i] / scale
        } else {
            ZERO
        }
    });
    Measurement {
        outcome,
        probability,
        post: QuantumState::from_vector_unchecked(amp),
    }
}
