//! Feed-forward Q-network with hand-written backpropagation.
//!
//! Weights are stored row-major, `weights[o * in_dim + i]` connecting input
//! `i` to output `o`. Hidden layers use the configured activation; the head
//! is linear.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Tanh,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the activation output `a`.
    fn derivative_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - a * a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Architecture {
    /// Input size, hidden sizes, output size.
    pub layer_sizes: Vec<usize>,
    pub activation: Activation,
}

impl Default for Architecture {
    fn default() -> Self {
        Self {
            layer_sizes: vec![8, 64, 64, 9],
            activation: Activation::Relu,
        }
    }
}

impl Architecture {
    pub fn validate(&self) -> Result<()> {
        if self.layer_sizes.len() < 2 || self.layer_sizes.contains(&0) {
            return Err(Error::Config(format!(
                "architecture needs at least an input and an output layer of non-zero size, got {:?}",
                self.layer_sizes
            )));
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    pub in_dim: usize,
    pub out_dim: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl DenseLayer {
    fn forward_into(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.weights.chunks_exact(self.in_dim).zip(&self.biases).map(|(row, b)| {
            row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>() + b
        }));
    }
}

/// Gradients of the loss with the same layout as the network parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    fn zeros_like(net: &QNetwork) -> Self {
        Self {
            weights: net.layers.iter().map(|l| vec![0.0; l.weights.len()]).collect(),
            biases: net.layers.iter().map(|l| vec![0.0; l.biases.len()]).collect(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.weights
            .iter()
            .chain(&self.biases)
            .flatten()
            .map(|g| g * g)
            .sum::<f64>()
            .sqrt()
    }

    /// Flattened in [`QNetwork::parameters`] order.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w);
            out.extend_from_slice(b);
        }
        out
    }

    fn scale(&mut self, s: f64) {
        for g in self.weights.iter_mut().chain(self.biases.iter_mut()).flatten() {
            *g *= s;
        }
    }
}

/// One regression sample: push `Q(obs, action)` towards `target`.
#[derive(Debug, Clone, Copy)]
pub struct Sample<'a> {
    pub obs: &'a [f64],
    pub action: usize,
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QNetwork {
    arch: Architecture,
    layers: Vec<DenseLayer>,
}

impl QNetwork {
    /// Scaled-uniform weights in `+-sqrt(6 / fan_in)`, zero biases.
    pub fn init<R: Rng + ?Sized>(arch: &Architecture, rng: &mut R) -> Result<Self> {
        arch.validate()?;
        let layers = arch
            .layer_sizes
            .windows(2)
            .map(|w| {
                let (in_dim, out_dim) = (w[0], w[1]);
                let bound = (6.0 / in_dim as f64).sqrt();
                DenseLayer {
                    in_dim,
                    out_dim,
                    weights: (0..in_dim * out_dim).map(|_| rng.random_range(-bound..bound)).collect(),
                    biases: vec![0.0; out_dim],
                }
            })
            .collect();
        Ok(Self {
            arch: arch.clone(),
            layers,
        })
    }

    pub fn architecture(&self) -> &Architecture {
        &self.arch
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [DenseLayer] {
        &mut self.layers
    }

    pub fn forward(&self, obs: &[f64]) -> Vec<f64> {
        self.activations(obs).pop().unwrap()
    }

    /// Outputs of every layer, starting with the input itself.
    fn activations(&self, obs: &[f64]) -> Vec<Vec<f64>> {
        assert_eq!(obs.len(), self.arch.input_dim(), "observation length");
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(obs.to_vec());
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            let mut out = Vec::with_capacity(layer.out_dim);
            layer.forward_into(&acts[k], &mut out);
            if k < last {
                for v in &mut out {
                    *v = self.arch.activation.apply(*v);
                }
            }
            acts.push(out);
        }
        acts
    }

    /// Mean squared error `mean_b (Q(obs_b, a_b) - target_b)^2` and its gradient.
    pub fn loss_and_gradient(&self, batch: &[Sample<'_>]) -> (f64, Gradients) {
        let mut grads = Gradients::zeros_like(self);
        if batch.is_empty() {
            return (0.0, grads);
        }
        let scale = 1.0 / batch.len() as f64;
        let mut loss = 0.0;
        let last = self.layers.len() - 1;
        for s in batch {
            let acts = self.activations(s.obs);
            let q = acts[last + 1][s.action];
            let err = q - s.target;
            loss += err * err * scale;

            let mut delta = vec![0.0; self.layers[last].out_dim];
            delta[s.action] = 2.0 * err * scale;
            for k in (0..=last).rev() {
                let layer = &self.layers[k];
                let input = &acts[k];
                let gw = &mut grads.weights[k];
                for (o, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    grads.biases[k][o] += d;
                    let row = &mut gw[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (g, x) in row.iter_mut().zip(input) {
                        *g += d * x;
                    }
                }
                if k == 0 {
                    break;
                }
                let mut prev = vec![0.0; layer.in_dim];
                for (o, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    let row = &layer.weights[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (p, w) in prev.iter_mut().zip(row) {
                        *p += d * w;
                    }
                }
                for (p, a) in prev.iter_mut().zip(input) {
                    *p *= self.arch.activation.derivative_from_output(*a);
                }
                delta = prev;
            }
        }
        (loss, grads)
    }

    /// `params -= lr * grads`.
    pub fn apply_gradients(&mut self, grads: &Gradients, lr: f64) {
        for (k, layer) in self.layers.iter_mut().enumerate() {
            for (w, g) in layer.weights.iter_mut().zip(&grads.weights[k]) {
                *w -= lr * g;
            }
            for (b, g) in layer.biases.iter_mut().zip(&grads.biases[k]) {
                *b -= lr * g;
            }
        }
    }

    /// One SGD step on the batch MSE with the gradient clipped to L2 norm `max_norm`.
    /// Returns the loss before the step.
    pub fn train_step(&mut self, batch: &[Sample<'_>], lr: f64, max_norm: f64) -> f64 {
        if lr == 0.0 {
            return self.loss_and_gradient(batch).0;
        }
        let (loss, mut grads) = self.loss_and_gradient(batch);
        let norm = grads.l2_norm();
        if norm > max_norm {
            grads.scale(max_norm / norm);
        }
        self.apply_gradients(&grads, lr);
        loss
    }

    /// Clips `grads` to L2 norm `max_norm` and lets `opt` apply them.
    pub fn train_step_with(&mut self, batch: &[Sample<'_>], opt: &mut Optimizer, max_norm: f64) -> f64 {
        let (loss, mut grads) = self.loss_and_gradient(batch);
        let norm = grads.l2_norm();
        if norm > max_norm {
            grads.scale(max_norm / norm);
        }
        opt.apply(self, &grads);
        loss
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.biases.len()).sum()
    }

    /// All parameters, layer by layer: weights then biases.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parameter_count());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.biases);
        }
        out
    }

    pub fn set_parameters(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.parameter_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} parameters, got {}",
                self.parameter_count(),
                params.len()
            )));
        }
        let mut rest = params;
        for l in &mut self.layers {
            let (w, tail) = rest.split_at(l.weights.len());
            l.weights.copy_from_slice(w);
            let (b, tail) = tail.split_at(l.biases.len());
            l.biases.copy_from_slice(b);
            rest = tail;
        }
        Ok(())
    }

    pub fn to_checkpoint(&self) -> Checkpoint {
        let mut arrays = Vec::with_capacity(2 * self.layers.len());
        for (k, l) in self.layers.iter().enumerate() {
            arrays.push(NamedArray {
                name: format!("layers.{k}.weight"),
                shape: vec![l.out_dim, l.in_dim],
                data: l.weights.clone(),
            });
            arrays.push(NamedArray {
                name: format!("layers.{k}.bias"),
                shape: vec![l.out_dim],
                data: l.biases.clone(),
            });
        }
        Checkpoint {
            architecture: self.arch.clone(),
            arrays,
        }
    }

    pub fn from_checkpoint(ck: &Checkpoint) -> Result<Self> {
        ck.architecture.validate()?;
        let mut layers = Vec::new();
        for (k, w) in ck.architecture.layer_sizes.windows(2).enumerate() {
            let (in_dim, out_dim) = (w[0], w[1]);
            let weights = ck.array(&format!("layers.{k}.weight"), &[out_dim, in_dim])?;
            let biases = ck.array(&format!("layers.{k}.bias"), &[out_dim])?;
            if weights.iter().chain(&biases).any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("layer {k} has non-finite parameters")));
            }
            layers.push(DenseLayer {
                in_dim,
                out_dim,
                weights,
                biases,
            });
        }
        Ok(Self {
            arch: ck.architecture.clone(),
            layers,
        })
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_checkpoint())
            .map_err(|e| Error::Numeric(format!("cannot serialize checkpoint: {e}")))?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let ck: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("malformed checkpoint {}: {e}", path.display())))?;
        Self::from_checkpoint(&ck)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum OptimizerKind {
    Sgd,
    Adam { beta1: f64, beta2: f64, eps: f64 },
}

impl OptimizerKind {
    pub fn adam() -> Self {
        OptimizerKind::Adam {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Parameter update rule with its running state.
#[derive(Debug, Clone)]
pub struct Optimizer {
    kind: OptimizerKind,
    lr: f64,
    step: i32,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, lr: f64, net: &QNetwork) -> Self {
        let n = match kind {
            OptimizerKind::Sgd => 0,
            OptimizerKind::Adam { .. } => net.parameter_count(),
        };
        Self {
            kind,
            lr,
            step: 0,
            m: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    pub fn apply(&mut self, net: &mut QNetwork, grads: &Gradients) {
        if self.lr == 0.0 {
            return;
        }
        match self.kind {
            OptimizerKind::Sgd => net.apply_gradients(grads, self.lr),
            OptimizerKind::Adam { beta1, beta2, eps } => {
                self.step = self.step.saturating_add(1);
                let c1 = 1.0 - beta1.powi(self.step);
                let c2 = 1.0 - beta2.powi(self.step);
                let mut k = 0;
                for (layer, (gw, gb)) in net.layers.iter_mut().zip(grads.weights.iter().zip(&grads.biases)) {
                    for (p, g) in layer.weights.iter_mut().chain(layer.biases.iter_mut()).zip(gw.iter().chain(gb)) {
                        self.m[k] = beta1 * self.m[k] + (1.0 - beta1) * g;
                        self.v[k] = beta2 * self.v[k] + (1.0 - beta2) * g * g;
                        *p -= self.lr * (self.m[k] / c1) / ((self.v[k] / c2).sqrt() + eps);
                        k += 1;
                    }
                }
            }
        }
    }
}

/// JSON checkpoint layout: the architecture plus named row-major arrays
/// `layers.{k}.weight` (shape `[out, in]`) and `layers.{k}.bias` (shape `[out]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub architecture: Architecture,
    pub arrays: Vec<NamedArray>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedArray {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl Checkpoint {
    fn array(&self, name: &str, shape: &[usize]) -> Result<Vec<f64>> {
        let arr = self
            .arrays
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| Error::InvalidInput(format!("checkpoint is missing array {name}")))?;
        let len: usize = shape.iter().product();
        if arr.shape != shape || arr.data.len() != len {
            return Err(Error::InvalidInput(format!(
                "array {name} has shape {:?} ({} values), expected {shape:?}",
                arr.shape,
                arr.data.len()
            )));
        }
        Ok(arr.data.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn toy_arch() -> Architecture {
        Architecture {
            layer_sizes: vec![8, 4, 9],
            activation: Activation::Relu,
        }
    }

    fn random_obs(rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..8).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    /// Per-neuron evaluation written independently of `forward`.
    fn naive_forward(net: &QNetwork, obs: &[f64]) -> Vec<f64> {
        let mut x = obs.to_vec();
        let n = net.layers().len();
        for (k, l) in net.layers().iter().enumerate() {
            let mut y = Vec::new();
            for o in 0..l.out_dim {
                let mut z = l.biases[o];
                for i in 0..l.in_dim {
                    z += l.weights[o * l.in_dim + i] * x[i];
                }
                y.push(if k + 1 < n { z.max(0.0) } else { z });
            }
            x = y;
        }
        x
    }

    #[test]
    fn shape_and_determinism() {
        let arch = Architecture::default();
        let a = QNetwork::init(&arch, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let b = QNetwork::init(&arch, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let q = a.forward(&random_obs(&mut rng));
            assert_eq!(q.len(), 9);
            assert!(q.iter().all(|v| v.is_finite()));
        }
        assert!(a.layers().iter().all(|l| l.biases.iter().all(|&b| b == 0.0)));
        let bound = (6.0f64 / 8.0).sqrt();
        assert!(a.layers()[0].weights.iter().all(|w| w.abs() <= bound));
    }

    #[test]
    fn forward_matches_naive_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let net = QNetwork::init(&Architecture::default(), &mut rng).unwrap();
        for _ in 0..50 {
            let x = random_obs(&mut rng);
            let fast = net.forward(&x);
            let slow = naive_forward(&net, &x);
            assert_eq!(fast, net.forward(&x));
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn linear_head_scales() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let net = QNetwork::init(&toy_arch(), &mut rng).unwrap();
        let mut doubled = net.clone();
        let head = doubled.layers_mut().last_mut().unwrap();
        head.weights.iter_mut().for_each(|w| *w *= 2.0);
        let x = random_obs(&mut rng);
        for (a, b) in net.forward(&x).iter().zip(doubled.forward(&x)) {
            assert!((2.0 * a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn backprop_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for arch in [toy_arch(), Architecture { activation: Activation::Tanh, ..toy_arch() }] {
            let mut net = QNetwork::init(&arch, &mut rng).unwrap();
            // Non-zero biases so every parameter is exercised.
            let mut p = net.parameters();
            p.iter_mut().for_each(|v| *v += rng.random_range(-0.1..0.1));
            net.set_parameters(&p).unwrap();
            let obs: Vec<Vec<f64>> = (0..6).map(|_| random_obs(&mut rng)).collect();
            let batch: Vec<Sample> = obs
                .iter()
                .enumerate()
                .map(|(i, o)| Sample { obs: o, action: i % 9, target: 0.3 * i as f64 - 0.5 })
                .collect();
            let (_, g) = net.loss_and_gradient(&batch);
            let g = g.flatten();
            let h = 1e-6;
            for k in 0..p.len() {
                let mut plus = p.clone();
                plus[k] += h;
                let mut minus = p.clone();
                minus[k] -= h;
                let mut n2 = net.clone();
                n2.set_parameters(&plus).unwrap();
                let lp = n2.loss_and_gradient(&batch).0;
                n2.set_parameters(&minus).unwrap();
                let lm = n2.loss_and_gradient(&batch).0;
                let fd = (lp - lm) / (2.0 * h);
                let denom = g[k].abs().max(fd.abs()).max(1e-6);
                assert!((g[k] - fd).abs() / denom < 1e-4, "param {k}: {} vs {fd}", g[k]);
            }
        }
    }

    #[test]
    fn zero_learning_rate_is_bitwise_no_op() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut net = QNetwork::init(&toy_arch(), &mut rng).unwrap();
        let before = net.clone();
        let x = random_obs(&mut rng);
        net.train_step(&[Sample { obs: &x, action: 2, target: 4.0 }], 0.0, 10.0);
        assert_eq!(net, before);
    }

    #[test]
    fn clipping_bounds_update_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut net = QNetwork::init(&toy_arch(), &mut rng).unwrap();
        let before = net.parameters();
        let x = random_obs(&mut rng);
        net.train_step(&[Sample { obs: &x, action: 0, target: 1e6 }], 1.0, 10.0);
        let moved: f64 = before
            .iter()
            .zip(net.parameters())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(moved <= 10.0 + 1e-9);
    }

    #[test]
    fn checkpoint_round_trip_and_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let net = QNetwork::init(&Architecture::default(), &mut rng).unwrap();
        let ck = net.to_checkpoint();
        assert_eq!(ck.arrays[0].name, "layers.0.weight");
        assert_eq!(ck.arrays[0].shape, vec![64, 8]);
        let back = QNetwork::from_checkpoint(&serde_json::from_str(&serde_json::to_string(&ck).unwrap()).unwrap()).unwrap();
        assert_eq!(back, net);

        let mut broken = ck.clone();
        broken.arrays[1].data.pop();
        assert!(QNetwork::from_checkpoint(&broken).is_err());
        let mut missing = ck;
        missing.arrays.remove(2);
        assert!(QNetwork::from_checkpoint(&missing).is_err());
    }
}
