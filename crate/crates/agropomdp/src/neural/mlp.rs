//! Fully connected feedforward network with rectifier hidden layers and an
//! identity output layer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{matvec, matvec_transpose_add, outer_add, GradientBundle, Parameterized};
use crate::error::{Error, Result};

/// Elementwise nonlinearity applied after a layer's affine map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Identity,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Identity => x,
        }
    }

    /// Derivative expressed in terms of the activation output.
    ///
    /// Works because both activations are invertible on the region that
    /// matters: rectifier output is positive exactly where its input is.
    fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Identity => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Identity => "identity",
        }
    }
}

/// One affine layer: `y = act(W x + b)` with W row-major, shape (out, in).
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub(crate) weights: Vec<f64>,
    pub(crate) bias: Vec<f64>,
    pub(crate) activation: Activation,
    pub(crate) in_dim: usize,
    pub(crate) out_dim: usize,
}

impl Layer {
    pub fn new(
        in_dim: usize,
        out_dim: usize,
        weights: Vec<f64>,
        bias: Vec<f64>,
        activation: Activation,
    ) -> Result<Self> {
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::Shape(format!(
                "layer dimensions must be positive, got {in_dim}x{out_dim}"
            )));
        }
        if weights.len() != in_dim * out_dim {
            return Err(Error::Shape(format!(
                "weight tensor has {} entries, expected {}",
                weights.len(),
                in_dim * out_dim
            )));
        }
        if bias.len() != out_dim {
            return Err(Error::Shape(format!(
                "bias tensor has {} entries, expected {out_dim}",
                bias.len()
            )));
        }
        Ok(Self { weights, bias, activation, in_dim, out_dim })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    fn forward_into(&self, x: &[f64], out: &mut [f64]) {
        matvec(&self.weights, x, out, self.out_dim, self.in_dim);
        for (o, b) in out.iter_mut().zip(&self.bias) {
            *o = self.activation.apply(*o + b);
        }
    }
}

/// Architecture description: input width, hidden widths, output width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlpSpec {
    pub input: usize,
    pub hidden: Vec<usize>,
    pub outputs: usize,
}

impl MlpSpec {
    pub fn new(input: usize, hidden: Vec<usize>, outputs: usize) -> Self {
        Self { input, hidden, outputs }
    }
}

/// Feedforward network. Hidden layers use the rectifier, the output layer is
/// purely affine so it can represent unbounded action values.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpNetwork {
    layers: Vec<Layer>,
}

/// Post-activation values captured during a forward pass; `activations[0]` is
/// the input, `activations[k + 1]` the output of layer k.
#[derive(Debug, Clone)]
pub struct MlpTrace {
    activations: Vec<Vec<f64>>,
}

impl MlpTrace {
    pub fn output(&self) -> &[f64] {
        self.activations.last().expect("trace holds at least the input")
    }
}

impl MlpNetwork {
    /// Seeded scaled-uniform initialization: each weight is drawn uniformly
    /// from `[-b, b]` with `b = sqrt(6 / (fan_in + fan_out))`, biases start
    /// at zero. The same seed always yields the same network.
    pub fn init(spec: &MlpSpec, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::init_with_rng(spec, &mut rng)
    }

    /// As `init`, but drawing from a caller-managed rng so several networks
    /// can share one seeded stream.
    pub fn init_with_rng(spec: &MlpSpec, rng: &mut ChaCha8Rng) -> Result<Self> {
        let mut dims = Vec::with_capacity(spec.hidden.len() + 2);
        dims.push(spec.input);
        dims.extend_from_slice(&spec.hidden);
        dims.push(spec.outputs);
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::Shape("network dimensions must be positive".into()));
        }

        let mut layers = Vec::with_capacity(dims.len() - 1);
        for w in dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let is_output = layers.len() == dims.len() - 2;
            let activation = if is_output { Activation::Identity } else { Activation::Relu };
            let weights = sample_scaled_uniform(rng, fan_in, fan_out);
            layers.push(Layer::new(fan_in, fan_out, weights, vec![0.0; fan_out], activation)?);
        }
        Ok(Self { layers })
    }

    /// Builds a network from explicit layers, checking that widths chain.
    pub fn from_layers(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Shape("network needs at least one layer".into()));
        }
        for pair in layers.windows(2) {
            if pair[0].out_dim != pair[1].in_dim {
                return Err(Error::Shape(format!(
                    "layer widths do not chain: {} then {}",
                    pair[0].out_dim, pair[1].in_dim
                )));
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("nonempty").out_dim
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_trace(input)?.0)
    }

    /// Forward pass that records every layer's output for a later backward
    /// call. Backward cannot be invoked without this trace.
    pub fn forward_trace(&self, input: &[f64]) -> Result<(Vec<f64>, MlpTrace)> {
        if input.len() != self.input_dim() {
            return Err(Error::Shape(format!(
                "input has {} entries, network expects {}",
                input.len(),
                self.input_dim()
            )));
        }
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(input.to_vec());
        for layer in &self.layers {
            let mut out = vec![0.0; layer.out_dim];
            layer.forward_into(activations.last().expect("nonempty"), &mut out);
            activations.push(out);
        }
        let output = activations.last().expect("nonempty").clone();
        Ok((output, MlpTrace { activations }))
    }

    /// Backpropagation. `grad_out` is dL/d(output); returns parameter
    /// gradients in tensor order plus dL/d(input).
    pub fn backward(&self, trace: &MlpTrace, grad_out: &[f64]) -> Result<(GradientBundle, Vec<f64>)> {
        if trace.activations.len() != self.layers.len() + 1 {
            return Err(Error::Shape("trace does not match network depth".into()));
        }
        if grad_out.len() != self.output_dim() {
            return Err(Error::Shape(format!(
                "output gradient has {} entries, expected {}",
                grad_out.len(),
                self.output_dim()
            )));
        }

        let mut grads = GradientBundle::zeros_like(self);
        // delta = dL/d(pre-activation) of the current layer.
        let mut delta: Vec<f64> = grad_out
            .iter()
            .zip(trace.activations.last().expect("nonempty"))
            .map(|(g, y)| {
                g * self.layers.last().expect("nonempty").activation.derivative_from_output(*y)
            })
            .collect();

        for (k, layer) in self.layers.iter().enumerate().rev() {
            let layer_input = &trace.activations[k];
            outer_add(grads.tensor_mut(2 * k), &delta, layer_input);
            for (g, d) in grads.tensor_mut(2 * k + 1).iter_mut().zip(&delta) {
                *g += d;
            }

            let mut upstream = vec![0.0; layer.in_dim];
            matvec_transpose_add(&layer.weights, &delta, &mut upstream, layer.out_dim, layer.in_dim);
            if k > 0 {
                let prev_act = self.layers[k - 1].activation;
                for (u, y) in upstream.iter_mut().zip(layer_input) {
                    *u *= prev_act.derivative_from_output(*y);
                }
            }
            delta = upstream;
        }
        Ok((grads, delta))
    }
}

impl Parameterized for MlpNetwork {
    fn tensor_count(&self) -> usize {
        self.layers.len() * 2
    }

    fn tensor(&self, idx: usize) -> &[f64] {
        let layer = &self.layers[idx / 2];
        if idx % 2 == 0 {
            &layer.weights
        } else {
            &layer.bias
        }
    }

    fn tensor_mut(&mut self, idx: usize) -> &mut [f64] {
        let layer = &mut self.layers[idx / 2];
        if idx % 2 == 0 {
            &mut layer.weights
        } else {
            &mut layer.bias
        }
    }
}

pub(crate) fn sample_scaled_uniform(rng: &mut ChaCha8Rng, fan_in: usize, fan_out: usize) -> Vec<f64> {
    let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
    (0..fan_in * fan_out).map(|_| rng.random_range(-bound..bound)).collect()
}
