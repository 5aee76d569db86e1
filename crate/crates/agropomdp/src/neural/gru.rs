//! Gated recurrent unit over fixed-length observation windows, with full
//! backpropagation through time.
//!
//! Update equations, all vectors of the hidden width:
//!   z  = sigmoid(W_z x + U_z h + b_z)
//!   r  = sigmoid(W_r x + U_r h + b_r)
//!   c  = tanh(W_h x + U_h (r . h) + b_h)
//!   h' = (1 - z) . h + z . c
//! where `.` is elementwise product. With h0 = 0 every hidden state stays in
//! (-1, 1) because h' is a convex combination of h and a tanh output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::mlp::{sample_scaled_uniform, MlpNetwork, MlpSpec, MlpTrace};
use super::{matvec, matvec_transpose_add, outer_add, GradientBundle, Parameterized};
use crate::error::{Error, Result};

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Single GRU cell. Tensor order: w_z, u_z, b_z, w_r, u_r, b_r, w_h, u_h, b_h.
/// W matrices are (hidden, input) row-major, U matrices (hidden, hidden).
#[derive(Debug, Clone, PartialEq)]
pub struct GruCell {
    input_dim: usize,
    hidden_dim: usize,
    w_z: Vec<f64>,
    u_z: Vec<f64>,
    b_z: Vec<f64>,
    w_r: Vec<f64>,
    u_r: Vec<f64>,
    b_r: Vec<f64>,
    w_h: Vec<f64>,
    u_h: Vec<f64>,
    b_h: Vec<f64>,
}

/// Per-step values needed to run the backward pass.
#[derive(Debug, Clone)]
struct StepTrace {
    x: Vec<f64>,
    h_prev: Vec<f64>,
    z: Vec<f64>,
    r: Vec<f64>,
    c: Vec<f64>,
    rh: Vec<f64>,
}

/// Trace of a whole window unroll, oldest step first.
#[derive(Debug, Clone)]
pub struct GruTrace {
    steps: Vec<StepTrace>,
    final_hidden: Vec<f64>,
}

impl GruTrace {
    pub fn final_hidden(&self) -> &[f64] {
        &self.final_hidden
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl GruCell {
    pub fn init(input_dim: usize, hidden_dim: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::init_with_rng(input_dim, hidden_dim, &mut rng)
    }

    /// Scaled-uniform weights, zero biases. Input-to-hidden matrices use the
    /// (input, hidden) fan pair, hidden-to-hidden use (hidden, hidden).
    pub fn init_with_rng(input_dim: usize, hidden_dim: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        if input_dim == 0 || hidden_dim == 0 {
            return Err(Error::Shape(format!(
                "cell dimensions must be positive, got {input_dim}x{hidden_dim}"
            )));
        }
        let w_z = sample_scaled_uniform(rng, input_dim, hidden_dim);
        let u_z = sample_scaled_uniform(rng, hidden_dim, hidden_dim);
        let w_r = sample_scaled_uniform(rng, input_dim, hidden_dim);
        let u_r = sample_scaled_uniform(rng, hidden_dim, hidden_dim);
        let w_h = sample_scaled_uniform(rng, input_dim, hidden_dim);
        let u_h = sample_scaled_uniform(rng, hidden_dim, hidden_dim);
        let zeros = vec![0.0; hidden_dim];
        Ok(Self {
            input_dim,
            hidden_dim,
            w_z,
            u_z,
            b_z: zeros.clone(),
            w_r,
            u_r,
            b_r: zeros.clone(),
            w_h,
            u_h,
            b_h: zeros,
        })
    }

    pub fn from_tensors(
        input_dim: usize,
        hidden_dim: usize,
        tensors: [Vec<f64>; 9],
    ) -> Result<Self> {
        let [w_z, u_z, b_z, w_r, u_r, b_r, w_h, u_h, b_h] = tensors;
        let check = |t: &Vec<f64>, want: usize, name: &str| -> Result<()> {
            if t.len() != want {
                return Err(Error::Shape(format!(
                    "{name} has {} entries, expected {want}",
                    t.len()
                )));
            }
            Ok(())
        };
        let wi = hidden_dim * input_dim;
        let hh = hidden_dim * hidden_dim;
        check(&w_z, wi, "w_z")?;
        check(&u_z, hh, "u_z")?;
        check(&b_z, hidden_dim, "b_z")?;
        check(&w_r, wi, "w_r")?;
        check(&u_r, hh, "u_r")?;
        check(&b_r, hidden_dim, "b_r")?;
        check(&w_h, wi, "w_h")?;
        check(&u_h, hh, "u_h")?;
        check(&b_h, hidden_dim, "b_h")?;
        Ok(Self { input_dim, hidden_dim, w_z, u_z, b_z, w_r, u_r, b_r, w_h, u_h, b_h })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden_dim
    }

    /// One recurrence step. `h` is the previous hidden state.
    pub fn step(&self, x: &[f64], h: &[f64]) -> Result<Vec<f64>> {
        Ok(self.step_traced(x, h)?.h_next())
    }

    fn step_traced(&self, x: &[f64], h: &[f64]) -> Result<StepTrace> {
        if x.len() != self.input_dim {
            return Err(Error::Shape(format!(
                "step input has {} entries, cell expects {}",
                x.len(),
                self.input_dim
            )));
        }
        if h.len() != self.hidden_dim {
            return Err(Error::Shape(format!(
                "hidden state has {} entries, cell expects {}",
                h.len(),
                self.hidden_dim
            )));
        }
        let n = self.hidden_dim;
        let gate = |w: &[f64], u: &[f64], b: &[f64], uin: &[f64]| -> Vec<f64> {
            let mut a = vec![0.0; n];
            matvec(w, x, &mut a, n, self.input_dim);
            let mut rec = vec![0.0; n];
            matvec(u, uin, &mut rec, n, n);
            for ((av, rv), bv) in a.iter_mut().zip(&rec).zip(b) {
                *av += rv + bv;
            }
            a
        };

        let z: Vec<f64> = gate(&self.w_z, &self.u_z, &self.b_z, h).into_iter().map(sigmoid).collect();
        let r: Vec<f64> = gate(&self.w_r, &self.u_r, &self.b_r, h).into_iter().map(sigmoid).collect();
        let rh: Vec<f64> = r.iter().zip(h).map(|(rv, hv)| rv * hv).collect();
        let c: Vec<f64> = gate(&self.w_h, &self.u_h, &self.b_h, &rh)
            .into_iter()
            .map(f64::tanh)
            .collect();
        Ok(StepTrace { x: x.to_vec(), h_prev: h.to_vec(), z, r, c, rh })
    }

    /// Unrolls the cell over a window, oldest observation first, starting
    /// from a zero hidden state.
    pub fn forward_window<S: AsRef<[f64]>>(&self, window: &[S]) -> Result<GruTrace> {
        if window.is_empty() {
            return Err(Error::Shape("observation window is empty".into()));
        }
        let mut h = vec![0.0; self.hidden_dim];
        let mut steps = Vec::with_capacity(window.len());
        for obs in window {
            let step = self.step_traced(obs.as_ref(), &h)?;
            h = step.h_next();
            steps.push(step);
        }
        Ok(GruTrace { steps, final_hidden: h })
    }

    /// Backpropagation through time. `grad_h` is dL/d(final hidden state);
    /// gradients accumulate into `grads` (tensor order as in `Parameterized`).
    pub fn backward(&self, trace: &GruTrace, grad_h: &[f64], grads: &mut GradientBundle) -> Result<()> {
        if grad_h.len() != self.hidden_dim {
            return Err(Error::Shape("hidden gradient width mismatch".into()));
        }
        let n = self.hidden_dim;
        let mut g = grad_h.to_vec();
        for s in trace.steps.iter().rev() {
            // Split dL/dh' into the three paths it feeds: the convex mix, the
            // candidate, and the gates.
            let mut da_c = vec![0.0; n];
            let mut da_z = vec![0.0; n];
            let mut dh_prev = vec![0.0; n];
            for i in 0..n {
                let dz = g[i] * (s.c[i] - s.h_prev[i]);
                da_z[i] = dz * s.z[i] * (1.0 - s.z[i]);
                let dc = g[i] * s.z[i];
                da_c[i] = dc * (1.0 - s.c[i] * s.c[i]);
                dh_prev[i] = g[i] * (1.0 - s.z[i]);
            }

            let mut drh = vec![0.0; n];
            matvec_transpose_add(&self.u_h, &da_c, &mut drh, n, n);
            let mut da_r = vec![0.0; n];
            for i in 0..n {
                let dr = drh[i] * s.h_prev[i];
                da_r[i] = dr * s.r[i] * (1.0 - s.r[i]);
                dh_prev[i] += drh[i] * s.r[i];
            }

            outer_add(grads.tensor_mut(0), &da_z, &s.x);
            outer_add(grads.tensor_mut(1), &da_z, &s.h_prev);
            accumulate(grads.tensor_mut(2), &da_z);
            outer_add(grads.tensor_mut(3), &da_r, &s.x);
            outer_add(grads.tensor_mut(4), &da_r, &s.h_prev);
            accumulate(grads.tensor_mut(5), &da_r);
            outer_add(grads.tensor_mut(6), &da_c, &s.x);
            outer_add(grads.tensor_mut(7), &da_c, &s.rh);
            accumulate(grads.tensor_mut(8), &da_c);

            matvec_transpose_add(&self.u_z, &da_z, &mut dh_prev, n, n);
            matvec_transpose_add(&self.u_r, &da_r, &mut dh_prev, n, n);
            g = dh_prev;
        }
        Ok(())
    }
}

impl StepTrace {
    fn h_next(&self) -> Vec<f64> {
        self.z
            .iter()
            .zip(&self.c)
            .zip(&self.h_prev)
            .map(|((z, c), h)| (1.0 - z) * h + z * c)
            .collect()
    }
}

fn accumulate(grad: &mut [f64], d: &[f64]) {
    for (g, v) in grad.iter_mut().zip(d) {
        *g += v;
    }
}

impl Parameterized for GruCell {
    fn tensor_count(&self) -> usize {
        9
    }

    fn tensor(&self, idx: usize) -> &[f64] {
        match idx {
            0 => &self.w_z,
            1 => &self.u_z,
            2 => &self.b_z,
            3 => &self.w_r,
            4 => &self.u_r,
            5 => &self.b_r,
            6 => &self.w_h,
            7 => &self.u_h,
            8 => &self.b_h,
            _ => panic!("tensor index {idx} out of range for GRU cell"),
        }
    }

    fn tensor_mut(&mut self, idx: usize) -> &mut [f64] {
        match idx {
            0 => &mut self.w_z,
            1 => &mut self.u_z,
            2 => &mut self.b_z,
            3 => &mut self.w_r,
            4 => &mut self.u_r,
            5 => &mut self.b_r,
            6 => &mut self.w_h,
            7 => &mut self.u_h,
            8 => &mut self.b_h,
            _ => panic!("tensor index {idx} out of range for GRU cell"),
        }
    }
}

/// Architecture of a recurrent action-value network: GRU encoder over the
/// observation window, feedforward head on the final hidden state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrentSpec {
    pub input: usize,
    pub gru_hidden: usize,
    pub head_hidden: Vec<usize>,
    pub outputs: usize,
}

/// GRU encoder + MLP head. Tensor order: the cell's nine tensors, then the
/// head's weight/bias pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrentQNetwork {
    gru: GruCell,
    head: MlpNetwork,
}

#[derive(Debug, Clone)]
pub struct RecurrentTrace {
    gru: GruTrace,
    head: MlpTrace,
}

impl RecurrentQNetwork {
    pub fn init(spec: &RecurrentSpec, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gru = GruCell::init_with_rng(spec.input, spec.gru_hidden, &mut rng)?;
        let head_spec = MlpSpec::new(spec.gru_hidden, spec.head_hidden.clone(), spec.outputs);
        let head = MlpNetwork::init_with_rng(&head_spec, &mut rng)?;
        Ok(Self { gru, head })
    }

    pub fn from_parts(gru: GruCell, head: MlpNetwork) -> Result<Self> {
        if head.input_dim() != gru.hidden_dim() {
            return Err(Error::Shape(format!(
                "head expects {} inputs but the cell produces {}",
                head.input_dim(),
                gru.hidden_dim()
            )));
        }
        Ok(Self { gru, head })
    }

    pub fn gru(&self) -> &GruCell {
        &self.gru
    }

    pub fn head(&self) -> &MlpNetwork {
        &self.head
    }

    pub fn input_dim(&self) -> usize {
        self.gru.input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.head.output_dim()
    }

    pub fn forward_window<S: AsRef<[f64]>>(&self, window: &[S]) -> Result<Vec<f64>> {
        Ok(self.forward_window_trace(window)?.0)
    }

    pub fn forward_window_trace<S: AsRef<[f64]>>(
        &self,
        window: &[S],
    ) -> Result<(Vec<f64>, RecurrentTrace)> {
        let gru_trace = self.gru.forward_window(window)?;
        let (out, head_trace) = self.head.forward_trace(gru_trace.final_hidden())?;
        Ok((out, RecurrentTrace { gru: gru_trace, head: head_trace }))
    }

    /// Full backward pass: head gradients plus BPTT into the cell.
    pub fn backward(&self, trace: &RecurrentTrace, grad_out: &[f64]) -> Result<GradientBundle> {
        let (head_grads, grad_hidden) = self.head.backward(&trace.head, grad_out)?;
        let mut grads = GradientBundle::zeros_like(self);
        self.gru.backward(&trace.gru, &grad_hidden, &mut grads)?;
        for i in 0..head_grads.tensor_count() {
            let dst = grads.tensor_mut(9 + i);
            dst.copy_from_slice(head_grads.tensor(i));
        }
        Ok(grads)
    }
}

impl Parameterized for RecurrentQNetwork {
    fn tensor_count(&self) -> usize {
        9 + self.head.tensor_count()
    }

    fn tensor(&self, idx: usize) -> &[f64] {
        if idx < 9 {
            self.gru.tensor(idx)
        } else {
            self.head.tensor(idx - 9)
        }
    }

    fn tensor_mut(&mut self, idx: usize) -> &mut [f64] {
        if idx < 9 {
            self.gru.tensor_mut(idx)
        } else {
            self.head.tensor_mut(idx - 9)
        }
    }
}
