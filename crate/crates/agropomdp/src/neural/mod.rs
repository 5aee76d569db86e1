//! Dense neural network machinery: multilayer perceptron, GRU cell with
//! backpropagation through time, Adam optimizer, and a finite-difference
//! gradient oracle for testing.
//!
//! Everything is 64-bit and dependency-free: parameters are flat row-major
//! `Vec<f64>` tensors, forward passes are pure functions, and backward passes
//! consume an explicit trace produced by the matching forward call.

mod adam;
mod gradcheck;
mod gru;
mod mlp;
mod model_io;

pub use adam::{AdamHyper, AdamState};
pub use gradcheck::{finite_diff_grad, max_relative_error, relative_error};
pub use gru::{GruCell, GruTrace, RecurrentQNetwork, RecurrentSpec, RecurrentTrace};
pub use mlp::{Activation, Layer, MlpNetwork, MlpSpec, MlpTrace};
pub use model_io::{decode_model, encode_model, load_model, save_model, QNetworkModel};

use crate::error::{Error, Result};

/// Access to a network's parameter tensors in a fixed declaration order.
///
/// The order is load-bearing: gradients, Adam moments, soft updates, and the
/// model file payload all follow it.
pub trait Parameterized {
    fn tensor_count(&self) -> usize;
    fn tensor(&self, idx: usize) -> &[f64];
    fn tensor_mut(&mut self, idx: usize) -> &mut [f64];

    fn parameter_count(&self) -> usize {
        (0..self.tensor_count()).map(|i| self.tensor(i).len()).sum()
    }
}

/// One gradient tensor per parameter tensor, same shapes, same order.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientBundle {
    tensors: Vec<Vec<f64>>,
}

impl GradientBundle {
    pub fn zeros_like<P: Parameterized>(params: &P) -> Self {
        let tensors = (0..params.tensor_count())
            .map(|i| vec![0.0; params.tensor(i).len()])
            .collect();
        Self { tensors }
    }

    pub fn from_tensors(tensors: Vec<Vec<f64>>) -> Self {
        Self { tensors }
    }

    pub fn tensor_count(&self) -> usize {
        self.tensors.len()
    }

    pub fn tensor(&self, idx: usize) -> &[f64] {
        &self.tensors[idx]
    }

    pub fn tensor_mut(&mut self, idx: usize) -> &mut [f64] {
        &mut self.tensors[idx]
    }

    /// Accumulate `other * scale` into `self`.
    pub fn add_scaled(&mut self, other: &GradientBundle, scale: f64) -> Result<()> {
        congruent(self.tensors.len(), other.tensors.len())?;
        for (mine, theirs) in self.tensors.iter_mut().zip(&other.tensors) {
            congruent(mine.len(), theirs.len())?;
            for (m, t) in mine.iter_mut().zip(theirs) {
                *m += t * scale;
            }
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: f64) {
        for t in &mut self.tensors {
            for v in t.iter_mut() {
                *v *= factor;
            }
        }
    }

    /// Largest absolute entry across all tensors.
    pub fn max_abs(&self) -> f64 {
        self.tensors
            .iter()
            .flat_map(|t| t.iter())
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Checks shape congruence against a parameter set.
    pub fn check_shapes<P: Parameterized>(&self, params: &P) -> Result<()> {
        congruent(self.tensors.len(), params.tensor_count())?;
        for (i, t) in self.tensors.iter().enumerate() {
            congruent(t.len(), params.tensor(i).len())?;
        }
        Ok(())
    }
}

fn congruent(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Shape(format!("size mismatch: {a} vs {b}")));
    }
    Ok(())
}

/// Soft update `target = tau * source + (1 - tau) * target`, elementwise.
pub fn soft_update<P: Parameterized>(target: &mut P, source: &P, tau: f64) -> Result<()> {
    if !(0.0 < tau && tau <= 1.0) {
        return Err(Error::Config(format!("tau must be in (0, 1], got {tau}")));
    }
    congruent(target.tensor_count(), source.tensor_count())?;
    for i in 0..target.tensor_count() {
        congruent(target.tensor(i).len(), source.tensor(i).len())?;
        let src = source.tensor(i).to_vec();
        for (t, s) in target.tensor_mut(i).iter_mut().zip(src) {
            *t = tau * s + (1.0 - tau) * *t;
        }
    }
    Ok(())
}

/// y = M x for a row-major matrix with shape (rows, cols).
pub(crate) fn matvec(matrix: &[f64], x: &[f64], out: &mut [f64], rows: usize, cols: usize) {
    debug_assert_eq!(matrix.len(), rows * cols);
    debug_assert_eq!(x.len(), cols);
    debug_assert_eq!(out.len(), rows);
    for (i, o) in out.iter_mut().enumerate() {
        let row = &matrix[i * cols..(i + 1) * cols];
        *o = row.iter().zip(x).map(|(m, v)| m * v).sum();
    }
}

/// y += M^T d for a row-major matrix with shape (rows, cols); y has length cols.
pub(crate) fn matvec_transpose_add(matrix: &[f64], d: &[f64], out: &mut [f64], rows: usize, cols: usize) {
    debug_assert_eq!(matrix.len(), rows * cols);
    debug_assert_eq!(d.len(), rows);
    debug_assert_eq!(out.len(), cols);
    for (i, di) in d.iter().enumerate() {
        let row = &matrix[i * cols..(i + 1) * cols];
        for (o, m) in out.iter_mut().zip(row) {
            *o += m * di;
        }
    }
}

/// grad += outer(d, x) accumulated into a row-major (rows, cols) tensor.
pub(crate) fn outer_add(grad: &mut [f64], d: &[f64], x: &[f64]) {
    let cols = x.len();
    debug_assert_eq!(grad.len(), d.len() * cols);
    for (i, di) in d.iter().enumerate() {
        let row = &mut grad[i * cols..(i + 1) * cols];
        for (g, xv) in row.iter_mut().zip(x) {
            *g += di * xv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::mlp::{MlpNetwork, MlpSpec};

    #[test]
    fn soft_update_tau_one_copies_source() {
        let spec = MlpSpec::new(2, vec![3], 2);
        let source = MlpNetwork::init(&spec, 1).unwrap();
        let mut target = MlpNetwork::init(&spec, 2).unwrap();
        soft_update(&mut target, &source, 1.0).unwrap();
        for i in 0..source.tensor_count() {
            assert_eq!(target.tensor(i), source.tensor(i));
        }
    }

    #[test]
    fn soft_update_scalar_midpoint() {
        let spec = MlpSpec::new(1, vec![], 1);
        let mut target = MlpNetwork::init(&spec, 1).unwrap();
        let mut source = MlpNetwork::init(&spec, 1).unwrap();
        target.tensor_mut(0)[0] = 0.0;
        source.tensor_mut(0)[0] = 2.0;
        soft_update(&mut target, &source, 0.5).unwrap();
        assert_eq!(target.tensor(0)[0], 1.0);
    }

    #[test]
    fn soft_update_contracts_distance_by_one_minus_tau() {
        let spec = MlpSpec::new(2, vec![4], 3);
        let source = MlpNetwork::init(&spec, 10).unwrap();
        let mut target = MlpNetwork::init(&spec, 11).unwrap();
        let tau = 0.25;

        let dist = |t: &MlpNetwork| -> f64 {
            (0..t.tensor_count())
                .flat_map(|i| {
                    t.tensor(i)
                        .iter()
                        .zip(source.tensor(i))
                        .map(|(a, b)| (a - b).abs())
                        .collect::<Vec<_>>()
                })
                .fold(0.0f64, f64::max)
        };

        let before = dist(&target);
        soft_update(&mut target, &source, tau).unwrap();
        let after = dist(&target);
        assert!((after - (1.0 - tau) * before).abs() < 1e-12);
    }

    #[test]
    fn soft_update_rejects_mismatched_architectures() {
        let source = MlpNetwork::init(&MlpSpec::new(2, vec![3], 2), 1).unwrap();
        let mut target = MlpNetwork::init(&MlpSpec::new(2, vec![4], 2), 1).unwrap();
        assert!(soft_update(&mut target, &source, 0.5).is_err());
    }

    #[test]
    fn soft_update_rejects_tau_out_of_range() {
        let spec = MlpSpec::new(1, vec![], 1);
        let source = MlpNetwork::init(&spec, 1).unwrap();
        let mut target = MlpNetwork::init(&spec, 2).unwrap();
        assert!(soft_update(&mut target, &source, 0.0).is_err());
        assert!(soft_update(&mut target, &source, 1.5).is_err());
    }
}
