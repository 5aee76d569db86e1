//! Adam optimizer with bias-corrected first and second moment estimates.

use super::{GradientBundle, Parameterized};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamHyper {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamHyper {
    fn default() -> Self {
        Self { learning_rate: 1e-5, beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

impl AdamHyper {
    pub fn with_learning_rate(learning_rate: f64) -> Self {
        Self { learning_rate, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0 <= b && b < 1.0) {
                return Err(Error::Config(format!("{name} must be in [0, 1), got {b}")));
            }
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        Ok(())
    }
}

/// Per-parameter moment estimates plus the shared step counter.
#[derive(Debug, Clone)]
pub struct AdamState {
    hyper: AdamHyper,
    m: GradientBundle,
    v: GradientBundle,
    t: u64,
}

impl AdamState {
    pub fn new<P: Parameterized>(params: &P, hyper: AdamHyper) -> Result<Self> {
        hyper.validate()?;
        Ok(Self {
            hyper,
            m: GradientBundle::zeros_like(params),
            v: GradientBundle::zeros_like(params),
            t: 0,
        })
    }

    pub fn hyper(&self) -> AdamHyper {
        self.hyper
    }

    pub fn steps_taken(&self) -> u64 {
        self.t
    }

    /// One update: moments decay toward the gradient and its square, both are
    /// bias-corrected by the step count, and parameters move against the
    /// corrected ratio.
    pub fn step<P: Parameterized>(&mut self, params: &mut P, grads: &GradientBundle) -> Result<()> {
        grads.check_shapes(params)?;
        self.m.check_shapes(params)?;
        let AdamHyper { learning_rate, beta1, beta2, epsilon } = self.hyper;
        self.t += 1;
        let mc = 1.0 - beta1.powi(self.t as i32);
        let vc = 1.0 - beta2.powi(self.t as i32);

        for i in 0..params.tensor_count() {
            let p = params.tensor_mut(i);
            let m = self.m.tensor_mut(i);
            let v = self.v.tensor_mut(i);
            let g = grads.tensor(i);
            for j in 0..p.len() {
                m[j] = beta1 * m[j] + (1.0 - beta1) * g[j];
                v[j] = beta2 * v[j] + (1.0 - beta2) * g[j] * g[j];
                let m_hat = m[j] / mc;
                let v_hat = v[j] / vc;
                p[j] -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimal parameter holder for scalar optimization tests.
    struct Scalar(Vec<f64>);

    impl Parameterized for Scalar {
        fn tensor_count(&self) -> usize {
            1
        }
        fn tensor(&self, _idx: usize) -> &[f64] {
            &self.0
        }
        fn tensor_mut(&mut self, _idx: usize) -> &mut [f64] {
            &mut self.0
        }
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        // Bias correction makes the very first update lr * g / (|g| + eps),
        // which for a large gradient is the learning rate to within ulps.
        let mut w = Scalar(vec![0.0]);
        let hyper = AdamHyper::with_learning_rate(0.001);
        let mut opt = AdamState::new(&w, hyper).unwrap();
        let grads = GradientBundle::from_tensors(vec![vec![100.0]]);
        opt.step(&mut w, &grads).unwrap();
        assert!((w.0[0] + 0.001).abs() < 1e-9, "got {}", w.0[0]);
        assert_eq!(opt.steps_taken(), 1);
    }

    #[test]
    fn quadratic_bowl_converges_within_200_steps() {
        // Minimize (w - 2)^2 from w = 0 with lr 0.1.
        let mut w = Scalar(vec![0.0]);
        let mut opt = AdamState::new(&w, AdamHyper::with_learning_rate(0.1)).unwrap();
        for _ in 0..200 {
            let g = 2.0 * (w.0[0] - 2.0);
            let grads = GradientBundle::from_tensors(vec![vec![g]]);
            opt.step(&mut w, &grads).unwrap();
        }
        assert!(
            (w.0[0] - 2.0).abs() < 1e-3,
            "did not reach the minimum, stopped at {}",
            w.0[0]
        );
    }

    #[test]
    fn zero_gradient_leaves_parameters_fixed() {
        let mut w = Scalar(vec![1.5, -0.5]);
        let mut opt = AdamState::new(&w, AdamHyper::default()).unwrap();
        let grads = GradientBundle::from_tensors(vec![vec![0.0, 0.0]]);
        opt.step(&mut w, &grads).unwrap();
        assert_eq!(w.0, vec![1.5, -0.5]);
    }

    #[test]
    fn updates_are_deterministic() {
        let run = || {
            let mut w = Scalar(vec![0.3, -0.7, 1.1]);
            let mut opt = AdamState::new(&w, AdamHyper::with_learning_rate(0.01)).unwrap();
            for k in 0..50 {
                let g: Vec<f64> = w.0.iter().map(|v| v.sin() + k as f64 * 0.01).collect();
                opt.step(&mut w, &GradientBundle::from_tensors(vec![g])).unwrap();
            }
            w.0
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn mismatched_gradient_shape_is_rejected() {
        let mut w = Scalar(vec![0.0, 0.0]);
        let mut opt = AdamState::new(&w, AdamHyper::default()).unwrap();
        let grads = GradientBundle::from_tensors(vec![vec![1.0]]);
        assert!(opt.step(&mut w, &grads).is_err());
    }

    #[test]
    fn invalid_hyperparameters_are_rejected() {
        let w = Scalar(vec![0.0]);
        for hyper in [
            AdamHyper { learning_rate: 0.0, ..Default::default() },
            AdamHyper { beta1: 1.0, ..Default::default() },
            AdamHyper { beta2: -0.1, ..Default::default() },
            AdamHyper { epsilon: 0.0, ..Default::default() },
        ] {
            assert!(AdamState::new(&w, hyper).is_err(), "{hyper:?} accepted");
        }
    }
}
