//! Finite-difference gradient estimation, used to cross-check the analytic
//! backward passes.

use super::{GradientBundle, Parameterized};
use crate::error::Result;

/// Central-difference gradient of `loss` with respect to every parameter:
/// (L(p + h) - L(p - h)) / (2h), one probe pair per entry. Parameters are
/// restored exactly after each probe.
pub fn finite_diff_grad<P, F>(params: &mut P, mut loss: F, h: f64) -> Result<GradientBundle>
where
    P: Parameterized,
    F: FnMut(&P) -> Result<f64>,
{
    let mut grads = GradientBundle::zeros_like(params);
    for i in 0..params.tensor_count() {
        for j in 0..params.tensor(i).len() {
            let orig = params.tensor(i)[j];
            params.tensor_mut(i)[j] = orig + h;
            let plus = loss(params)?;
            params.tensor_mut(i)[j] = orig - h;
            let minus = loss(params)?;
            params.tensor_mut(i)[j] = orig;
            grads.tensor_mut(i)[j] = (plus - minus) / (2.0 * h);
        }
    }
    Ok(grads)
}

/// |a - b| / max(|a|, |b|, floor): symmetric relative error with a floor so
/// near-zero pairs compare absolutely.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-4)
}

/// Worst relative error across two congruent gradient bundles.
pub fn max_relative_error(a: &GradientBundle, b: &GradientBundle) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.tensor_count() {
        for (x, y) in a.tensor(i).iter().zip(b.tensor(i)) {
            worst = worst.max(relative_error(*x, *y));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::{
        GruCell, MlpNetwork, MlpSpec, Parameterized, RecurrentQNetwork, RecurrentSpec,
    };

    const H: f64 = 1e-5;
    const TOL: f64 = 1e-4;

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
    fn quadratic_gradient_is_recovered() {
        let mut w = Scalar(vec![1.0, -2.0, 0.5]);
        let targets = [3.0, 0.0, -1.0];
        let grads = finite_diff_grad(
            &mut w,
            |p| {
                Ok(p.tensor(0)
                    .iter()
                    .zip(&targets)
                    .map(|(v, t)| (v - t) * (v - t))
                    .sum())
            },
            H,
        )
        .unwrap();
        // Analytic: 2 (w - t).
        let want = [2.0 * (1.0 - 3.0), 2.0 * (-2.0), 2.0 * (0.5 + 1.0)];
        for (g, w) in grads.tensor(0).iter().zip(&want) {
            assert!(relative_error(*g, *w) < 1e-8, "got {g}, want {w}");
        }
        // Probing must leave the parameters untouched.
        assert_eq!(w.0, vec![1.0, -2.0, 0.5]);
    }

    fn squared_error(out: &[f64], target: &[f64]) -> f64 {
        out.iter().zip(target).map(|(o, t)| 0.5 * (o - t) * (o - t)).sum()
    }

    #[test]
    fn mlp_backward_matches_finite_differences() {
        let spec = MlpSpec::new(3, vec![6, 5], 2);
        let mut net = MlpNetwork::init(&spec, 17).unwrap();
        let input = [0.4, -0.9, 1.3];
        let target = [0.7, -0.2];

        let (out, trace) = net.forward_trace(&input).unwrap();
        let grad_out: Vec<f64> = out.iter().zip(&target).map(|(o, t)| o - t).collect();
        let (analytic, _) = net.backward(&trace, &grad_out).unwrap();

        let numeric = finite_diff_grad(
            &mut net,
            |n| Ok(squared_error(&n.forward(&input)?, &target)),
            H,
        )
        .unwrap();

        let err = max_relative_error(&analytic, &numeric);
        assert!(err < TOL, "worst relative error {err}");
    }

    #[test]
    fn gru_bptt_matches_finite_differences() {
        let spec = RecurrentSpec { input: 2, gru_hidden: 4, head_hidden: vec![5], outputs: 3 };
        let mut net = RecurrentQNetwork::init(&spec, 23).unwrap();
        let window = vec![
            vec![0.3, -0.1],
            vec![-0.7, 0.9],
            vec![0.2, 0.2],
            vec![1.1, -0.6],
            vec![0.0, 0.4],
        ];
        let target = [0.5, -0.5, 0.1];

        let (out, trace) = net.forward_window_trace(&window).unwrap();
        let grad_out: Vec<f64> = out.iter().zip(&target).map(|(o, t)| o - t).collect();
        let analytic = net.backward(&trace, &grad_out).unwrap();

        let numeric = finite_diff_grad(
            &mut net,
            |n| Ok(squared_error(&n.forward_window(&window)?, &target)),
            H,
        )
        .unwrap();

        let err = max_relative_error(&analytic, &numeric);
        assert!(err < TOL, "worst relative error {err}");
    }

    #[test]
    fn bare_cell_bptt_matches_finite_differences() {
        // Loss reads the final hidden state directly, no head in between.
        let mut cell = GruCell::init(2, 3, 31).unwrap();
        let window = vec![vec![0.5, -0.5], vec![1.0, 0.25], vec![-0.75, 0.1]];
        let coeffs = [1.0, -2.0, 0.5];

        let loss = |c: &GruCell| -> crate::error::Result<f64> {
            let trace = c.forward_window(&window)?;
            Ok(trace
                .final_hidden()
                .iter()
                .zip(&coeffs)
                .map(|(h, k)| k * h)
                .sum())
        };

        let trace = cell.forward_window(&window).unwrap();
        let mut analytic = crate::neural::GradientBundle::zeros_like(&cell);
        cell.backward(&trace, &coeffs, &mut analytic).unwrap();

        let numeric = finite_diff_grad(&mut cell, loss, H).unwrap();
        let err = max_relative_error(&analytic, &numeric);
        assert!(err < TOL, "worst relative error {err}");
    }
}
