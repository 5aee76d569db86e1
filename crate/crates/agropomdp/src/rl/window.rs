//! Fixed-length observation windows: the chronological context a recurrent
//! agent conditions on. Feedforward agents use degenerate windows of length
//! one, which keeps the experience plumbing uniform.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Last `len` observations, oldest first. At episode start the window is
/// padded by repeating the first observation.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationWindow {
    len: usize,
    dim: usize,
    obs: VecDeque<Vec<f64>>,
}

impl ObservationWindow {
    pub fn new(len: usize, first_obs: Vec<f64>) -> Result<Self> {
        if len == 0 {
            return Err(Error::Shape("window length must be at least 1".into()));
        }
        if first_obs.is_empty() {
            return Err(Error::Shape("observations must be non-empty vectors".into()));
        }
        let dim = first_obs.len();
        let mut obs = VecDeque::with_capacity(len);
        for _ in 0..len {
            obs.push_back(first_obs.clone());
        }
        Ok(Self { len, dim, obs })
    }

    /// Appends the newest observation, dropping the oldest.
    pub fn push(&mut self, observation: Vec<f64>) -> Result<()> {
        if observation.len() != self.dim {
            return Err(Error::Shape(format!(
                "observation has {} entries, window expects {}",
                observation.len(),
                self.dim
            )));
        }
        self.obs.pop_front();
        self.obs.push_back(observation);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Owned copy, oldest first; the shape fed to networks and stored in
    /// experiences.
    pub fn snapshot(&self) -> Vec<Vec<f64>> {
        self.obs.iter().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_padded_with_first_observation() {
        let w = ObservationWindow::new(5, vec![1.0, 2.0]).unwrap();
        let snap = w.snapshot();
        assert_eq!(snap.len(), 5);
        assert!(snap.iter().all(|o| o == &vec![1.0, 2.0]));
    }

    #[test]
    fn push_shifts_chronologically() {
        let mut w = ObservationWindow::new(3, vec![0.0]).unwrap();
        w.push(vec![1.0]).unwrap();
        w.push(vec![2.0]).unwrap();
        assert_eq!(w.snapshot(), vec![vec![0.0], vec![1.0], vec![2.0]]);
        w.push(vec![3.0]).unwrap();
        assert_eq!(w.snapshot(), vec![vec![1.0], vec![2.0], vec![3.0]]);
    }

    #[test]
    fn shifted_snapshot_overlaps_previous() {
        let mut w = ObservationWindow::new(4, vec![0.5, 0.5]).unwrap();
        w.push(vec![1.0, 1.0]).unwrap();
        let before = w.snapshot();
        w.push(vec![2.0, 2.0]).unwrap();
        let after = w.snapshot();
        assert_eq!(&before[1..], &after[..3]);
    }

    #[test]
    fn rejects_dimension_drift_and_bad_construction() {
        let mut w = ObservationWindow::new(2, vec![1.0, 2.0]).unwrap();
        assert!(w.push(vec![1.0]).is_err());
        assert!(ObservationWindow::new(0, vec![1.0]).is_err());
        assert!(ObservationWindow::new(3, vec![]).is_err());
    }

    #[test]
    fn length_one_window_tracks_current_observation() {
        let mut w = ObservationWindow::new(1, vec![7.0]).unwrap();
        assert_eq!(w.snapshot(), vec![vec![7.0]]);
        w.push(vec![9.0]).unwrap();
        assert_eq!(w.snapshot(), vec![vec![9.0]]);
    }
}
