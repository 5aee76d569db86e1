//! Experience replay: bounded FIFO storage with uniform-with-replacement
//! sampling.

use std::collections::VecDeque;

use rand_chacha::ChaCha8Rng;

use rand::Rng;

use crate::error::{Error, Result};

/// One transition. Windows are chronological (oldest first) and
/// `window_next` must equal `window_t` shifted by one step.
#[derive(Debug, Clone, PartialEq)]
pub struct Experience {
    pub window_t: Vec<Vec<f64>>,
    pub action: usize,
    pub reward: f64,
    pub window_next: Vec<Vec<f64>>,
    pub terminal: bool,
}

impl Experience {
    pub fn validate(&self) -> Result<()> {
        if self.window_t.is_empty() || self.window_t.len() != self.window_next.len() {
            return Err(Error::Shape(format!(
                "window lengths differ or are empty: {} vs {}",
                self.window_t.len(),
                self.window_next.len()
            )));
        }
        let dim = self.window_t[0].len();
        if dim == 0 {
            return Err(Error::Shape("observations must be non-empty".into()));
        }
        for obs in self.window_t.iter().chain(&self.window_next) {
            if obs.len() != dim {
                return Err(Error::Shape(format!(
                    "inconsistent observation widths: {} vs {dim}",
                    obs.len()
                )));
            }
        }
        // The next window is the current one advanced by a single step.
        if self.window_t[1..] != self.window_next[..self.window_t.len() - 1] {
            return Err(Error::Shape(
                "window_next is not window_t shifted by one observation".into(),
            ));
        }
        if !self.reward.is_finite() {
            return Err(Error::Data(format!("non-finite reward {}", self.reward)));
        }
        Ok(())
    }
}

/// FIFO buffer: strictly oldest-first eviction at capacity.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    items: VecDeque<Experience>,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::Config("replay capacity must be at least 1".into()));
        }
        Ok(Self { capacity, items: VecDeque::with_capacity(capacity.min(1 << 20)) })
    }

    pub fn push(&mut self, experience: Experience) -> Result<()> {
        experience.validate()?;
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back(experience);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn iter(&self) -> impl Iterator<Item = &Experience> {
        self.items.iter()
    }

    /// `batch_size` independent uniform draws over current contents, with
    /// replacement; a seeded rng makes the batch reproducible.
    pub fn sample(&self, batch_size: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Experience>> {
        if self.items.is_empty() {
            return Err(Error::State("cannot sample from an empty replay buffer".into()));
        }
        Ok((0..batch_size)
            .map(|_| self.items[rng.random_range(0..self.items.len())].clone())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn exp(tag: f64) -> Experience {
        Experience {
            window_t: vec![vec![tag], vec![tag + 0.5]],
            action: 0,
            reward: tag,
            window_next: vec![vec![tag + 0.5], vec![tag + 1.0]],
            terminal: false,
        }
    }

    #[test]
    fn fifo_eviction_at_capacity() {
        let mut buf = ReplayBuffer::new(2).unwrap();
        buf.push(exp(1.0)).unwrap();
        assert_eq!(buf.len(), 1);
        buf.push(exp(2.0)).unwrap();
        buf.push(exp(3.0)).unwrap();
        assert_eq!(buf.len(), 2);
        let rewards: Vec<f64> = buf.iter().map(|e| e.reward).collect();
        assert_eq!(rewards, vec![2.0, 3.0]);
    }

    #[test]
    fn rejects_malformed_windows() {
        // Not a one-step shift.
        let bad = Experience {
            window_t: vec![vec![1.0], vec![2.0]],
            action: 0,
            reward: 0.0,
            window_next: vec![vec![9.0], vec![3.0]],
            terminal: false,
        };
        let mut buf = ReplayBuffer::new(4).unwrap();
        assert!(buf.push(bad).is_err());

        let mismatched = Experience {
            window_t: vec![vec![1.0], vec![2.0]],
            action: 0,
            reward: 0.0,
            window_next: vec![vec![2.0]],
            terminal: false,
        };
        assert!(mismatched.validate().is_err());

        let ragged = Experience {
            window_t: vec![vec![1.0], vec![2.0, 3.0]],
            action: 0,
            reward: 0.0,
            window_next: vec![vec![2.0, 3.0], vec![4.0]],
            terminal: false,
        };
        assert!(ragged.validate().is_err());
    }

    #[test]
    fn length_one_windows_always_shift_correctly() {
        let e = Experience {
            window_t: vec![vec![1.0, 2.0]],
            action: 3,
            reward: 1.0,
            window_next: vec![vec![5.0, 6.0]],
            terminal: true,
        };
        assert!(e.validate().is_ok());
    }

    #[test]
    fn sampling_with_replacement_from_singleton() {
        let mut buf = ReplayBuffer::new(8).unwrap();
        buf.push(exp(7.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let batch = buf.sample(4, &mut rng).unwrap();
        assert_eq!(batch.len(), 4);
        assert!(batch.iter().all(|e| e.reward == 7.0));
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let mut buf = ReplayBuffer::new(16).unwrap();
        for k in 0..10 {
            buf.push(exp(k as f64)).unwrap();
        }
        let a = buf.sample(32, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = buf.sample(32, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_buffer_cannot_be_sampled() {
        let buf = ReplayBuffer::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(buf.sample(1, &mut rng).is_err());
        assert!(ReplayBuffer::new(0).is_err());
    }

    #[test]
    fn sampling_is_close_to_uniform() {
        // 10 000 draws over 10 items: expected 1000 per item, sd 30.
        let mut buf = ReplayBuffer::new(16).unwrap();
        for k in 0..10 {
            buf.push(exp(k as f64)).unwrap();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let batch = buf.sample(10_000, &mut rng).unwrap();
        let mut counts = [0usize; 10];
        for e in &batch {
            counts[e.reward as usize] += 1;
        }
        for (k, c) in counts.iter().enumerate() {
            let dev = (*c as f64 - 1000.0).abs();
            assert!(dev <= 150.0, "item {k} drawn {c} times, deviation {dev} > 5 sigma");
        }
    }
}
