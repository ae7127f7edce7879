use crate::env::EnvState;
use crate::error::{IsacError, Result};
use crate::math::SimRng;

/// One stored interaction. `action` is the executed binary code.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub state: EnvState,
    pub action: Vec<f64>,
    pub reward: f64,
    pub cost: f64,
    pub next_state: EnvState,
    pub done: bool,
}

/// Fixed-capacity FIFO ring of transitions.
#[derive(Clone, Debug)]
pub struct ReplayBuffer {
    capacity: usize,
    items: Vec<Transition>,
    /// Slot overwritten by the next push once full.
    head: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity: capacity.max(1),
            items: Vec::new(),
            head: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Appends, evicting the oldest transition at capacity.
    pub fn push(&mut self, t: Transition) {
        if self.items.len() < self.capacity {
            self.items.push(t);
        } else {
            self.items[self.head] = t;
            self.head = (self.head + 1) % self.capacity;
        }
    }

    /// Transitions from oldest to newest.
    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        let (newer, older) = self.items.split_at(self.head);
        older.iter().chain(newer)
    }

    /// `n` distinct transitions drawn uniformly.
    pub fn sample(&self, n: usize, rng: &mut SimRng) -> Result<Vec<Transition>> {
        if n == 0 || n > self.items.len() {
            return Err(IsacError::EmptyInput(
                "ReplayBuffer::sample (batch larger than buffer)",
            ));
        }
        Ok(rand::seq::index::sample(rng, self.items.len(), n)
            .into_iter()
            .map(|i| self.items[i].clone())
            .collect())
    }
}
