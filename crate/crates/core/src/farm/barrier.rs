//! Reusable barrier that reports its release instant and names absentees
//! on timeout.

use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use crate::{Error, Result};

#[derive(Debug)]
struct State {
    arrived: Vec<bool>,
    count: usize,
    generation: u64,
    released_at: Instant,
    broken: Option<Vec<usize>>,
}

#[derive(Debug)]
pub struct Barrier {
    size: usize,
    timeout: Option<Duration>,
    names: Vec<String>,
    state: Mutex<State>,
    released: Condvar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Release {
    pub generation: u64,
    /// Taken by the last arriving member while every other member is still
    /// blocked, so it precedes anything any member does after the barrier.
    pub released_at: Instant,
}

impl Barrier {
    pub fn new(size: usize) -> Self {
        Barrier::with_names((0..size).map(|r| format!("worker {r}")).collect())
    }

    /// One member per name; the name identifies the member in timeout errors.
    pub fn with_names(names: Vec<String>) -> Self {
        assert!(!names.is_empty(), "a barrier needs at least one member");
        let size = names.len();
        Barrier {
            size,
            timeout: None,
            names,
            state: Mutex::new(State {
                arrived: vec![false; size],
                count: 0,
                generation: 0,
                released_at: Instant::now(),
                broken: None,
            }),
            released: Condvar::new(),
        }
    }

    pub fn timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Block until all members have called `wait` for this generation.
    pub fn wait(&self, rank: usize) -> Result<Release> {
        assert!(rank < self.size, "rank {rank} outside barrier of {}", self.size);
        let mut state = self.state.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(absent) = &state.broken {
            return Err(self.timeout_error(absent));
        }
        let generation = state.generation;
        state.arrived[rank] = true;
        state.count += 1;
        if state.count == self.size {
            state.released_at = Instant::now();
            state.count = 0;
            state.arrived.iter_mut().for_each(|a| *a = false);
            state.generation += 1;
            self.released.notify_all();
            return Ok(Release {
                generation,
                released_at: state.released_at,
            });
        }

        let deadline = self.timeout.map(|t| Instant::now() + t);
        loop {
            state = match deadline {
                None => self.released.wait(state).unwrap_or_else(|e| e.into_inner()),
                Some(d) => {
                    let left = d.saturating_duration_since(Instant::now());
                    self.released
                        .wait_timeout(state, left)
                        .unwrap_or_else(|e| e.into_inner())
                        .0
                }
            };
            if state.generation != generation {
                return Ok(Release {
                    generation,
                    released_at: state.released_at,
                });
            }
            if let Some(absent) = &state.broken {
                return Err(self.timeout_error(absent));
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                let absent: Vec<usize> = (0..self.size).filter(|&r| !state.arrived[r]).collect();
                state.broken = Some(absent.clone());
                self.released.notify_all();
                return Err(self.timeout_error(&absent));
            }
        }
    }

    fn timeout_error(&self, absent: &[usize]) -> Error {
        Error::BarrierTimeout {
            absent: absent.iter().map(|&r| self.names[r].clone()).collect(),
        }
    }
}
