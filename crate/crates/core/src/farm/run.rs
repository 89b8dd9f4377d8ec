//! Master–worker runs with broadcast or scatter–gather distribution.
//!
//! Both strategies run the same per-task function and return results in
//! task order; they differ only in what each worker is given. Under
//! broadcast every worker sees the whole task list and picks the indices
//! congruent to its rank; under scatter–gather the root hands each worker a
//! contiguous chunk and concatenates the returned chunks in rank order.
//! The timed region is delimited by an entry and an exit barrier shared by
//! the root and all workers.

use std::any::Any;
use std::fmt;
use std::ops::Range;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::barrier::Barrier;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "broadcast")]
    Broadcast,
    #[serde(rename = "scatter")]
    ScatterGather,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Broadcast => "broadcast",
            Strategy::ScatterGather => "scatter",
        })
    }
}

/// Level 1 distributes whole pairs; level 2 distributes the ligand-pair
/// comparisons inside each pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Level {
    One,
    Two,
}

impl TryFrom<u8> for Level {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Level::One),
            2 => Ok(Level::Two),
            other => Err(Error::InvalidConfig(format!("level must be 1 or 2, got {other}"))),
        }
    }
}

impl From<Level> for u8 {
    fn from(l: Level) -> u8 {
        match l {
            Level::One => 1,
            Level::Two => 2,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarmConfig {
    pub workers: usize,
    pub strategy: Strategy,
    pub level: Level,
    #[serde(skip)]
    pub barrier_timeout: Option<Duration>,
}

impl FarmConfig {
    pub fn new(workers: usize, strategy: Strategy, level: Level) -> Result<Self> {
        if workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        Ok(FarmConfig {
            workers,
            strategy,
            level,
            barrier_timeout: None,
        })
    }
}

/// A task or result tagged with its position in the run's task order.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskEnvelope<P> {
    pub task_index: usize,
    pub payload: P,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TaskError<E> {
    Failed(E),
    Panicked(String),
}

impl<E: fmt::Display> fmt::Display for TaskError<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaskError::Failed(e) => write!(f, "{e}"),
            TaskError::Panicked(msg) => write!(f, "task panicked: {msg}"),
        }
    }
}

pub type TaskOutcome<O, E> = std::result::Result<O, TaskError<E>>;

#[derive(Debug)]
pub struct FarmRun<O, E> {
    /// One slot per task, in task order.
    pub results: Vec<TaskOutcome<O, E>>,
    /// Task indices executed by each worker, in execution order.
    pub assignments: Vec<Vec<usize>>,
    pub started: Instant,
    pub stopped: Instant,
}

impl<O, E> FarmRun<O, E> {
    pub fn elapsed(&self) -> Duration {
        self.stopped - self.started
    }

    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| r.is_err()).count()
    }

    pub fn tasks_per_worker(&self) -> Vec<usize> {
        self.assignments.iter().map(Vec::len).collect()
    }
}

pub(crate) fn panic_message(payload: Box<dyn Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

fn execute<T, O, E>(work: &(impl Fn(&T) -> std::result::Result<O, E> + Sync), task: &T) -> TaskOutcome<O, E> {
    match catch_unwind(AssertUnwindSafe(|| work(task))) {
        Ok(Ok(out)) => Ok(out),
        Ok(Err(e)) => Err(TaskError::Failed(e)),
        Err(payload) => Err(TaskError::Panicked(panic_message(payload))),
    }
}

/// Indices handled by `rank` under broadcast: `i ≡ rank (mod workers)`.
pub fn broadcast_share(tasks: usize, workers: usize, rank: usize) -> impl Iterator<Item = usize> {
    (rank..tasks).step_by(workers.max(1))
}

/// Balanced contiguous chunks: the first `T mod P` workers get `⌈T/P⌉`
/// tasks, the rest `⌊T/P⌋`.
pub fn block_partition(tasks: usize, workers: usize) -> Vec<Range<usize>> {
    let workers = workers.max(1);
    let (base, extra) = (tasks / workers, tasks % workers);
    let mut start = 0;
    (0..workers)
        .map(|r| {
            let len = base + usize::from(r < extra);
            let range = start..start + len;
            start += len;
            range
        })
        .collect()
}

fn member_names(workers: usize) -> Vec<String> {
    let mut names: Vec<String> = (0..workers).map(|r| format!("worker {r}")).collect();
    names.push("root".to_string());
    names
}

fn join_all(handles: Vec<std::thread::ScopedJoinHandle<'_, Result<()>>>) -> Result<()> {
    let mut first = Ok(());
    for h in handles {
        let r = h.join().unwrap_or_else(|p| {
            Err(Error::InvalidConfig(format!(
                "worker thread died: {}",
                panic_message(p)
            )))
        });
        if first.is_ok() {
            first = r;
        }
    }
    first
}

/// Every worker gets a shared view of the whole task list and runs the
/// tasks whose index is congruent to its rank.
pub fn broadcast_run<T, O, E, F>(
    tasks: &[T],
    workers: usize,
    barrier_timeout: Option<Duration>,
    work: F,
) -> Result<FarmRun<O, E>>
where
    T: Sync,
    O: Send,
    E: Send,
    F: Fn(&T) -> std::result::Result<O, E> + Sync,
{
    if workers == 0 {
        return Err(Error::InvalidConfig("workers must be at least 1".into()));
    }
    let barrier = Barrier::with_names(member_names(workers)).timeout(barrier_timeout);
    let root = workers;
    let mut slots: Vec<Option<TaskOutcome<O, E>>> = (0..tasks.len()).map(|_| None).collect();
    let mut assignments = vec![Vec::new(); workers];

    let (started, stopped) = std::thread::scope(|s| -> Result<(Instant, Instant)> {
        let mut receivers = Vec::with_capacity(workers);
        let mut handles = Vec::with_capacity(workers);
        for rank in 0..workers {
            let (tx, rx) = mpsc::channel::<TaskEnvelope<TaskOutcome<O, E>>>();
            receivers.push(rx);
            let (barrier, work) = (&barrier, &work);
            handles.push(s.spawn(move || -> Result<()> {
                barrier.wait(rank)?;
                for i in broadcast_share(tasks.len(), workers, rank) {
                    let payload = execute(work, &tasks[i]);
                    let _ = tx.send(TaskEnvelope {
                        task_index: i,
                        payload,
                    });
                }
                drop(tx);
                barrier.wait(rank)?;
                Ok(())
            }));
        }

        let entry = barrier.wait(root);
        if entry.is_ok() {
            for (rank, rx) in receivers.iter().enumerate() {
                for env in rx.iter() {
                    assignments[rank].push(env.task_index);
                    slots[env.task_index] = Some(env.payload);
                }
            }
        }
        let exit = entry.as_ref().ok().map(|_| barrier.wait(root));
        let workers_done = join_all(handles);
        let entry = entry?;
        let exit = exit.expect("root passed the entry barrier")?;
        workers_done?;
        Ok((entry.released_at, exit.released_at))
    })?;

    Ok(FarmRun {
        results: slots
            .into_iter()
            .map(|s| s.expect("every task index is covered exactly once"))
            .collect(),
        assignments,
        started,
        stopped,
    })
}

/// The root sends each worker only its contiguous chunk and concatenates
/// the returned chunks in rank order.
pub fn scatter_gather_run<T, O, E, F>(
    tasks: &[T],
    workers: usize,
    barrier_timeout: Option<Duration>,
    work: F,
) -> Result<FarmRun<O, E>>
where
    T: Clone + Send,
    O: Send,
    E: Send,
    F: Fn(&T) -> std::result::Result<O, E> + Sync,
{
    if workers == 0 {
        return Err(Error::InvalidConfig("workers must be at least 1".into()));
    }
    let barrier = Barrier::with_names(member_names(workers)).timeout(barrier_timeout);
    let root = workers;
    let chunks = block_partition(tasks.len(), workers);
    let mut results = Vec::with_capacity(tasks.len());
    let mut assignments = vec![Vec::new(); workers];

    let (started, stopped) = std::thread::scope(|s| -> Result<(Instant, Instant)> {
        let mut to_workers = Vec::with_capacity(workers);
        let mut from_workers = Vec::with_capacity(workers);
        let mut handles = Vec::with_capacity(workers);
        for rank in 0..workers {
            let (chunk_tx, chunk_rx) = mpsc::channel::<Vec<TaskEnvelope<T>>>();
            let (result_tx, result_rx) = mpsc::channel::<Vec<TaskEnvelope<TaskOutcome<O, E>>>>();
            to_workers.push(chunk_tx);
            from_workers.push(result_rx);
            let (barrier, work) = (&barrier, &work);
            handles.push(s.spawn(move || -> Result<()> {
                barrier.wait(rank)?;
                if let Ok(chunk) = chunk_rx.recv() {
                    let out: Vec<_> = chunk
                        .iter()
                        .map(|env| TaskEnvelope {
                            task_index: env.task_index,
                            payload: execute(work, &env.payload),
                        })
                        .collect();
                    let _ = result_tx.send(out);
                }
                drop(result_tx);
                barrier.wait(rank)?;
                Ok(())
            }));
        }

        let entry = barrier.wait(root);
        if entry.is_ok() {
            for (tx, range) in to_workers.iter().zip(&chunks) {
                let chunk = range
                    .clone()
                    .map(|i| TaskEnvelope {
                        task_index: i,
                        payload: tasks[i].clone(),
                    })
                    .collect();
                let _ = tx.send(chunk);
            }
            for (rank, rx) in from_workers.iter().enumerate() {
                for env in rx.recv().unwrap_or_default() {
                    debug_assert_eq!(env.task_index, results.len());
                    assignments[rank].push(env.task_index);
                    results.push(env.payload);
                }
            }
        }
        drop(to_workers);
        let exit = entry.as_ref().ok().map(|_| barrier.wait(root));
        let workers_done = join_all(handles);
        let entry = entry?;
        let exit = exit.expect("root passed the entry barrier")?;
        workers_done?;
        Ok((entry.released_at, exit.released_at))
    })?;

    assert_eq!(results.len(), tasks.len(), "gather lost results");
    Ok(FarmRun {
        results,
        assignments,
        started,
        stopped,
    })
}

/// Run `work` over `tasks` with the configured strategy and worker count.
pub fn farm_run<T, O, E, F>(tasks: &[T], config: &FarmConfig, work: F) -> Result<FarmRun<O, E>>
where
    T: Clone + Send + Sync,
    O: Send,
    E: Send,
    F: Fn(&T) -> std::result::Result<O, E> + Sync,
{
    match config.strategy {
        Strategy::Broadcast => broadcast_run(tasks, config.workers, config.barrier_timeout, work),
        Strategy::ScatterGather => scatter_gather_run(tasks, config.workers, config.barrier_timeout, work),
    }
}
