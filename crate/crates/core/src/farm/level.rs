//! Level 1 / level 2 parallelization over a staged per-task computation.

use std::convert::Infallible;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use super::run::{farm_run, panic_message, FarmConfig, Level, TaskError};
use crate::Result;

/// Outcome of the sequential prepare stage.
pub enum Stage<P, I, O> {
    /// Items to fan out, plus whatever `finish` needs to combine them.
    Fanout { prepared: P, items: Vec<I> },
    /// Nothing to fan out; the task's output is already known.
    Done(O),
}

/// A per-task computation split into a sequential prepare stage, an
/// embarrassingly parallel item stage and a sequential finish stage.
/// Level 1 runs all three inside one worker; level 2 runs prepare and
/// finish at the root and fans the items out.
pub trait StagedWork: Sync {
    type Task: Clone + Send + Sync;
    type Prepared: Sync;
    type Item: Clone + Send + Sync;
    type ItemOutput: Send;
    type Output: Send;

    fn prepare(&self, task: &Self::Task) -> Stage<Self::Prepared, Self::Item, Self::Output>;

    fn process(&self, prepared: &Self::Prepared, item: &Self::Item) -> Self::ItemOutput;

    /// `outputs[k]` belongs to `items[k]`; an `Err` carries a panic message.
    fn finish(
        &self,
        task: &Self::Task,
        prepared: Self::Prepared,
        outputs: Vec<std::result::Result<Self::ItemOutput, String>>,
    ) -> Self::Output;
}

#[derive(Debug)]
pub struct LevelRun<O> {
    /// One entry per task in task order; `Err` carries a panic message.
    pub results: Vec<std::result::Result<O, String>>,
    /// Level 1: task indices run by each worker.
    pub assignments: Vec<Vec<usize>>,
    /// Level 2: per task, the number of items each worker received
    /// (empty when the task did not fan out).
    pub fanouts: Vec<Vec<usize>>,
    pub elapsed: Duration,
}

fn caught<T>(f: impl FnOnce() -> T) -> std::result::Result<T, String> {
    catch_unwind(AssertUnwindSafe(f)).map_err(panic_message)
}

/// Run one task wholly on the calling thread.
pub fn run_whole<W: StagedWork>(work: &W, task: &W::Task) -> W::Output {
    match work.prepare(task) {
        Stage::Done(out) => out,
        Stage::Fanout { prepared, items } => {
            let outputs = items
                .iter()
                .map(|item| caught(|| work.process(&prepared, item)))
                .collect();
            work.finish(task, prepared, outputs)
        }
    }
}

fn flatten<O>(r: std::result::Result<O, TaskError<Infallible>>) -> std::result::Result<O, String> {
    r.map_err(|e| match e {
        TaskError::Failed(never) => match never {},
        TaskError::Panicked(msg) => msg,
    })
}

pub fn run_level<W: StagedWork>(
    tasks: &[W::Task],
    config: &FarmConfig,
    work: &W,
) -> Result<LevelRun<W::Output>> {
    match config.level {
        Level::One => {
            let run = farm_run(tasks, config, |task| Ok::<_, Infallible>(run_whole(work, task)))?;
            Ok(LevelRun {
                elapsed: run.elapsed(),
                assignments: run.assignments,
                fanouts: vec![Vec::new(); tasks.len()],
                results: run.results.into_iter().map(flatten).collect(),
            })
        }
        Level::Two => {
            let start = Instant::now();
            let mut results = Vec::with_capacity(tasks.len());
            let mut fanouts = Vec::with_capacity(tasks.len());
            for task in tasks {
                let (result, fanout) = match caught(|| work.prepare(task)) {
                    Err(msg) => (Err(msg), Vec::new()),
                    Ok(Stage::Done(out)) => (Ok(out), Vec::new()),
                    Ok(Stage::Fanout { prepared, items }) if items.is_empty() => {
                        (caught(|| work.finish(task, prepared, Vec::new())), Vec::new())
                    }
                    Ok(Stage::Fanout { prepared, items }) => {
                        let run = farm_run(&items, config, |item| {
                            Ok::<_, Infallible>(work.process(&prepared, item))
                        })?;
                        let fanout = run.tasks_per_worker();
                        let outputs = run.results.into_iter().map(flatten).collect();
                        (caught(|| work.finish(task, prepared, outputs)), fanout)
                    }
                };
                results.push(result);
                fanouts.push(fanout);
            }
            Ok(LevelRun {
                results,
                assignments: Vec::new(),
                fanouts,
                elapsed: start.elapsed(),
            })
        }
    }
}
