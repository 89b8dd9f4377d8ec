//! Whole-corpus runs: unique pairs distributed over the task farm.

use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use super::pair::{LigandMatcher, PairPipeline, PairResult, PairStatus};
use crate::farm::{run_level, FarmConfig, Level, Strategy};
use crate::ingest::{normalize_ids, unique_pairs, PdbId, StructureStore};
use crate::{Error, Result};

/// How a run was executed; stamped into every output record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMeta {
    pub strategy: Strategy,
    pub level: Level,
    pub workers: usize,
    /// Hardware threads available to the process.
    pub cores: usize,
}

impl RunMeta {
    pub fn new(farm: &FarmConfig) -> Self {
        RunMeta {
            strategy: farm.strategy,
            level: farm.level,
            workers: farm.workers,
            cores: available_cores(),
        }
    }
}

pub fn available_cores() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub ids: Vec<PdbId>,
    pub pairs: usize,
    pub run: RunMeta,
    pub params: PipelineConfig,
    /// Barrier-delimited wall time of the distributed region (level 1) or of
    /// the per-pair loop (level 2).
    pub wall_seconds: f64,
    pub errors: usize,
    /// Level 1: pair indices run by each worker.
    pub assignments: Vec<Vec<usize>>,
    /// Level 2: per pair, the number of candidates each worker received.
    pub fanouts: Vec<Vec<usize>>,
}

/// One line of the results file: run metadata, the thresholds in force and
/// the pair result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    #[serde(flatten)]
    pub run: RunMeta,
    pub params: PipelineConfig,
    #[serde(flatten)]
    pub result: PairResult,
}

#[derive(Debug, Clone)]
pub struct CorpusRun {
    pub results: Vec<PairResult>,
    pub manifest: RunManifest,
}

impl CorpusRun {
    pub fn records(&self) -> impl Iterator<Item = ResultRecord> + '_ {
        self.results.iter().map(|r| ResultRecord {
            run: self.manifest.run.clone(),
            params: self.manifest.params.clone(),
            result: r.clone(),
        })
    }

    pub fn has_errors(&self) -> bool {
        self.manifest.errors > 0
    }
}

/// Run every unique pair of `ids` with the standard matcher.
pub fn run_corpus<S: AsRef<str>>(
    ids: &[S],
    config: &PipelineConfig,
    farm: &FarmConfig,
    store: &StructureStore,
) -> Result<CorpusRun> {
    run_corpus_with(ids, &PairPipeline::new(store, config), farm)
}

pub fn run_corpus_with<S: AsRef<str>, M: LigandMatcher>(
    ids: &[S],
    pipeline: &PairPipeline<'_, M>,
    farm: &FarmConfig,
) -> Result<CorpusRun> {
    pipeline.config().validate()?;
    let normalized = normalize_ids(ids)?;
    if normalized.len() < 2 {
        return Err(Error::InvalidConfig("need at least two distinct ids".into()));
    }
    let tasks = unique_pairs(ids)?;
    let run = run_level(&tasks, farm, pipeline)?;
    let results: Vec<PairResult> = run
        .results
        .into_iter()
        .zip(&tasks)
        .map(|(r, task)| r.unwrap_or_else(|msg| PairResult::error(task, format!("pair failed: {msg}"))))
        .collect();
    let errors = results.iter().filter(|r| r.status == PairStatus::Error).count();
    Ok(CorpusRun {
        manifest: RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            ids: normalized,
            pairs: tasks.len(),
            run: RunMeta::new(farm),
            params: pipeline.config().clone(),
            wall_seconds: run.elapsed.as_secs_f64(),
            errors,
            assignments: run.assignments,
            fanouts: run.fanouts,
        },
        results,
    })
}
