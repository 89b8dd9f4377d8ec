//! Per-pair orchestration, corpus runs, benchmark statistics and reports.

mod config;
mod corpus;
mod pair;
mod report;
mod stats;

pub use config::PipelineConfig;
pub use corpus::{
    available_cores, run_corpus, run_corpus_with, CorpusRun, ResultRecord, RunManifest, RunMeta,
};
pub use pair::{
    candidate_order, candidate_pairs, run_pair, CandidateReport, Evaluation, LigandMatcher, PairPipeline,
    PairResult, PairStatus, PreparedPair, SiteSummary, StandardMatcher, TimingBreakdown,
};
pub use report::{breakdown_report, BreakdownReport, BreakdownRow};
pub use stats::{bench, mean_ci, speedup_report, BenchRun, BenchStats, Z_95};
