//! In-process task farm: a root plus `P` workers, broadcast or scatter–gather
//! distribution, barrier-delimited timing.

mod barrier;
mod level;
mod run;

pub use barrier::{Barrier, Release};
pub use level::{run_level, run_whole, LevelRun, Stage, StagedWork};
pub use run::{
    block_partition, broadcast_run, broadcast_share, farm_run, scatter_gather_run, FarmConfig, FarmRun,
    Level, Strategy, TaskEnvelope, TaskError, TaskOutcome,
};
