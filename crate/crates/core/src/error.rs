use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("no ids")]
    NoIds,

    #[error("invalid pdb id '{0}'")]
    InvalidPdbId(String),

    #[error("fetch failed: {id}")]
    FetchFailed { id: String, reason: String },

    #[error("unknown pdb id: {0}")]
    UnknownPdbId(String),

    #[error("malformed record at line {line}")]
    MalformedRecord { line: usize },

    #[error("unknown element '{symbol}' at line {line}")]
    UnknownElement { symbol: String, line: usize },

    #[error("invalid molecular graph: {0}")]
    InvalidGraph(String),

    #[error("invalid match size: m={m}, n1={n1}, n2={n2}")]
    InvalidMatchSize { m: usize, n1: usize, n2: usize },

    #[error("correspondence length mismatch ({0} vs {1})")]
    CorrespondenceLengthMismatch(usize, usize),

    #[error("degenerate point set")]
    DegeneratePointSet,

    #[error("insufficient correspondence ({0} pairs, need at least 3)")]
    InsufficientCorrespondence(usize),

    #[error("invalid self-score {0}")]
    InvalidSelfScore(f64),

    #[error("empty binding site")]
    EmptyBindingSite,

    #[error("degenerate surface vector")]
    DegenerateSurfaceVector,

    #[error("barrier timeout: absent {}", .absent.join(", "))]
    BarrierTimeout { absent: Vec<String> },

    #[error("need ≥ 2 samples (got {0})")]
    NeedSamples(usize),

    #[error("non-positive baseline mean {0}")]
    NonPositiveBaseline(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
