use std::path::PathBuf;

use influence_core::analytics::AnalyticsError;
use influence_core::baselines::BaselineError;
use influence_core::graph::GraphError;
use influence_core::ingest::IngestError;
use influence_core::ip::IpError;
use thiserror::Error;

use crate::manifest::ManifestError;

/// Process exit codes. Usage errors reported by the argument parser exit
/// with 2.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG_INVALID: i32 = 3;
    pub const MISSING_INPUT: i32 = 4;
    pub const INPUT_PARSE: i32 = 5;
    pub const GRAPH_INVALID: i32 = 6;
    pub const EMPTY_GRAPH: i32 = 7;
    pub const DEGENERATE_GRAPH: i32 = 8;
    pub const SCORING: i32 = 9;
    pub const ANALYTICS: i32 = 10;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error("{}: {source}", path.display())]
    Ingest { path: PathBuf, source: IngestError },
    #[error("{}: {source}", path.display())]
    GraphFile { path: PathBuf, source: GraphError },
    #[error("{}: {source}", path.display())]
    ScoreFile { path: PathBuf, source: BaselineError },
    #[error(transparent)]
    Ip(#[from] IpError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigInvalid(_) | CliError::Manifest(_) => exit::CONFIG_INVALID,
            CliError::MissingInput(_) => exit::MISSING_INPUT,
            CliError::Ingest { source: IngestError::Io(_), .. } => exit::IO,
            CliError::Ingest { .. } | CliError::ScoreFile { .. } => exit::INPUT_PARSE,
            CliError::GraphFile { source: GraphError::Io(_), .. } => exit::IO,
            CliError::GraphFile { .. } => exit::GRAPH_INVALID,
            CliError::Ip(IpError::EmptyGraph) => exit::EMPTY_GRAPH,
            CliError::Ip(IpError::DegenerateGraph { .. }) => exit::DEGENERATE_GRAPH,
            CliError::Ip(_) | CliError::Baseline(_) => exit::SCORING,
            CliError::Analytics(_) => exit::ANALYTICS,
            CliError::Io { .. } => exit::IO,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
