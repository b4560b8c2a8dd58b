//! Measurement tooling: compression ratios between source videos and their
//! Taylor counterparts, and per-frame timing of the two kernels.

mod bench;
mod compression;

use thiserror::Error;

use crate::taylor::TaylorError;

pub use bench::{
    bench_taylor, nondecreasing_within, BenchOptions, ConfigTiming, KernelTiming, TimingReport,
    DEFAULT_WARMUP,
};
pub use compression::{
    action_of, aggregate_report, compression_ratio, path_size, read_manifest, ActionStats,
    CompressionItem, CompressionReport, ItemRatio,
};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no items to aggregate")]
    EmptyInput,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error(transparent)]
    Taylor(#[from] TaylorError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, AnalysisError>;
