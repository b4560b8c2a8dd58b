//! Taylor frame kernels.
//!
//! A temporal block `F_1..F_T` is summarised per pixel as
//!
//! ```text
//! M_c = 1/T * sum_{tau=1..T} sum_{k=0..K-1} D[k + offset_c] / k! * (F_tau - F_1)^k
//! ```
//!
//! where `D[j]` is the order-`j` forward difference evaluated at the first
//! frame and `offset_c` is 1, 2, 3 for displacement, velocity and
//! acceleration. [`taylor_frame_reference`] evaluates the double sum as
//! written; [`taylor_frame_fast`] swaps the sums so the power means
//! `mean_tau((F_tau - F_1)^k)` are computed once and shared by all channels.

mod config;
mod difference;
mod frame;
mod pipeline;
mod video;

use thiserror::Error;

pub use config::{TaylorConfig, MAX_TERMS, MIN_BLOCK_LEN};
pub use difference::{difference_stack, DifferenceStack};
pub use frame::{gray_augment, taylor_frame_fast, taylor_frame_reference, Channel, TaylorFrame};
pub use pipeline::{taylor_video, taylor_video_with, Execution, Kernel, TaylorVideo};
pub(crate) use video::windows;
pub use video::{num_blocks, sliding_blocks, GrayVideo, TemporalBlock};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TaylorError {
    #[error("video has {frames} frames but the window needs {window}")]
    VideoTooShort { frames: usize, window: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("window {window} supports at most {max} terms, {n_terms} requested", max = window.saturating_sub(3))]
    InsufficientFrames { window: usize, n_terms: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("invalid video: {0}")]
    InvalidVideo(String),
}

impl TaylorError {
    /// Short stable name of the variant, used in diagnostics and bindings.
    pub fn name(&self) -> &'static str {
        match self {
            TaylorError::VideoTooShort { .. } => "VideoTooShort",
            TaylorError::InvalidConfig(_) => "InvalidConfig",
            TaylorError::InsufficientFrames { .. } => "InsufficientFrames",
            TaylorError::ShapeMismatch { .. } => "ShapeMismatch",
            TaylorError::InvalidVideo(_) => "InvalidVideo",
        }
    }
}

pub type Result<T> = std::result::Result<T, TaylorError>;
