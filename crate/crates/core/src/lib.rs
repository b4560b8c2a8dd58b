//! Taylor videos: per-block motion maps built from truncated Taylor
//! expansions over frame differences.
//!
//! Each temporal block of a grayscale video is turned into one three-channel
//! frame holding displacement, velocity and acceleration. The crate ships two
//! kernels for that computation (a direct per-frame expansion and a tensor
//! form that shares the Hadamard power means across channels), plus the
//! surrounding tooling:
//!
//! - [`taylor`]: the numerical kernels and the sliding-window pipeline
//! - [`video_io`]: grayscale ingestion, the `TLV1`/`TGRY` binary formats and
//!   PNG visualization
//! - [`skeleton`]: the same transform applied to joint trajectories
//! - [`analysis`]: compression-ratio statistics and per-frame timing

pub mod analysis;
pub mod skeleton;
pub mod taylor;
pub mod video_io;

pub use taylor::{
    difference_stack, gray_augment, sliding_blocks, taylor_frame_fast, taylor_frame_reference,
    taylor_video, taylor_video_with, Channel, DifferenceStack, Execution, GrayVideo, Kernel,
    TaylorConfig, TaylorError, TaylorFrame, TaylorVideo, TemporalBlock,
};
