use rayon::prelude::*;

use super::frame::{gray_augment, taylor_frame_fast, taylor_frame_reference, TaylorFrame};
use super::video::windows;
use super::{GrayVideo, Result, TaylorConfig, TaylorError, TemporalBlock};

/// Which Taylor frame kernel to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    Reference,
    Fast,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::Reference => "reference",
            Kernel::Fast => "fast",
        }
    }

    pub fn frame(self, block: &TemporalBlock<'_>, n_terms: usize) -> Result<TaylorFrame> {
        match self {
            Kernel::Reference => taylor_frame_reference(block, n_terms),
            Kernel::Fast => taylor_frame_fast(block, n_terms),
        }
    }
}

/// How blocks are scheduled. Both produce bit-identical output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Sequence of Taylor frames plus the configuration that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorVideo {
    frames: Vec<TaylorFrame>,
    config: TaylorConfig,
    height: usize,
    width: usize,
}

impl TaylorVideo {
    pub fn new(
        frames: Vec<TaylorFrame>,
        config: TaylorConfig,
        height: usize,
        width: usize,
    ) -> Result<Self> {
        if let Some(f) = frames
            .iter()
            .find(|f| (f.height(), f.width()) != (height, width))
        {
            return Err(TaylorError::ShapeMismatch {
                expected: (height, width),
                found: (f.height(), f.width()),
            });
        }
        Ok(Self {
            frames,
            config,
            height,
            width,
        })
    }

    pub fn frames(&self) -> &[TaylorFrame] {
        &self.frames
    }

    pub fn config(&self) -> &TaylorConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Values narrowed to `f32` in `[frame][channel][row][col]` order.
    pub fn to_f32_vec(&self) -> Vec<f32> {
        self.frames
            .iter()
            .flat_map(|f| f.data().iter().map(|&v| v as f32))
            .collect()
    }
}

/// Converts a grayscale video with the fast kernel, evaluating blocks in
/// parallel.
pub fn taylor_video(video: &GrayVideo, cfg: &TaylorConfig) -> Result<TaylorVideo> {
    taylor_video_with(video, cfg, Kernel::Fast, Execution::Parallel)
}

pub fn taylor_video_with(
    video: &GrayVideo,
    cfg: &TaylorConfig,
    kernel: Kernel,
    execution: Execution,
) -> Result<TaylorVideo> {
    cfg.validate()?;
    let blocks = windows(video.view(), cfg.block_len, cfg.step)?;
    let one = |block: &TemporalBlock<'_>| -> Result<TaylorFrame> {
        let frame = kernel.frame(block, cfg.n_terms)?;
        if cfg.gray_augment {
            gray_augment(&frame, block.first_frame())
        } else {
            Ok(frame)
        }
    };
    let frames = match execution {
        Execution::Sequential => blocks.iter().map(one).collect::<Result<Vec<_>>>()?,
        Execution::Parallel => blocks.par_iter().map(one).collect::<Result<Vec<_>>>()?,
    };
    TaylorVideo::new(frames, *cfg, video.height(), video.width())
}
