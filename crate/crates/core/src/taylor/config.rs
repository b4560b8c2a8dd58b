use super::{Result, TaylorError};

/// Smallest block that still yields an acceleration map.
pub const MIN_BLOCK_LEN: usize = 4;

/// Upper bound on the term count; `1/k!` is negligible beyond it for inputs
/// in `[-1, 1]`.
pub const MAX_TERMS: usize = 20;

/// Parameters of the sliding-window Taylor transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaylorConfig {
    /// Frames per temporal block (`T`).
    pub block_len: usize,
    /// Taylor terms per channel; `k` runs over `0..n_terms`.
    pub n_terms: usize,
    /// Stride between consecutive blocks.
    pub step: usize,
    /// Add the block's first grayscale frame to every output channel.
    pub gray_augment: bool,
}

impl Default for TaylorConfig {
    fn default() -> Self {
        Self {
            block_len: MIN_BLOCK_LEN,
            n_terms: 1,
            step: 1,
            gray_augment: false,
        }
    }
}

impl TaylorConfig {
    pub fn new(block_len: usize, n_terms: usize) -> Self {
        Self {
            block_len,
            n_terms,
            ..Self::default()
        }
    }

    pub fn with_step(mut self, step: usize) -> Self {
        self.step = step;
        self
    }

    pub fn with_gray_augment(mut self, gray_augment: bool) -> Self {
        self.gray_augment = gray_augment;
        self
    }

    /// Largest term count a block of `block_len` frames can feed.
    pub fn max_terms(block_len: usize) -> usize {
        block_len.saturating_sub(3).min(MAX_TERMS)
    }

    pub fn validate(&self) -> Result<()> {
        check_window(self.block_len, self.step)?;
        check_terms(self.block_len, self.n_terms)
    }

    /// Number of Taylor frames produced from a video of `num_frames` frames.
    pub fn output_len(&self, num_frames: usize) -> usize {
        super::num_blocks(num_frames, self.block_len, self.step)
    }
}

pub(crate) fn check_window(block_len: usize, step: usize) -> Result<()> {
    if block_len < MIN_BLOCK_LEN {
        return Err(TaylorError::InvalidConfig(format!(
            "window must be at least {MIN_BLOCK_LEN} frames, got {block_len}"
        )));
    }
    if step < 1 {
        return Err(TaylorError::InvalidConfig(
            "step must be at least 1".to_string(),
        ));
    }
    Ok(())
}

pub(crate) fn check_terms(block_len: usize, n_terms: usize) -> Result<()> {
    if n_terms < 1 {
        return Err(TaylorError::InvalidConfig(
            "terms must be at least 1".to_string(),
        ));
    }
    if n_terms > MAX_TERMS {
        return Err(TaylorError::InvalidConfig(format!(
            "terms must be at most {MAX_TERMS}, got {n_terms}"
        )));
    }
    if block_len < n_terms + 3 {
        return Err(TaylorError::InsufficientFrames {
            window: block_len,
            n_terms,
        });
    }
    Ok(())
}
