use ndarray::{s, Array3, ArrayView2, ArrayView3, Axis};

use super::config::check_window;
use super::{Result, TaylorError};

/// Grayscale video stored frame-major as `(frames, height, width)` with
/// intensities normalized to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayVideo {
    data: Array3<f64>,
}

impl GrayVideo {
    pub fn new(data: Array3<f64>) -> Result<Self> {
        let (frames, height, width) = data.dim();
        if frames == 0 || height == 0 || width == 0 {
            return Err(TaylorError::InvalidVideo(format!(
                "dimensions must be positive, got {frames}x{height}x{width}"
            )));
        }
        if let Some(bad) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(TaylorError::InvalidVideo(format!(
                "intensity {bad} outside [0, 1]"
            )));
        }
        Ok(Self { data })
    }

    /// Builds a video from a flat frame-major, row-major buffer.
    pub fn from_vec(frames: usize, height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        let arr = Array3::from_shape_vec((frames, height, width), data).map_err(|e| {
            TaylorError::InvalidVideo(format!(
                "buffer does not match {frames}x{height}x{width}: {e}"
            ))
        })?;
        Self::new(arr)
    }

    pub fn num_frames(&self) -> usize {
        self.data.dim().0
    }

    pub fn height(&self) -> usize {
        self.data.dim().1
    }

    pub fn width(&self) -> usize {
        self.data.dim().2
    }

    pub fn frame(&self, index: usize) -> ArrayView2<'_, f64> {
        self.data.index_axis(Axis(0), index)
    }

    pub fn view(&self) -> ArrayView3<'_, f64> {
        self.data.view()
    }

    pub fn into_inner(self) -> Array3<f64> {
        self.data
    }
}

/// A window of `T` consecutive frames, laid out as `(T, height, width)`.
#[derive(Debug, Clone, Copy)]
pub struct TemporalBlock<'a> {
    frames: ArrayView3<'a, f64>,
}

impl<'a> TemporalBlock<'a> {
    pub fn new(frames: ArrayView3<'a, f64>) -> Result<Self> {
        let (len, height, width) = frames.dim();
        check_window(len, 1)?;
        if height == 0 || width == 0 {
            return Err(TaylorError::InvalidVideo(
                "block frames must have positive dimensions".to_string(),
            ));
        }
        if frames.iter().any(|v| !v.is_finite()) {
            return Err(TaylorError::InvalidVideo(
                "block contains non-finite values".to_string(),
            ));
        }
        Ok(Self { frames })
    }

    /// Caller guarantees `len >= 4`, positive dims and finite values.
    pub(crate) fn new_unchecked(frames: ArrayView3<'a, f64>) -> Self {
        debug_assert!(frames.dim().0 >= super::MIN_BLOCK_LEN);
        Self { frames }
    }

    pub fn len(&self) -> usize {
        self.frames.dim().0
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn height(&self) -> usize {
        self.frames.dim().1
    }

    pub fn width(&self) -> usize {
        self.frames.dim().2
    }

    pub fn frame(&self, index: usize) -> ArrayView2<'a, f64> {
        self.frames.index_axis_move(Axis(0), index)
    }

    pub fn first_frame(&self) -> ArrayView2<'a, f64> {
        self.frame(0)
    }

    pub fn view(&self) -> ArrayView3<'a, f64> {
        self.frames
    }
}

/// Number of full windows of `block_len` frames at stride `step`.
pub fn num_blocks(num_frames: usize, block_len: usize, step: usize) -> usize {
    if step == 0 || num_frames < block_len {
        0
    } else {
        (num_frames - block_len) / step + 1
    }
}

/// Splits a video into overlapping windows; trailing frames that do not fill
/// a window are dropped.
pub fn sliding_blocks(
    video: &GrayVideo,
    block_len: usize,
    step: usize,
) -> Result<Vec<TemporalBlock<'_>>> {
    windows(video.view(), block_len, step)
}

pub(crate) fn windows(
    frames: ArrayView3<'_, f64>,
    block_len: usize,
    step: usize,
) -> Result<Vec<TemporalBlock<'_>>> {
    check_window(block_len, step)?;
    let total = frames.dim().0;
    if total < block_len {
        return Err(TaylorError::VideoTooShort {
            frames: total,
            window: block_len,
        });
    }
    Ok((0..num_blocks(total, block_len, step))
        .map(|i| {
            let start = i * step;
            TemporalBlock::new_unchecked(frames.slice_move(s![start..start + block_len, .., ..]))
        })
        .collect())
}
