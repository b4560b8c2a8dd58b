//! Ingestion, serialization and visualization of videos and Taylor videos.
//!
//! Two little-endian binary layouts are supported:
//!
//! - `TLV1` holds a Taylor video (or any `N x C x H x W` f32 tensor with
//!   `C <= 3`) together with the configuration that produced it.
//! - `TGRY` holds a raw grayscale video as `u8` or `f32` samples.
//!
//! Image sequences are decoded with the `image` crate and converted to
//! grayscale with BT.601 luma weights.

mod gray;
mod images;
mod raw;
mod render;
mod tlv;

use std::path::PathBuf;

use thiserror::Error;

use crate::taylor::TaylorError;

pub use gray::{rgb_to_gray, RgbFrame, LUMA_WEIGHTS};
pub use images::{image_files, read_image_sequence};
pub use raw::{read_raw_gray, read_raw_gray_file, write_raw_gray, RawDtype, RAW_MAGIC};
pub use render::{
    frame_file_name, render_taylor_frame, write_png_sequence, RenderMode, DEFAULT_GAIN,
};
pub use tlv::{
    read_taylor, read_tensor_file, write_taylor, write_tensor_file, TaylorTensorFile,
    TLV_HEADER_LEN, TLV_MAGIC,
};

#[derive(Debug, Error)]
pub enum VideoIoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("no decodable images in {0}")]
    EmptyDirectory(PathBuf),
    #[error("{path}: expected {expected:?} (height, width), found {found:?}")]
    DimensionMismatch {
        path: PathBuf,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("failed to decode {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("bad magic {found:?}, expected {expected:?}")]
    BadMagic { found: [u8; 4], expected: [u8; 4] },
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("{0} unexpected bytes after payload")]
    TrailingData(usize),
    #[error("unsupported dtype code {0}")]
    UnsupportedDtype(u8),
    #[error("invalid header: {0}")]
    InvalidHeader(String),
    #[error("gain must be positive and finite, got {0}")]
    InvalidGain(f64),
    #[error(transparent)]
    Taylor(#[from] TaylorError),
}

impl VideoIoError {
    pub fn name(&self) -> &'static str {
        match self {
            VideoIoError::Io(_) => "Io",
            VideoIoError::EmptyDirectory(_) => "EmptyDirectory",
            VideoIoError::DimensionMismatch { .. } => "DimensionMismatch",
            VideoIoError::Decode { .. } => "DecodeError",
            VideoIoError::BadMagic { .. } => "BadMagic",
            VideoIoError::TruncatedPayload { .. } => "TruncatedPayload",
            VideoIoError::TrailingData(_) => "TrailingData",
            VideoIoError::UnsupportedDtype(_) => "UnsupportedDtype",
            VideoIoError::InvalidHeader(_) => "InvalidHeader",
            VideoIoError::InvalidGain(_) => "InvalidGain",
            VideoIoError::Taylor(e) => e.name(),
        }
    }
}

pub type Result<T> = std::result::Result<T, VideoIoError>;
