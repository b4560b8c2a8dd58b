use std::fs;
use std::path::{Path, PathBuf};

use image::ImageFormat;
use ndarray::{Array2, Array3};
use rayon::prelude::*;

use super::gray::luma;
use super::{Result, VideoIoError};
use crate::taylor::GrayVideo;

/// Image files in `dir` that the decoder recognizes by extension, sorted
/// lexicographically by file name. Hidden files are skipped.
pub fn image_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if hidden || !entry.file_type()?.is_file() {
            continue;
        }
        if ImageFormat::from_path(&path).is_ok() {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn decode_gray(path: &Path) -> Result<Array2<f64>> {
    let img = image::open(path).map_err(|source| VideoIoError::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut out = Array2::zeros((h, w));
    // integer samples are normalized in f64 so 8-bit v maps to exactly v / 255
    match img.color().bits_per_pixel() / u16::from(img.color().channel_count()) {
        8 => fill(
            &mut out,
            img.to_rgb8()
                .pixels()
                .map(|p| p.0.map(|v| f64::from(v) / 255.0)),
        ),
        16 => fill(
            &mut out,
            img.to_rgb16()
                .pixels()
                .map(|p| p.0.map(|v| f64::from(v) / 65535.0)),
        ),
        _ => fill(
            &mut out,
            img.to_rgb32f()
                .pixels()
                .map(|p| p.0.map(|v| f64::from(v).clamp(0.0, 1.0))),
        ),
    }
    Ok(out)
}

fn fill(out: &mut Array2<f64>, pixels: impl Iterator<Item = [f64; 3]>) {
    for (slot, [r, g, b]) in out.iter_mut().zip(pixels) {
        *slot = luma(r, g, b);
    }
}

/// Decodes every image in `dir` (in file-name order) and converts it to
/// grayscale.
pub fn read_image_sequence(dir: impl AsRef<Path>) -> Result<GrayVideo> {
    let dir = dir.as_ref();
    let files = image_files(dir)?;
    if files.is_empty() {
        return Err(VideoIoError::EmptyDirectory(dir.to_path_buf()));
    }
    let decoded: Vec<Result<Array2<f64>>> = files.par_iter().map(|p| decode_gray(p)).collect();

    let mut frames = Vec::with_capacity(files.len());
    let mut expected = None;
    for (path, frame) in files.iter().zip(decoded) {
        let frame = frame?;
        let dim = frame.dim();
        match expected {
            None => expected = Some(dim),
            Some(e) if e != dim => {
                return Err(VideoIoError::DimensionMismatch {
                    path: path.clone(),
                    expected: e,
                    found: dim,
                })
            }
            _ => {}
        }
        frames.push(frame);
    }
    let (h, w) = expected.expect("at least one frame");
    let mut data = Array3::zeros((frames.len(), h, w));
    for (mut slot, frame) in data.outer_iter_mut().zip(&frames) {
        slot.assign(frame);
    }
    Ok(GrayVideo::new(data)?)
}
