use std::fs;
use std::path::{Path, PathBuf};

use image::{Rgb, RgbImage};
use rayon::prelude::*;

use super::{Result, VideoIoError};
use crate::taylor::{Channel, TaylorFrame, TaylorVideo};

pub const DEFAULT_GAIN: f64 = 4.0;

/// How channel values map to bytes. Displacement, velocity and acceleration
/// go to R, G and B respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderMode {
    /// `round(255 * clip(|v| * gain, 0, 1))`
    #[default]
    Magnitude,
    /// `round(127.5 * (clip(v * gain, -1, 1) + 1))`; zero maps to 128.
    Signed,
}

impl RenderMode {
    fn quantize(self, v: f64, gain: f64) -> u8 {
        let scaled = match self {
            RenderMode::Magnitude => 255.0 * (v.abs() * gain).clamp(0.0, 1.0),
            RenderMode::Signed => 127.5 * ((v * gain).clamp(-1.0, 1.0) + 1.0),
        };
        scaled.round() as u8
    }
}

fn check_gain(gain: f64) -> Result<()> {
    if gain > 0.0 && gain.is_finite() {
        Ok(())
    } else {
        Err(VideoIoError::InvalidGain(gain))
    }
}

pub fn render_taylor_frame(frame: &TaylorFrame, mode: RenderMode, gain: f64) -> Result<RgbImage> {
    check_gain(gain)?;
    let [d, v, a] = Channel::ALL.map(|c| frame.channel(c));
    let img = RgbImage::from_fn(frame.width() as u32, frame.height() as u32, |x, y| {
        let idx = [y as usize, x as usize];
        Rgb([d[idx], v[idx], a[idx]].map(|val| mode.quantize(val, gain)))
    });
    Ok(img)
}

/// File name of the frame at zero-based `index`; numbering starts at 1.
pub fn frame_file_name(index: usize) -> String {
    format!("taylor_{:06}.png", index + 1)
}

/// Renders every frame of `tv` into `outdir` as `taylor_000001.png`, ...
pub fn write_png_sequence(
    tv: &TaylorVideo,
    outdir: impl AsRef<Path>,
    mode: RenderMode,
    gain: f64,
) -> Result<Vec<PathBuf>> {
    check_gain(gain)?;
    let outdir = outdir.as_ref();
    fs::create_dir_all(outdir)?;
    tv.frames()
        .par_iter()
        .enumerate()
        .map(|(i, frame)| {
            let path = outdir.join(frame_file_name(i));
            render_taylor_frame(frame, mode, gain)?
                .save(&path)
                .map_err(|source| match source {
                    image::ImageError::IoError(e) => VideoIoError::Io(e),
                    other => VideoIoError::Decode {
                        path: path.clone(),
                        source: other,
                    },
                })?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one_pixel(values: [f64; 3]) -> TaylorFrame {
        let mut frame = TaylorFrame::zeros(1, 1);
        for (c, v) in Channel::ALL.into_iter().zip(values) {
            frame.channel_mut(c)[[0, 0]] = v;
        }
        frame
    }

    #[test]
    fn zero_frame_renders_black_or_mid_gray() {
        let frame = TaylorFrame::zeros(3, 2);
        let img = render_taylor_frame(&frame, RenderMode::Magnitude, 4.0).unwrap();
        assert_eq!(img.dimensions(), (2, 3));
        assert!(img.pixels().all(|p| p.0 == [0, 0, 0]));
        let img = render_taylor_frame(&frame, RenderMode::Signed, 4.0).unwrap();
        assert!(img.pixels().all(|p| p.0 == [128, 128, 128]));
    }

    #[test]
    fn signed_fixture() {
        let img =
            render_taylor_frame(&one_pixel([0.5, -0.5, 0.0]), RenderMode::Signed, 1.0).unwrap();
        assert_eq!(img.get_pixel(0, 0).0, [191, 64, 128]);
    }

    #[test]
    fn magnitude_clips() {
        let img =
            render_taylor_frame(&one_pixel([0.1, -0.5, 0.01]), RenderMode::Magnitude, 4.0).unwrap();
        assert_eq!(img.get_pixel(0, 0).0, [102, 255, 10]);
    }

    #[test]
    fn invalid_gain() {
        let frame = TaylorFrame::zeros(1, 1);
        for gain in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                render_taylor_frame(&frame, RenderMode::Magnitude, gain),
                Err(VideoIoError::InvalidGain(_))
            ));
        }
    }

    #[test]
    fn file_names() {
        assert_eq!(frame_file_name(0), "taylor_000001.png");
        assert_eq!(frame_file_name(15), "taylor_000016.png");
    }

    proptest! {
        #[test]
        fn signed_mode_is_recoverable(v in -1.0f64..=1.0, gain in 0.25f64..8.0) {
            let v = v / gain;
            let img = render_taylor_frame(&one_pixel([v, 0.0, 0.0]), RenderMode::Signed, gain).unwrap();
            let b = f64::from(img.get_pixel(0, 0).0[0]);
            let decoded = (b / 127.5 - 1.0) / gain;
            prop_assert!((decoded - v).abs() <= 1.0 / (255.0 * gain) + 1e-12);
        }
    }
}
