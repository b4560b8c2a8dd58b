use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use super::{Result, VideoIoError};
use crate::taylor::GrayVideo;

pub const RAW_MAGIC: [u8; 4] = *b"TGRY";
const HEADER_LEN: usize = 17;

/// Sample type of a `TGRY` payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawDtype {
    /// 8-bit samples, normalized as `v / 255`.
    U8 = 0,
    /// Little-endian `f32` samples in `[0, 1]`.
    F32 = 1,
}

impl RawDtype {
    fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(RawDtype::U8),
            1 => Ok(RawDtype::F32),
            other => Err(VideoIoError::UnsupportedDtype(other)),
        }
    }

    fn size(self) -> usize {
        match self {
            RawDtype::U8 => 1,
            RawDtype::F32 => 4,
        }
    }
}

fn le_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

/// Parses a `TGRY` stream: magic, `u32` height, width, frames, `u8` dtype,
/// then frame-major row-major samples.
pub fn read_raw_gray(mut reader: impl Read) -> Result<GrayVideo> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN {
        if bytes.len() >= 4 && bytes[..4] != RAW_MAGIC {
            return Err(bad_magic(&bytes, RAW_MAGIC));
        }
        return Err(VideoIoError::InvalidHeader(format!(
            "TGRY header needs {HEADER_LEN} bytes, found {}",
            bytes.len()
        )));
    }
    if bytes[..4] != RAW_MAGIC {
        return Err(bad_magic(&bytes, RAW_MAGIC));
    }
    let (h, w, t) = (
        le_u32(&bytes, 4) as usize,
        le_u32(&bytes, 8) as usize,
        le_u32(&bytes, 12) as usize,
    );
    let dtype = RawDtype::from_code(bytes[16])?;
    if h == 0 || w == 0 || t == 0 {
        return Err(VideoIoError::InvalidHeader(format!(
            "dimensions must be positive, got {t}x{h}x{w}"
        )));
    }
    let count = h
        .checked_mul(w)
        .and_then(|n| n.checked_mul(t))
        .ok_or_else(|| VideoIoError::InvalidHeader("dimensions overflow".to_string()))?;
    let payload = &bytes[HEADER_LEN..];
    let expected = count * dtype.size();
    check_payload(expected, payload.len())?;
    let data = match dtype {
        RawDtype::U8 => payload.iter().map(|&v| f64::from(v) / 255.0).collect(),
        RawDtype::F32 => payload
            .chunks_exact(4)
            .map(|c| f64::from(f32::from_le_bytes(c.try_into().expect("4 bytes"))))
            .collect(),
    };
    Ok(GrayVideo::from_vec(t, h, w, data)?)
}

pub fn read_raw_gray_file(path: impl AsRef<Path>) -> Result<GrayVideo> {
    read_raw_gray(BufReader::new(File::open(path)?))
}

/// Serializes `video` as `TGRY`. `U8` quantizes with `round(v * 255)`.
pub fn write_raw_gray(video: &GrayVideo, dtype: RawDtype, mut writer: impl Write) -> Result<()> {
    let mut out = Vec::with_capacity(HEADER_LEN + video.view().len() * dtype.size());
    out.extend_from_slice(&RAW_MAGIC);
    for dim in [video.height(), video.width(), video.num_frames()] {
        out.extend_from_slice(&dim_u32(dim)?.to_le_bytes());
    }
    out.push(dtype as u8);
    for &v in video.view().iter() {
        match dtype {
            RawDtype::U8 => out.push((v * 255.0).round() as u8),
            RawDtype::F32 => out.extend_from_slice(&(v as f32).to_le_bytes()),
        }
    }
    writer.write_all(&out)?;
    Ok(())
}

pub(super) fn dim_u32(dim: usize) -> Result<u32> {
    u32::try_from(dim)
        .map_err(|_| VideoIoError::InvalidHeader(format!("dimension {dim} exceeds u32")))
}

pub(super) fn bad_magic(bytes: &[u8], expected: [u8; 4]) -> VideoIoError {
    let mut found = [0u8; 4];
    let n = bytes.len().min(4);
    found[..n].copy_from_slice(&bytes[..n]);
    VideoIoError::BadMagic { found, expected }
}

pub(super) fn check_payload(expected: usize, found: usize) -> Result<()> {
    if found < expected {
        Err(VideoIoError::TruncatedPayload { expected, found })
    } else if found > expected {
        Err(VideoIoError::TrailingData(found - expected))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(h: u32, w: u32, t: u32, dtype: u8, payload: &[u8]) -> Vec<u8> {
        let mut b = RAW_MAGIC.to_vec();
        for v in [h, w, t] {
            b.extend_from_slice(&v.to_le_bytes());
        }
        b.push(dtype);
        b.extend_from_slice(payload);
        b
    }

    #[test]
    fn u8_samples_are_normalized() {
        let bytes = stream(1, 2, 2, 0, &[0, 255, 51, 102]);
        let video = read_raw_gray(&bytes[..]).unwrap();
        assert_eq!(video.num_frames(), 2);
        assert_eq!(video.frame(0)[[0, 1]], 1.0);
        assert_eq!(video.frame(1)[[0, 0]], 51.0 / 255.0);
        assert_eq!(video.frame(1)[[0, 1]], 102.0 / 255.0);
    }

    #[test]
    fn f32_round_trip() {
        let data: Vec<f64> = (0..12).map(|i| f64::from(i as f32 / 11.0)).collect();
        let video = GrayVideo::from_vec(3, 2, 2, data).unwrap();
        let mut bytes = Vec::new();
        write_raw_gray(&video, RawDtype::F32, &mut bytes).unwrap();
        assert_eq!(bytes.len(), HEADER_LEN + 48);
        assert_eq!(read_raw_gray(&bytes[..]).unwrap(), video);
    }

    #[test]
    fn u8_round_trip_on_grid_values() {
        let data: Vec<f64> = (0..8).map(|i| f64::from(i * 30) / 255.0).collect();
        let video = GrayVideo::from_vec(2, 2, 2, data).unwrap();
        let mut bytes = Vec::new();
        write_raw_gray(&video, RawDtype::U8, &mut bytes).unwrap();
        assert_eq!(read_raw_gray(&bytes[..]).unwrap(), video);
    }

    #[test]
    fn malformed_streams() {
        let mut bytes = stream(1, 1, 2, 0, &[1, 2]);
        bytes[..4].copy_from_slice(b"XXXX");
        assert!(matches!(
            read_raw_gray(&bytes[..]),
            Err(VideoIoError::BadMagic { .. })
        ));

        let bytes = stream(1, 1, 2, 0, &[1]);
        assert!(matches!(
            read_raw_gray(&bytes[..]),
            Err(VideoIoError::TruncatedPayload {
                expected: 2,
                found: 1
            })
        ));

        let bytes = stream(1, 1, 2, 7, &[1, 2]);
        assert!(matches!(
            read_raw_gray(&bytes[..]),
            Err(VideoIoError::UnsupportedDtype(7))
        ));

        let bytes = stream(1, 1, 1, 0, &[1, 2]);
        assert!(matches!(
            read_raw_gray(&bytes[..]),
            Err(VideoIoError::TrailingData(1))
        ));

        let bytes = stream(0, 1, 1, 0, &[]);
        assert!(matches!(
            read_raw_gray(&bytes[..]),
            Err(VideoIoError::InvalidHeader(_))
        ));

        let bytes = stream(1, 1, 1, 1, &2.0f32.to_le_bytes());
        assert!(matches!(
            read_raw_gray(&bytes[..]),
            Err(VideoIoError::Taylor(_))
        ));
    }
}
