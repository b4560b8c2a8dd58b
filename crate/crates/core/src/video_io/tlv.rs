use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array3;

use super::raw::{bad_magic, check_payload, dim_u32};
use super::{Result, VideoIoError};
use crate::taylor::{TaylorConfig, TaylorFrame, TaylorVideo};

pub const TLV_MAGIC: [u8; 4] = *b"TLV1";
pub const TLV_HEADER_LEN: usize = 36;

const DTYPE_F32: u8 = 0;
const FLAG_GRAY_AUGMENTED: u8 = 1;

/// Contents of a `TLV1` file: an `N x C x H x W` f32 tensor and the
/// transform parameters that produced it.
///
/// Layout (little-endian): magic `TLV1`, `u32` H, W, C, N, `u8` dtype
/// (0 = f32), `u8` flags (bit 0 = gray augmented), `u16` reserved, `u32` T,
/// n_terms, step, then the payload in `[frame][channel][row][col]` order.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorTensorFile {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub frames: usize,
    pub gray_augmented: bool,
    pub block_len: usize,
    pub n_terms: usize,
    pub step: usize,
    pub data: Vec<f32>,
}

impl TaylorTensorFile {
    pub fn from_video(tv: &TaylorVideo) -> Self {
        let cfg = tv.config();
        Self {
            height: tv.height(),
            width: tv.width(),
            channels: 3,
            frames: tv.len(),
            gray_augmented: cfg.gray_augment,
            block_len: cfg.block_len,
            n_terms: cfg.n_terms,
            step: cfg.step,
            data: tv.to_f32_vec(),
        }
    }

    pub fn config(&self) -> TaylorConfig {
        TaylorConfig::new(self.block_len, self.n_terms)
            .with_step(self.step)
            .with_gray_augment(self.gray_augmented)
    }

    fn expected_len(&self) -> Option<usize> {
        self.frames
            .checked_mul(self.channels)?
            .checked_mul(self.height)?
            .checked_mul(self.width)
    }

    fn check(&self) -> Result<()> {
        if self.height == 0 || self.width == 0 {
            return Err(VideoIoError::InvalidHeader(format!(
                "frame dimensions must be positive, got {}x{}",
                self.height, self.width
            )));
        }
        if !(1..=3).contains(&self.channels) {
            return Err(VideoIoError::InvalidHeader(format!(
                "channel count must be 1..=3, got {}",
                self.channels
            )));
        }
        Ok(())
    }

    pub fn into_video(self) -> Result<TaylorVideo> {
        if self.channels != 3 {
            return Err(VideoIoError::InvalidHeader(format!(
                "a Taylor video has 3 channels, file has {}",
                self.channels
            )));
        }
        let config = self.config();
        let plane = 3 * self.height * self.width;
        let frames = self
            .data
            .chunks_exact(plane)
            .map(|c| {
                let values = c.iter().map(|&v| f64::from(v)).collect();
                let arr = Array3::from_shape_vec((3, self.height, self.width), values)
                    .expect("frame shape");
                TaylorFrame::new(arr)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(TaylorVideo::new(frames, config, self.height, self.width)?)
    }
}

pub fn write_tensor_file(file: &TaylorTensorFile, mut writer: impl Write) -> Result<()> {
    file.check()?;
    let expected = file
        .expected_len()
        .ok_or_else(|| VideoIoError::InvalidHeader("dimensions overflow".to_string()))?;
    check_payload(expected * 4, file.data.len() * 4)?;

    let mut out = Vec::with_capacity(TLV_HEADER_LEN + file.data.len() * 4);
    out.extend_from_slice(&TLV_MAGIC);
    for dim in [file.height, file.width, file.channels, file.frames] {
        out.extend_from_slice(&dim_u32(dim)?.to_le_bytes());
    }
    out.push(DTYPE_F32);
    out.push(if file.gray_augmented {
        FLAG_GRAY_AUGMENTED
    } else {
        0
    });
    out.extend_from_slice(&0u16.to_le_bytes());
    for v in [file.block_len, file.n_terms, file.step] {
        out.extend_from_slice(&dim_u32(v)?.to_le_bytes());
    }
    for v in &file.data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    writer.write_all(&out)?;
    writer.flush()?;
    Ok(())
}

pub fn read_tensor_file(mut reader: impl Read) -> Result<TaylorTensorFile> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() < 4 || bytes[..4] != TLV_MAGIC {
        return Err(bad_magic(&bytes, TLV_MAGIC));
    }
    if bytes.len() < TLV_HEADER_LEN {
        return Err(VideoIoError::InvalidHeader(format!(
            "TLV1 header needs {TLV_HEADER_LEN} bytes, found {}",
            bytes.len()
        )));
    }
    let u32_at =
        |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes")) as usize;
    let dtype = bytes[20];
    if dtype != DTYPE_F32 {
        return Err(VideoIoError::UnsupportedDtype(dtype));
    }
    let mut file = TaylorTensorFile {
        height: u32_at(4),
        width: u32_at(8),
        channels: u32_at(12),
        frames: u32_at(16),
        gray_augmented: bytes[21] & FLAG_GRAY_AUGMENTED != 0,
        block_len: u32_at(24),
        n_terms: u32_at(28),
        step: u32_at(32),
        data: Vec::new(),
    };
    file.check()?;
    let expected = file
        .expected_len()
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| VideoIoError::InvalidHeader("dimensions overflow".to_string()))?;
    let payload = &bytes[TLV_HEADER_LEN..];
    check_payload(expected, payload.len())?;
    file.data = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
        .collect();
    Ok(file)
}

pub fn write_taylor(tv: &TaylorVideo, path: impl AsRef<Path>) -> Result<()> {
    let writer = BufWriter::new(File::create(path)?);
    write_tensor_file(&TaylorTensorFile::from_video(tv), writer)
}

pub fn read_taylor(path: impl AsRef<Path>) -> Result<TaylorVideo> {
    read_tensor_file(BufReader::new(File::open(path)?))?.into_video()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taylor::{taylor_video, GrayVideo};

    fn two_frame_video() -> TaylorVideo {
        let video = GrayVideo::from_vec(5, 1, 1, vec![0.0, 0.1, 0.3, 0.6, 1.0]).unwrap();
        taylor_video(&video, &TaylorConfig::new(4, 1)).unwrap()
    }

    fn encode(file: &TaylorTensorFile) -> Vec<u8> {
        let mut bytes = Vec::new();
        write_tensor_file(file, &mut bytes).unwrap();
        bytes
    }

    #[test]
    fn header_layout() {
        let tv = two_frame_video();
        let bytes = encode(&TaylorTensorFile::from_video(&tv));
        assert_eq!(bytes.len(), TLV_HEADER_LEN + 2 * 3 * 4);
        assert_eq!(&bytes[..4], b"TLV1");
        assert_eq!(
            &bytes[4..20],
            &[1, 0, 0, 0, 1, 0, 0, 0, 3, 0, 0, 0, 2, 0, 0, 0]
        );
        assert_eq!(&bytes[20..24], &[0, 0, 0, 0]);
        assert_eq!(&bytes[24..36], &[4, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0]);
        let first = f32::from_le_bytes(bytes[36..40].try_into().unwrap());
        assert_eq!(first, tv.frames()[0].data()[[0, 0, 0]] as f32);
    }

    #[test]
    fn round_trip_two_frames() {
        let tv = two_frame_video();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.tlv");
        write_taylor(&tv, &path).unwrap();
        let back = read_taylor(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back.config(), tv.config());
        assert_eq!(back.to_f32_vec(), tv.to_f32_vec());
    }

    #[test]
    fn gray_flag_round_trips() {
        let mut file = TaylorTensorFile::from_video(&two_frame_video());
        file.gray_augmented = true;
        let bytes = encode(&file);
        assert_eq!(bytes[21], 1);
        assert!(read_tensor_file(&bytes[..]).unwrap().gray_augmented);
    }

    #[test]
    fn bad_magic() {
        let mut bytes = encode(&TaylorTensorFile::from_video(&two_frame_video()));
        bytes[..4].copy_from_slice(b"XXXX");
        match read_tensor_file(&bytes[..]) {
            Err(VideoIoError::BadMagic { found, .. }) => assert_eq!(&found, b"XXXX"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn truncated_payload() {
        let mut bytes = encode(&TaylorTensorFile::from_video(&two_frame_video()));
        bytes.truncate(bytes.len() - 12);
        assert!(matches!(
            read_tensor_file(&bytes[..]),
            Err(VideoIoError::TruncatedPayload {
                expected: 24,
                found: 12
            })
        ));
    }

    #[test]
    fn unsupported_dtype_and_channels() {
        let file = TaylorTensorFile::from_video(&two_frame_video());
        let mut bytes = encode(&file);
        bytes[20] = 1;
        assert!(matches!(
            read_tensor_file(&bytes[..]),
            Err(VideoIoError::UnsupportedDtype(1))
        ));

        let mut bytes = encode(&file);
        bytes[12] = 4;
        assert!(matches!(
            read_tensor_file(&bytes[..]),
            Err(VideoIoError::InvalidHeader(_))
        ));
    }

    #[test]
    fn single_channel_file_is_not_a_taylor_video() {
        let file = TaylorTensorFile {
            height: 2,
            width: 3,
            channels: 1,
            frames: 1,
            gray_augmented: false,
            block_len: 4,
            n_terms: 1,
            step: 1,
            data: vec![0.5; 6],
        };
        let back = read_tensor_file(&encode(&file)[..]).unwrap();
        assert_eq!(back, file);
        assert!(back.into_video().is_err());
    }
}
