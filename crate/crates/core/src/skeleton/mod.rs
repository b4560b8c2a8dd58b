//! Taylor skeleton sequences.
//!
//! Every `(joint, coordinate)` trajectory is treated like the intensity
//! trajectory of a single pixel: a `J x C` skeleton frame is laid out as a
//! `J x C` image, so the video kernels apply unchanged. By default only the
//! displacement channel is kept, computed with one term over four-frame
//! blocks at stride one.

mod csv_io;

use ndarray::{s, Array2, Array3, Array4, ArrayView2, ArrayView3, Axis};
use rayon::prelude::*;
use thiserror::Error;

use crate::taylor::{taylor_frame_fast, Channel, TaylorConfig, TaylorError};
use crate::video_io::TaylorTensorFile;

pub use csv_io::{read_skeleton_csv, write_sequence_csv, write_taylor_skeleton_csv};

#[derive(Debug, Error)]
pub enum SkeletonError {
    #[error("sequence has {frames} frames but the window needs {window}")]
    SequenceTooShort { frames: usize, window: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<TaylorError> for SkeletonError {
    fn from(e: TaylorError) -> Self {
        match e {
            TaylorError::VideoTooShort { frames, window } => {
                SkeletonError::SequenceTooShort { frames, window }
            }
            TaylorError::InvalidConfig(msg) => SkeletonError::InvalidConfig(msg),
            other @ TaylorError::InsufficientFrames { .. } => {
                SkeletonError::InvalidConfig(other.to_string())
            }
            other => SkeletonError::InvalidSequence(other.to_string()),
        }
    }
}

impl SkeletonError {
    pub fn name(&self) -> &'static str {
        match self {
            SkeletonError::SequenceTooShort { .. } => "SequenceTooShort",
            SkeletonError::InvalidConfig(_) => "InvalidConfig",
            SkeletonError::InvalidSequence(_) => "InvalidSequence",
            SkeletonError::Parse { .. } => "ParseError",
            SkeletonError::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, SkeletonError>;

/// Joint coordinates stored as `(frames, joints, coords)`, with optional
/// per-joint confidence `(frames, joints)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonSequence {
    coords: Array3<f64>,
    confidence: Option<Array2<f64>>,
}

impl SkeletonSequence {
    pub fn new(coords: Array3<f64>, confidence: Option<Array2<f64>>) -> Result<Self> {
        let (frames, joints, dims) = coords.dim();
        if frames == 0 || joints == 0 || dims == 0 {
            return Err(SkeletonError::InvalidSequence(format!(
                "dimensions must be positive, got {frames}x{joints}x{dims}"
            )));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(SkeletonError::InvalidSequence(
                "coordinates must be finite".to_string(),
            ));
        }
        if let Some(conf) = &confidence {
            if conf.dim() != (frames, joints) {
                return Err(SkeletonError::InvalidSequence(format!(
                    "confidence shape {:?} does not match ({frames}, {joints})",
                    conf.dim()
                )));
            }
            if conf.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(SkeletonError::InvalidSequence(
                    "confidence must lie in [0, 1]".to_string(),
                ));
            }
        }
        Ok(Self { coords, confidence })
    }

    pub fn num_frames(&self) -> usize {
        self.coords.dim().0
    }

    pub fn num_joints(&self) -> usize {
        self.coords.dim().1
    }

    pub fn num_coords(&self) -> usize {
        self.coords.dim().2
    }

    pub fn coords(&self) -> ArrayView3<'_, f64> {
        self.coords.view()
    }

    pub fn confidence(&self) -> Option<ArrayView2<'_, f64>> {
        self.confidence.as_ref().map(|c| c.view())
    }

    /// Rescales each coordinate axis to `[0, 1]` using its min and max over
    /// all frames and joints. Constant axes map to 0.
    pub fn normalized(&self) -> Self {
        let mut coords = self.coords.clone();
        for mut axis in coords.axis_iter_mut(Axis(2)) {
            let (lo, hi) = axis
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                    (lo.min(v), hi.max(v))
                });
            let range = hi - lo;
            axis.mapv_inplace(|v| if range > 0.0 { (v - lo) / range } else { 0.0 });
        }
        Self {
            coords,
            confidence: self.confidence.clone(),
        }
    }
}

/// Which Taylor channels to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SkeletonChannels {
    #[default]
    Displacement,
    All,
}

impl SkeletonChannels {
    pub fn channels(self) -> &'static [Channel] {
        match self {
            SkeletonChannels::Displacement => &[Channel::Displacement],
            SkeletonChannels::All => &Channel::ALL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoordinateMode {
    /// Coordinates are used in their native units.
    #[default]
    Raw,
    /// Per-axis min-max scaling to `[0, 1]` before the transform.
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkeletonConfig {
    pub block_len: usize,
    pub n_terms: usize,
    pub step: usize,
    pub channels: SkeletonChannels,
    pub coordinates: CoordinateMode,
}

impl Default for SkeletonConfig {
    fn default() -> Self {
        Self {
            block_len: 4,
            n_terms: 1,
            step: 1,
            channels: SkeletonChannels::Displacement,
            coordinates: CoordinateMode::Raw,
        }
    }
}

impl SkeletonConfig {
    fn taylor(&self) -> TaylorConfig {
        TaylorConfig::new(self.block_len, self.n_terms).with_step(self.step)
    }
}

/// Output of [`skeleton_taylor`]: `(frames, channels, joints, coords)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSkeletonSequence {
    data: Array4<f64>,
    channels: Vec<Channel>,
    confidence: Option<Array2<f64>>,
    config: SkeletonConfig,
}

impl TaylorSkeletonSequence {
    pub fn num_frames(&self) -> usize {
        self.data.dim().0
    }

    pub fn num_joints(&self) -> usize {
        self.data.dim().2
    }

    pub fn num_coords(&self) -> usize {
        self.data.dim().3
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn data(&self) -> &Array4<f64> {
        &self.data
    }

    /// `(joints, coords)` map of one channel at output frame `index`.
    ///
    /// Panics if `channel` was not computed.
    pub fn channel(&self, index: usize, channel: Channel) -> ArrayView2<'_, f64> {
        let pos = self
            .channels
            .iter()
            .position(|&c| c == channel)
            .unwrap_or_else(|| panic!("channel {channel:?} not computed"));
        self.data.slice(s![index, pos, .., ..])
    }

    /// Confidence of the first frame of each block, `(frames, joints)`.
    pub fn confidence(&self) -> Option<ArrayView2<'_, f64>> {
        self.confidence.as_ref().map(|c| c.view())
    }

    pub fn config(&self) -> &SkeletonConfig {
        &self.config
    }

    /// `TLV1` payload with `H = joints`, `W = coords`, one channel per
    /// computed concept. Confidence is not stored.
    pub fn to_tensor_file(&self) -> TaylorTensorFile {
        TaylorTensorFile {
            height: self.num_joints(),
            width: self.num_coords(),
            channels: self.channels.len(),
            frames: self.num_frames(),
            gray_augmented: false,
            block_len: self.config.block_len,
            n_terms: self.config.n_terms,
            step: self.config.step,
            data: self.data.iter().map(|&v| v as f32).collect(),
        }
    }
}

pub fn skeleton_taylor(
    seq: &SkeletonSequence,
    cfg: &SkeletonConfig,
) -> Result<TaylorSkeletonSequence> {
    let taylor = cfg.taylor();
    taylor.validate()?;
    let normalized;
    let source = match cfg.coordinates {
        CoordinateMode::Raw => seq,
        CoordinateMode::Normalized => {
            normalized = seq.normalized();
            &normalized
        }
    };
    let blocks = crate::taylor::windows(source.coords(), cfg.block_len, cfg.step)?;
    let frames = blocks
        .par_iter()
        .map(|b| taylor_frame_fast(b, cfg.n_terms))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let channels = cfg.channels.channels();
    let (joints, dims) = (seq.num_joints(), seq.num_coords());
    let mut data = Array4::zeros((frames.len(), channels.len(), joints, dims));
    for (mut out, frame) in data.outer_iter_mut().zip(&frames) {
        for (mut slot, &c) in out.outer_iter_mut().zip(channels) {
            slot.assign(&frame.channel(c));
        }
    }
    let confidence = seq.confidence.as_ref().map(|conf| {
        Array2::from_shape_fn((frames.len(), joints), |(i, j)| conf[[i * cfg.step, j]])
    });
    Ok(TaylorSkeletonSequence {
        data,
        channels: channels.to_vec(),
        confidence,
        config: *cfg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taylor::{taylor_frame_reference, TemporalBlock};

    fn trajectory(values: &[f64]) -> SkeletonSequence {
        let coords = Array3::from_shape_vec((values.len(), 1, 1), values.to_vec()).unwrap();
        SkeletonSequence::new(coords, None).unwrap()
    }

    fn walking(frames: usize) -> SkeletonSequence {
        let coords = Array3::from_shape_fn((frames, 5, 3), |(t, j, c)| {
            let t = t as f64;
            (j as f64 * 0.3 + c as f64).sin() + 0.05 * t * (j + 1) as f64 + 0.01 * t * t
        });
        SkeletonSequence::new(coords, None).unwrap()
    }

    #[test]
    fn single_trajectory_fixture() {
        let out = skeleton_taylor(
            &trajectory(&[0.0, 0.1, 0.3, 0.6]),
            &SkeletonConfig::default(),
        )
        .unwrap();
        assert_eq!(out.num_frames(), 1);
        assert_eq!(out.channels(), &[Channel::Displacement]);
        assert!((out.channel(0, Channel::Displacement)[[0, 0]] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn static_skeleton_is_zero() {
        let coords = Array3::from_shape_fn((9, 4, 2), |(_, j, c)| (j * 2 + c) as f64 * 10.0);
        let seq = SkeletonSequence::new(coords, None).unwrap();
        let out = skeleton_taylor(&seq, &SkeletonConfig::default()).unwrap();
        assert_eq!(out.num_frames(), 6);
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn translating_joint_has_constant_displacement() {
        let offsets = [0.5, -2.0, 12.25];
        let coords = Array3::from_shape_fn((10, 1, 3), |(t, _, c)| 100.0 + t as f64 * offsets[c]);
        let seq = SkeletonSequence::new(coords, None).unwrap();
        let out = skeleton_taylor(&seq, &SkeletonConfig::default()).unwrap();
        assert_eq!(out.num_frames(), 7);
        for i in 0..7 {
            for (c, &o) in offsets.iter().enumerate() {
                assert!((out.channel(i, Channel::Displacement)[[0, c]] - o).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn matches_reference_displacement_pointwise() {
        let seq = walking(12);
        let out = skeleton_taylor(&seq, &SkeletonConfig::default()).unwrap();
        assert_eq!(out.num_frames(), 9);
        for j in 0..5 {
            for c in 0..3 {
                let traj: Vec<f64> = seq.coords().slice(s![.., j, c]).to_vec();
                for i in 0..9 {
                    let block = Array3::from_shape_vec((4, 1, 1), traj[i..i + 4].to_vec()).unwrap();
                    let r = taylor_frame_reference(&TemporalBlock::new(block.view()).unwrap(), 1)
                        .unwrap();
                    let got = out.channel(i, Channel::Displacement)[[j, c]];
                    assert!((got - r.channel(Channel::Displacement)[[0, 0]]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn all_channels_and_confidence_alignment() {
        let seq = walking(11);
        let conf = Array2::from_shape_fn((11, 5), |(t, j)| ((t + j) % 10) as f64 / 10.0);
        let seq = SkeletonSequence::new(seq.coords().to_owned(), Some(conf.clone())).unwrap();
        let cfg = SkeletonConfig {
            block_len: 5,
            n_terms: 2,
            step: 2,
            channels: SkeletonChannels::All,
            ..SkeletonConfig::default()
        };
        let out = skeleton_taylor(&seq, &cfg).unwrap();
        assert_eq!(out.num_frames(), 4);
        assert_eq!(out.data().dim(), (4, 3, 5, 3));
        let c = out.confidence().unwrap();
        for i in 0..4 {
            assert_eq!(c.row(i), conf.row(2 * i));
        }
    }

    #[test]
    fn normalized_mode_rescales_axes() {
        let seq = walking(8).normalized();
        for axis in seq.coords().axis_iter(Axis(2)) {
            let lo = axis.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = axis.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!((lo, hi), (0.0, 1.0));
        }
        let cfg = SkeletonConfig {
            coordinates: CoordinateMode::Normalized,
            ..SkeletonConfig::default()
        };
        let out = skeleton_taylor(&walking(8), &cfg).unwrap();
        let direct = skeleton_taylor(&seq, &SkeletonConfig::default()).unwrap();
        assert_eq!(out.data(), direct.data());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            skeleton_taylor(&trajectory(&[0.0, 0.1, 0.2]), &SkeletonConfig::default()),
            Err(SkeletonError::SequenceTooShort {
                frames: 3,
                window: 4
            })
        ));
        let cfg = SkeletonConfig {
            n_terms: 2,
            ..SkeletonConfig::default()
        };
        match skeleton_taylor(&trajectory(&[0.0; 6]), &cfg) {
            Err(SkeletonError::InvalidConfig(msg)) => assert!(msg.contains("at most 1 terms")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(SkeletonSequence::new(Array3::from_elem((2, 1, 1), f64::NAN), None).is_err());
        assert!(
            SkeletonSequence::new(Array3::zeros((2, 2, 1)), Some(Array2::zeros((2, 3)))).is_err()
        );
    }

    #[test]
    fn tensor_file_layout() {
        let out = skeleton_taylor(&walking(6), &SkeletonConfig::default()).unwrap();
        let file = out.to_tensor_file();
        assert_eq!(
            (file.height, file.width, file.channels, file.frames),
            (5, 3, 1, 3)
        );
        assert_eq!(file.data.len(), 3 * 5 * 3);
    }
}
