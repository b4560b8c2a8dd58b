use ndarray::{Array2, Array3, Axis, Zip};

use crate::taylor::TaylorError;

/// BT.601 luma weights for (R, G, B).
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// `(height, width, 3)` RGB frame with channels in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbFrame {
    data: Array3<f64>,
}

impl RgbFrame {
    pub fn new(data: Array3<f64>) -> Result<Self, TaylorError> {
        let (h, w, c) = data.dim();
        if c != 3 || h == 0 || w == 0 {
            return Err(TaylorError::InvalidVideo(format!(
                "RGB frame must be HxWx3 with positive dims, got {h}x{w}x{c}"
            )));
        }
        if data.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(TaylorError::InvalidVideo(
                "RGB values must lie in [0, 1]".to_string(),
            ));
        }
        Ok(Self { data })
    }

    pub fn height(&self) -> usize {
        self.data.dim().0
    }

    pub fn width(&self) -> usize {
        self.data.dim().1
    }

    pub fn data(&self) -> &Array3<f64> {
        &self.data
    }
}

/// Luma of a single pixel.
///
/// Written as `g + wr (r - g) + wb (b - g)`, which equals the weighted sum
/// since the weights add to one and returns `v` exactly when `r = g = b = v`.
pub(crate) fn luma(r: f64, g: f64, b: f64) -> f64 {
    let [wr, _, wb] = LUMA_WEIGHTS;
    (g + wr * (r - g) + wb * (b - g)).clamp(0.0, 1.0)
}

pub fn rgb_to_gray(frame: &RgbFrame) -> Array2<f64> {
    let r = frame.data.index_axis(Axis(2), 0);
    let g = frame.data.index_axis(Axis(2), 1);
    let b = frame.data.index_axis(Axis(2), 2);
    Zip::from(&r)
        .and(&g)
        .and(&b)
        .map_collect(|&r, &g, &b| luma(r, g, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pixel(r: f64, g: f64, b: f64) -> f64 {
        let frame =
            RgbFrame::new(Array3::from_shape_vec((1, 1, 3), vec![r, g, b]).unwrap()).unwrap();
        rgb_to_gray(&frame)[[0, 0]]
    }

    #[test]
    fn luma_fixtures() {
        assert_eq!(pixel(1.0, 1.0, 1.0), 1.0);
        assert_eq!(pixel(0.0, 0.0, 0.0), 0.0);
        assert_eq!(pixel(1.0, 0.0, 0.0), 0.299);
        assert!((pixel(0.0, 1.0, 0.0) - 0.587).abs() < 1e-15);
        assert!((pixel(0.0, 0.0, 1.0) - 0.114).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_frames() {
        assert!(RgbFrame::new(Array3::zeros((2, 2, 4))).is_err());
        assert!(RgbFrame::new(Array3::from_elem((1, 1, 3), 1.1)).is_err());
    }

    proptest! {
        #[test]
        fn gray_inputs_pass_through(v in 0.0f64..=1.0) {
            prop_assert_eq!(pixel(v, v, v), v);
        }

        #[test]
        fn matches_weighted_sum(r in 0.0f64..=1.0, g in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let direct = 0.299 * r + 0.587 * g + 0.114 * b;
            let got = pixel(r, g, b);
            prop_assert!((got - direct).abs() < 1e-15);
            prop_assert!((0.0..=1.0).contains(&got));
        }
    }
}
