use ndarray::{Array2, ArrayView2};

use super::config::check_terms;
use super::{Result, TemporalBlock};

/// First map of each forward-difference order `1..=n_terms + 2` of a block.
///
/// Order 1 is `F_2 - F_1`, order 2 is the velocity map at `F_1`, order 3 the
/// acceleration map, order 4 the jerk map, and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceStack {
    maps: Vec<Array2<f64>>,
}

impl DifferenceStack {
    /// Map of difference order `order` (1-based).
    ///
    /// Panics if `order` is 0 or beyond [`DifferenceStack::max_order`].
    pub fn order(&self, order: usize) -> ArrayView2<'_, f64> {
        assert!(
            (1..=self.maps.len()).contains(&order),
            "difference order {order} outside 1..={}",
            self.maps.len()
        );
        self.maps[order - 1].view()
    }

    pub fn max_order(&self) -> usize {
        self.maps.len()
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

pub fn difference_stack(block: &TemporalBlock<'_>, n_terms: usize) -> Result<DifferenceStack> {
    check_terms(block.len(), n_terms)?;
    let (h, w) = (block.height(), block.width());
    let mut buf: Vec<f64> = block.view().iter().copied().collect();
    let orders = n_terms + 2;
    let flat = leading_differences(&mut buf, h * w, block.len(), orders);
    let maps = flat
        .chunks_exact(h * w)
        .map(|c| Array2::from_shape_vec((h, w), c.to_vec()).expect("plane size"))
        .collect();
    Ok(DifferenceStack { maps })
}

/// Repeatedly forward-differences `frames` planes of `plane` values in place
/// and returns the leading plane of orders `1..=orders`, concatenated.
///
/// After order `j` only the first `frames - j` planes of `buf` are valid.
pub(crate) fn leading_differences(
    buf: &mut [f64],
    plane: usize,
    frames: usize,
    orders: usize,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(orders * plane);
    leading_differences_into(buf, plane, frames, orders, &mut out);
    out
}

/// As [`leading_differences`], writing into a reused buffer.
pub(crate) fn leading_differences_into(
    buf: &mut [f64],
    plane: usize,
    frames: usize,
    orders: usize,
    out: &mut Vec<f64>,
) {
    debug_assert!(orders < frames);
    debug_assert_eq!(buf.len(), plane * frames);
    out.clear();
    for order in 1..=orders {
        for t in 0..frames - order {
            let (head, tail) = buf.split_at_mut((t + 1) * plane);
            let cur = &mut head[t * plane..];
            for (c, n) in cur.iter_mut().zip(&tail[..plane]) {
                *c = *n - *c;
            }
        }
        out.extend_from_slice(&buf[..plane]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taylor::TaylorError;
    use ndarray::Array3;

    fn block_1x1(values: &[f64]) -> Array3<f64> {
        Array3::from_shape_vec((values.len(), 1, 1), values.to_vec()).unwrap()
    }

    /// Binomial form of the order-`j` forward difference at index 0.
    fn binomial_difference(values: &[f64], order: usize) -> f64 {
        let mut binom = 1.0;
        let mut sum = 0.0;
        for (i, &v) in values.iter().enumerate().take(order + 1) {
            let sign = if (order - i).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sum += sign * binom * v;
            binom = binom * (order - i) as f64 / (i + 1) as f64;
        }
        sum
    }

    #[test]
    fn four_frame_fixture() {
        let data = block_1x1(&[0.0, 0.1, 0.3, 0.6]);
        let block = TemporalBlock::new(data.view()).unwrap();
        let stack = difference_stack(&block, 1).unwrap();
        assert_eq!(stack.len(), 3);
        let expect = [0.1, 0.1, 0.0];
        for (j, e) in expect.iter().enumerate() {
            assert!((stack.order(j + 1)[[0, 0]] - e).abs() < 1e-12);
        }
    }

    #[test]
    fn five_frame_fixture() {
        let data = block_1x1(&[0.0, 0.1, 0.3, 0.6, 1.0]);
        let block = TemporalBlock::new(data.view()).unwrap();
        let stack = difference_stack(&block, 2).unwrap();
        assert_eq!(stack.len(), 4);
        let expect = [0.1, 0.1, 0.0, 0.0];
        for (j, e) in expect.iter().enumerate() {
            assert!((stack.order(j + 1)[[0, 0]] - e).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_block_has_zero_differences() {
        let data = Array3::from_elem((4, 3, 2), 0.7);
        let block = TemporalBlock::new(data.view()).unwrap();
        let stack = difference_stack(&block, 1).unwrap();
        for j in 1..=3 {
            assert!(stack.order(j).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn matches_binomial_oracle() {
        let values = [0.12, 0.9, 0.33, 0.41, 0.05, 0.77, 0.64, 0.2];
        let data = Array3::from_shape_fn((values.len(), 2, 1), |(t, r, _)| {
            if r == 0 {
                values[t]
            } else {
                1.0 - values[t]
            }
        });
        let block = TemporalBlock::new(data.view()).unwrap();
        let stack = difference_stack(&block, 5).unwrap();
        let mirrored: Vec<f64> = values.iter().map(|v| 1.0 - v).collect();
        for j in 1..=7 {
            assert!((stack.order(j)[[0, 0]] - binomial_difference(&values, j)).abs() < 1e-12);
            assert!((stack.order(j)[[1, 0]] - binomial_difference(&mirrored, j)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_too_many_terms() {
        let data = block_1x1(&[0.0, 0.1, 0.3, 0.6]);
        let block = TemporalBlock::new(data.view()).unwrap();
        assert_eq!(
            difference_stack(&block, 2).unwrap_err(),
            TaylorError::InsufficientFrames {
                window: 4,
                n_terms: 2
            }
        );
    }

    #[test]
    #[should_panic]
    fn order_zero_panics() {
        let data = block_1x1(&[0.0, 0.1, 0.3, 0.6]);
        let block = TemporalBlock::new(data.view()).unwrap();
        let _ = difference_stack(&block, 1).unwrap().order(0);
    }
}
