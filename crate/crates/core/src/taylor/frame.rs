use ndarray::{Array3, ArrayView2, ArrayViewMut2, Axis, Zip};

use super::config::check_terms;
use super::difference::{difference_stack, leading_differences_into};
use super::{Result, TaylorError, TemporalBlock};

/// Output channel of a Taylor frame, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Displacement = 0,
    Velocity = 1,
    Acceleration = 2,
}

impl Channel {
    pub const ALL: [Channel; 3] = [
        Channel::Displacement,
        Channel::Velocity,
        Channel::Acceleration,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Difference order feeding the `k = 0` term of this channel.
    pub fn base_order(self) -> usize {
        self.index() + 1
    }
}

/// Signed `(3, height, width)` motion map: displacement, velocity,
/// acceleration.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorFrame {
    data: Array3<f64>,
}

impl TaylorFrame {
    pub fn new(data: Array3<f64>) -> Result<Self> {
        let (c, h, w) = data.dim();
        if c != 3 {
            return Err(TaylorError::InvalidVideo(format!(
                "a Taylor frame has 3 channels, got {c}"
            )));
        }
        if h == 0 || w == 0 {
            return Err(TaylorError::InvalidVideo(
                "Taylor frame dimensions must be positive".to_string(),
            ));
        }
        Ok(Self { data })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            data: Array3::zeros((3, height, width)),
        }
    }

    pub fn height(&self) -> usize {
        self.data.dim().1
    }

    pub fn width(&self) -> usize {
        self.data.dim().2
    }

    pub fn channel(&self, channel: Channel) -> ArrayView2<'_, f64> {
        self.data.index_axis(Axis(0), channel.index())
    }

    pub fn channel_mut(&mut self, channel: Channel) -> ArrayViewMut2<'_, f64> {
        self.data.index_axis_mut(Axis(0), channel.index())
    }

    pub fn data(&self) -> &Array3<f64> {
        &self.data
    }

    pub fn into_inner(self) -> Array3<f64> {
        self.data
    }
}

/// `1/k!` for `k in 0..n`, from exact integer factorials.
fn inverse_factorials(n: usize) -> Vec<f64> {
    let mut fact: u128 = 1;
    (0..n)
        .map(|k| {
            if k > 0 {
                fact *= k as u128;
            }
            1.0 / fact as f64
        })
        .collect()
}

/// Evaluates the per-frame expansion directly: for every `(tau, k)` the
/// Hadamard power `(F_tau - F_1)^k` is formed and each channel accumulates
/// `D[k + offset] / k!` times it, then the sums are averaged over the block.
pub fn taylor_frame_reference(block: &TemporalBlock<'_>, n_terms: usize) -> Result<TaylorFrame> {
    let stack = difference_stack(block, n_terms)?;
    let inv_fact = inverse_factorials(n_terms);
    let len = block.len();
    let first = block.first_frame();
    let mut out = TaylorFrame::zeros(block.height(), block.width());
    for tau in 0..len {
        let offset = &block.frame(tau) - &first;
        for (k, &scale) in inv_fact.iter().enumerate() {
            let power = offset.mapv(|x| x.powi(k as i32));
            for channel in Channel::ALL {
                let deriv = stack.order(k + channel.base_order());
                Zip::from(out.channel_mut(channel))
                    .and(&deriv)
                    .and(&power)
                    .for_each(|m, &d, &p| *m += d * scale * p);
            }
        }
    }
    out.data.mapv_inplace(|v| v / len as f64);
    Ok(out)
}

/// Pixels processed together by the fast kernel; sized to keep a tile's
/// trajectories in L1 for typical block lengths.
const TILE: usize = 256;

/// Tensor form of the expansion: the power means `mean_tau((F_tau - F_1)^k)`
/// are accumulated once per `k` and shared by all three channels.
pub fn taylor_frame_fast(block: &TemporalBlock<'_>, n_terms: usize) -> Result<TaylorFrame> {
    check_terms(block.len(), n_terms)?;
    let (h, w) = (block.height(), block.width());
    let plane = h * w;
    let len = block.len();
    let view = block.view();
    let owned: Vec<f64>;
    let data = match view.as_slice() {
        Some(slice) => slice,
        None => {
            owned = view.iter().copied().collect();
            &owned
        }
    };
    let inv_len = 1.0 / len as f64;
    let scales: Vec<f64> = inverse_factorials(n_terms)
        .into_iter()
        .map(|f| f * inv_len)
        .collect();

    let mut out = vec![0.0; 3 * plane];
    let mut traj = vec![0.0; len * TILE];
    let mut means = vec![0.0; n_terms * TILE];
    let mut power = vec![0.0; TILE];
    let mut diffs = Vec::with_capacity((n_terms + 2) * TILE);
    for start in (0..plane).step_by(TILE) {
        let width = TILE.min(plane - start);
        let traj = &mut traj[..len * width];
        for (t, row) in traj.chunks_exact_mut(width).enumerate() {
            row.copy_from_slice(&data[t * plane + start..t * plane + start + width]);
        }

        // means[k * width + p] = sum_tau (F_tau[p] - F_1[p])^k
        let means = &mut means[..n_terms * width];
        let power = &mut power[..width];
        means.fill(0.0);
        let (first, _) = traj.split_at(width);
        for row in traj.chunks_exact(width) {
            power.fill(1.0);
            for (k, mean) in means.chunks_exact_mut(width).enumerate() {
                for (m, &p) in mean.iter_mut().zip(power.iter()) {
                    *m += p;
                }
                if k + 1 < n_terms {
                    for ((p, &f), &f1) in power.iter_mut().zip(row).zip(first) {
                        *p *= f - f1;
                    }
                }
            }
        }
        for (mean, &scale) in means.chunks_exact_mut(width).zip(&scales) {
            for m in mean.iter_mut() {
                *m *= scale;
            }
        }

        leading_differences_into(traj, width, len, n_terms + 2, &mut diffs);
        for (channel, acc) in Channel::ALL.into_iter().zip(out.chunks_exact_mut(plane)) {
            let acc = &mut acc[start..start + width];
            let base = channel.base_order() - 1;
            for (k, mean) in means.chunks_exact(width).enumerate() {
                let deriv = &diffs[(base + k) * width..(base + k + 1) * width];
                for ((a, &d), &m) in acc.iter_mut().zip(deriv).zip(mean) {
                    *a += d * m;
                }
            }
        }
    }
    TaylorFrame::new(Array3::from_shape_vec((3, h, w), out).expect("frame shape"))
}

/// Adds `gray` to every channel of `frame`, without clamping.
pub fn gray_augment(frame: &TaylorFrame, gray: ArrayView2<'_, f64>) -> Result<TaylorFrame> {
    let expected = (frame.height(), frame.width());
    if gray.dim() != expected {
        return Err(TaylorError::ShapeMismatch {
            expected,
            found: gray.dim(),
        });
    }
    let mut out = frame.clone();
    for mut channel in out.data.outer_iter_mut() {
        channel += &gray;
    }
    Ok(out)
}
