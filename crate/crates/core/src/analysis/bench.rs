use std::hint::black_box;
use std::time::Instant;

use serde::Serialize;

use super::{AnalysisError, Result};
use crate::taylor::{taylor_video_with, Execution, GrayVideo, Kernel, TaylorConfig};

/// Iterations run and discarded before timing each kernel.
pub const DEFAULT_WARMUP: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchOptions {
    /// Timed runs per (config, kernel); at least 3.
    pub repeats: usize,
    pub warmup: usize,
    /// Time the reference kernel as well as the fast one.
    pub reference: bool,
    /// Additionally time the fast kernel with blocks evaluated in parallel.
    pub parallel: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            repeats: 5,
            warmup: DEFAULT_WARMUP,
            reference: true,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelTiming {
    /// `reference` or `fast`.
    pub path: &'static str,
    pub parallel: bool,
    /// Median over runs of (run time / frames produced).
    pub ms_per_frame: f64,
    /// Median absolute deviation of the per-run times.
    pub mad_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigTiming {
    pub n_terms: usize,
    #[serde(rename = "T")]
    pub block_len: usize,
    #[serde(rename = "H")]
    pub height: usize,
    #[serde(rename = "W")]
    pub width: usize,
    /// Taylor frames produced per run.
    pub frames: usize,
    pub timings: Vec<KernelTiming>,
}

impl ConfigTiming {
    /// Sequential median time per frame of `kernel`.
    pub fn ms_per_frame(&self, kernel: Kernel) -> Option<f64> {
        self.timings
            .iter()
            .find(|t| t.path == kernel.name() && !t.parallel)
            .map(|t| t.ms_per_frame)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingReport {
    pub entries: Vec<ConfigTiming>,
}

impl TimingReport {
    pub fn entry(&self, block_len: usize, n_terms: usize) -> Option<&ConfigTiming> {
        self.entries
            .iter()
            .find(|e| e.block_len == block_len && e.n_terms == n_terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn time_kernel(
    video: &GrayVideo,
    cfg: &TaylorConfig,
    kernel: Kernel,
    execution: Execution,
    opts: &BenchOptions,
) -> Result<KernelTiming> {
    for _ in 0..opts.warmup {
        black_box(taylor_video_with(video, cfg, kernel, execution)?);
    }
    let mut per_frame = Vec::with_capacity(opts.repeats);
    for _ in 0..opts.repeats {
        let start = Instant::now();
        let tv = black_box(taylor_video_with(video, cfg, kernel, execution)?);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        per_frame.push(ms / tv.len() as f64);
    }
    per_frame.sort_by(f64::total_cmp);
    let med = median(&per_frame);
    let mut dev: Vec<f64> = per_frame.iter().map(|t| (t - med).abs()).collect();
    dev.sort_by(f64::total_cmp);
    Ok(KernelTiming {
        path: kernel.name(),
        parallel: execution == Execution::Parallel,
        ms_per_frame: med,
        mad_ms: median(&dev),
        min_ms: per_frame[0],
        max_ms: per_frame[per_frame.len() - 1],
        samples: per_frame.len(),
    })
}

/// Times every config on `video`. Each kernel gets `warmup` discarded runs
/// followed by `repeats` timed runs over the whole video; the reported figure
/// is the median of total time divided by frames produced.
pub fn bench_taylor(
    video: &GrayVideo,
    configs: &[TaylorConfig],
    opts: &BenchOptions,
) -> Result<TimingReport> {
    if opts.repeats < 3 {
        return Err(AnalysisError::InvalidConfig(format!(
            "repeats must be at least 3, got {}",
            opts.repeats
        )));
    }
    for cfg in configs {
        cfg.validate()?;
        if video.num_frames() < cfg.block_len {
            return Err(crate::taylor::TaylorError::VideoTooShort {
                frames: video.num_frames(),
                window: cfg.block_len,
            }
            .into());
        }
    }
    let mut entries = Vec::with_capacity(configs.len());
    for cfg in configs {
        let mut timings = Vec::new();
        if opts.reference {
            timings.push(time_kernel(
                video,
                cfg,
                Kernel::Reference,
                Execution::Sequential,
                opts,
            )?);
        }
        timings.push(time_kernel(
            video,
            cfg,
            Kernel::Fast,
            Execution::Sequential,
            opts,
        )?);
        if opts.parallel {
            timings.push(time_kernel(
                video,
                cfg,
                Kernel::Fast,
                Execution::Parallel,
                opts,
            )?);
        }
        entries.push(ConfigTiming {
            n_terms: cfg.n_terms,
            block_len: cfg.block_len,
            height: video.height(),
            width: video.width(),
            frames: cfg.output_len(video.num_frames()),
            timings,
        });
    }
    Ok(TimingReport { entries })
}

/// True when each value is at least the previous one divided by `slack`.
pub fn nondecreasing_within(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] * slack >= w[0])
}
