use std::fmt;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use taylor_video::analysis::{
    aggregate_report, bench_taylor, read_manifest, AnalysisError, BenchOptions,
};
use taylor_video::skeleton::{
    read_skeleton_csv, skeleton_taylor, write_taylor_skeleton_csv, CoordinateMode,
    SkeletonChannels, SkeletonConfig, SkeletonError,
};
use taylor_video::video_io::{
    read_image_sequence, read_raw_gray_file, read_taylor, write_png_sequence, write_taylor,
    write_tensor_file, RenderMode, VideoIoError,
};
use taylor_video::{taylor_video_with, Execution, GrayVideo, Kernel, TaylorConfig, TaylorError};

use crate::{Channels, Mode};

const BENCH_HEIGHT: usize = 240;
const BENCH_WIDTH: usize = 320;
/// Blocks produced by a synthetic bench video at stride one.
const BENCH_BLOCKS: usize = 10;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Config(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Input(msg) => f.write_str(msg),
        }
    }
}

impl From<TaylorError> for CliError {
    fn from(e: TaylorError) -> Self {
        match e {
            TaylorError::InvalidVideo(_) => CliError::Input(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<VideoIoError> for CliError {
    fn from(e: VideoIoError) -> Self {
        match e {
            VideoIoError::Taylor(inner) => inner.into(),
            VideoIoError::InvalidGain(_) => CliError::Config(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SkeletonError> for CliError {
    fn from(e: SkeletonError) -> Self {
        match e {
            SkeletonError::SequenceTooShort { .. } | SkeletonError::InvalidConfig(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Taylor(inner) => inner.into(),
            AnalysisError::InvalidConfig(_) => CliError::Config(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Reads a directory of images or a `TGRY` file.
fn load_video(input: &Path) -> Result<GrayVideo> {
    if input.is_dir() {
        Ok(read_image_sequence(input)?)
    } else {
        read_raw_gray_file(input).map_err(|e| match e {
            VideoIoError::Io(io) => io_error(input, io),
            other => other.into(),
        })
    }
}

pub fn convert(
    input: &Path,
    window: usize,
    terms: usize,
    step: usize,
    gray_augment: bool,
    output: &Path,
    threads: Option<usize>,
) -> Result<String> {
    let cfg = TaylorConfig::new(window, terms)
        .with_step(step)
        .with_gray_augment(gray_augment);
    cfg.validate()?;
    let execution = match threads {
        Some(0) => return Err(CliError::Config("--threads must be at least 1".into())),
        Some(1) => Execution::Sequential,
        _ => Execution::Parallel,
    };
    let video = load_video(input)?;
    let start = Instant::now();
    let run = || taylor_video_with(&video, &cfg, Kernel::Fast, execution);
    let tv = match threads {
        Some(n) if n > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("cannot start {n} threads: {e}")))?
            .install(run)?,
        _ => run()?,
    };
    let elapsed = start.elapsed();
    write_taylor(&tv, output).map_err(|e| match e {
        VideoIoError::Io(io) => io_error(output, io),
        other => other.into(),
    })?;
    Ok(format!(
        "frames={} height={} width={} window={} terms={} step={} gray_augment={} elapsed_ms={:.3} output={}",
        tv.len(),
        tv.height(),
        tv.width(),
        window,
        terms,
        step,
        gray_augment,
        elapsed.as_secs_f64() * 1e3,
        output.display()
    ))
}

pub fn viz(input: &Path, mode: Mode, gain: f64, outdir: &Path) -> Result<String> {
    if !(gain.is_finite() && gain > 0.0) {
        return Err(VideoIoError::InvalidGain(gain).into());
    }
    let tv = read_taylor(input).map_err(|e| match e {
        VideoIoError::Io(io) => io_error(input, io),
        other => other.into(),
    })?;
    let mode = match mode {
        Mode::Magnitude => RenderMode::Magnitude,
        Mode::Signed => RenderMode::Signed,
    };
    let paths = write_png_sequence(&tv, outdir, mode, gain)?;
    let mode_name = match mode {
        RenderMode::Magnitude => "magnitude",
        RenderMode::Signed => "signed",
    };
    Ok(format!(
        "frames={} height={} width={} mode={} gain={} outdir={}",
        paths.len(),
        tv.height(),
        tv.width(),
        mode_name,
        gain,
        outdir.display()
    ))
}

pub fn skeleton(
    input: &Path,
    window: usize,
    terms: usize,
    step: usize,
    output: &Path,
    channels: Channels,
    normalize: bool,
) -> Result<String> {
    let cfg = SkeletonConfig {
        block_len: window,
        n_terms: terms,
        step,
        channels: match channels {
            Channels::Displacement => SkeletonChannels::Displacement,
            Channels::All => SkeletonChannels::All,
        },
        coordinates: if normalize {
            CoordinateMode::Normalized
        } else {
            CoordinateMode::Raw
        },
    };
    TaylorConfig::new(window, terms)
        .with_step(step)
        .validate()?;
    let is_tlv = output
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("tlv"));
    if !is_tlv && channels == Channels::All {
        return Err(CliError::Config(
            "CSV output holds the displacement channel only; use a .tlv output for --channels all"
                .into(),
        ));
    }
    let file = File::open(input).map_err(|e| io_error(input, e))?;
    let seq = read_skeleton_csv(BufReader::new(file))?;
    let out = skeleton_taylor(&seq, &cfg)?;

    let file = File::create(output).map_err(|e| io_error(output, e))?;
    let mut writer = BufWriter::new(file);
    if is_tlv {
        write_tensor_file(&out.to_tensor_file(), &mut writer)?;
    } else {
        write_taylor_skeleton_csv(&out, &mut writer)?;
    }
    writer.flush().map_err(|e| io_error(output, e))?;
    Ok(format!(
        "frames={} joints={} coords={} channels={} window={} terms={} step={} output={}",
        out.num_frames(),
        out.num_joints(),
        out.num_coords(),
        out.channels().len(),
        window,
        terms,
        step,
        output.display()
    ))
}

#[derive(Debug)]
pub struct BenchArgs {
    pub input: Option<PathBuf>,
    pub height: Option<usize>,
    pub width: Option<usize>,
    pub frames: Option<usize>,
    pub window: Option<usize>,
    pub terms: Vec<usize>,
    pub repeats: usize,
    pub parallel: bool,
    pub skip_reference: bool,
    pub seed: u64,
    pub output: PathBuf,
}

fn random_video(frames: usize, height: usize, width: usize, seed: u64) -> Result<GrayVideo> {
    let mut rng = StdRng::seed_from_u64(seed);
    let data = (0..frames * height * width)
        .map(|_| rng.gen::<f64>())
        .collect();
    Ok(GrayVideo::from_vec(frames, height, width, data)?)
}

pub fn bench(args: BenchArgs) -> Result<String> {
    let max_terms = match args.terms.iter().max() {
        Some(&k) => k,
        None => return Err(CliError::Config("--terms needs at least one value".into())),
    };
    let window = args.window.unwrap_or(max_terms + 3);
    let configs: Vec<TaylorConfig> = args
        .terms
        .iter()
        .map(|&k| TaylorConfig::new(window, k))
        .collect();
    for cfg in &configs {
        cfg.validate()?;
    }
    if args.height == Some(0) || args.width == Some(0) || args.frames == Some(0) {
        return Err(CliError::Config(
            "--height, --width and --frames must be positive".into(),
        ));
    }
    let video = match &args.input {
        Some(input) => load_video(input)?,
        None => random_video(
            args.frames.unwrap_or(window + BENCH_BLOCKS - 1),
            args.height.unwrap_or(BENCH_HEIGHT),
            args.width.unwrap_or(BENCH_WIDTH),
            args.seed,
        )?,
    };
    let opts = BenchOptions {
        repeats: args.repeats,
        reference: !args.skip_reference,
        parallel: args.parallel,
        ..BenchOptions::default()
    };
    let report = bench_taylor(&video, &configs, &opts)?;
    fs::write(&args.output, report.to_json() + "\n").map_err(|e| io_error(&args.output, e))?;
    let fast: Vec<String> = report
        .entries
        .iter()
        .map(|e| format!("{:.3}", e.ms_per_frame(Kernel::Fast).unwrap_or(f64::NAN)))
        .collect();
    Ok(format!(
        "entries={} window={} frames={} height={} width={} fast_ms_per_frame={} output={}",
        report.entries.len(),
        window,
        video.num_frames(),
        video.height(),
        video.width(),
        fast.join(","),
        args.output.display()
    ))
}

pub fn stats(pairs: &Path, output: Option<&Path>) -> Result<String> {
    if !pairs.is_file() {
        return Err(CliError::Input(format!(
            "{}: manifest not found",
            pairs.display()
        )));
    }
    let items = read_manifest(pairs)?;
    let report = aggregate_report(&items)?;
    if let Some(path) = output {
        fs::write(path, report.to_json() + "\n").map_err(|e| io_error(path, e))?;
    }
    let mut summary = format!(
        "items={} actions={} before_bytes={} after_bytes={} ratio={}",
        report.items.len(),
        report.actions.len(),
        report.total_before_bytes,
        report.total_after_bytes,
        report.aggregate_ratio
    );
    if let Some(path) = output {
        summary.push_str(&format!(" output={}", path.display()));
    }
    Ok(summary)
}
