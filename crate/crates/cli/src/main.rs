//! `taylor-video` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or input-data failure, 2 configuration
//! error. Every successful run prints one `key=value` summary line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "taylor-video",
    version,
    about = "Convert videos and skeletons into Taylor motion representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Magnitude,
    Signed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Channels {
    Displacement,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert an image directory or TGRY stream into a TLV1 Taylor video.
    Convert {
        /// Directory of frames or a TGRY file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        window: usize,
        #[arg(long, default_value_t = 1)]
        terms: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        /// Add each block's first grayscale frame to every channel.
        #[arg(long)]
        gray_augment: bool,
        #[arg(long)]
        output: PathBuf,
        /// Worker threads; 1 runs blocks sequentially.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Render a TLV1 Taylor video as a numbered PNG sequence.
    Viz {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Magnitude)]
        mode: Mode,
        #[arg(long, default_value_t = 4.0)]
        gain: f64,
        #[arg(long)]
        outdir: PathBuf,
    },
    /// Transform a skeleton CSV into a Taylor skeleton sequence.
    Skeleton {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        window: usize,
        #[arg(long, default_value_t = 1)]
        terms: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        /// Output path; `.tlv` writes TLV1, anything else CSV.
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Channels::Displacement)]
        channels: Channels,
        /// Min-max normalize each coordinate axis before the transform.
        #[arg(long)]
        normalize: bool,
    },
    /// Time the reference and fast kernels per Taylor frame.
    Bench {
        /// Directory of frames or a TGRY file; a random video is used if absent.
        #[arg(long, conflicts_with_all = ["height", "width", "frames"])]
        input: Option<PathBuf>,
        #[arg(long)]
        height: Option<usize>,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        frames: Option<usize>,
        /// Block length; defaults to the largest term count plus 3.
        #[arg(long)]
        window: Option<usize>,
        /// Comma-separated term counts.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        terms: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        /// Also time the fast kernel with parallel block evaluation.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        skip_reference: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON report path.
        #[arg(long)]
        output: PathBuf,
    },
    /// Compression ratios from a `label,before_path,after_path` manifest.
    Stats {
        #[arg(long)]
        pairs: PathBuf,
        /// Optional JSON report path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Convert {
            input,
            window,
            terms,
            step,
            gray_augment,
            output,
            threads,
        } => commands::convert(&input, window, terms, step, gray_augment, &output, threads),
        Command::Viz {
            input,
            mode,
            gain,
            outdir,
        } => commands::viz(&input, mode, gain, &outdir),
        Command::Skeleton {
            input,
            window,
            terms,
            step,
            output,
            channels,
            normalize,
        } => commands::skeleton(&input, window, terms, step, &output, channels, normalize),
        Command::Bench {
            input,
            height,
            width,
            frames,
            window,
            terms,
            repeats,
            parallel,
            skip_reference,
            seed,
            output,
        } => commands::bench(commands::BenchArgs {
            input,
            height,
            width,
            frames,
            window,
            terms,
            repeats,
            parallel,
            skip_reference,
            seed,
            output,
        }),
        Command::Stats { pairs, output } => commands::stats(&pairs, output.as_deref()),
    };
    match result {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
