use std::path::PathBuf;

use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Detect endpoints and write extracted segments plus JSON reports.
    Detect,
    /// Detect on labeled files and write a deviation report.
    Eval,
    /// Write a synthetic labeled corpus.
    Synth,
}

/// Speech endpoint detection over WAV files.
#[derive(Debug, Parser)]
#[command(name = "wcsed", version, about)]
pub struct Args {
    #[arg(long, value_enum, default_value_t = Mode::Detect)]
    pub mode: Mode,

    /// WAV files or directories (detect); corpus spec file (synth).
    #[arg(long, num_args = 1..)]
    pub input: Vec<PathBuf>,

    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,

    /// Flat TOML file of detector settings; flags override its values.
    #[arg(long, env = "WCSED_CONFIG")]
    pub config: Option<PathBuf>,

    /// Label CSV with header `path,start_frame,end_frame,group` (eval).
    #[arg(long)]
    pub labels: Option<PathBuf>,

    /// Also write `<name>.trace.csv` with per-frame entropies (detect).
    #[arg(long)]
    pub trace: bool,

    /// Worker threads; 0 uses one per CPU.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,

    #[command(flatten)]
    pub tunables: Tunables,

    /// Number of random items (synth without a corpus spec).
    #[arg(long, default_value_t = 20)]
    pub count: usize,

    /// Seed for random items (synth).
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Sample rate of random items (synth).
    #[arg(long, default_value_t = 48_000)]
    pub sample_rate: u32,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Tunables {
    #[arg(long)]
    pub frame_ms: Option<f64>,
    #[arg(long)]
    pub shift_ms: Option<f64>,
    /// Histogram bins per frame.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Edge threshold as a fraction of the Otsu threshold.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Sub-threshold frames tolerated while extending edges.
    #[arg(long)]
    pub gap_frames: Option<usize>,
    /// Core runs closer than this are merged.
    #[arg(long)]
    pub merge_ms: Option<f64>,
    /// RMS above which bank rows are averaged rather than summed.
    #[arg(long)]
    pub loudness_th: Option<f64>,
    /// Comma-separated high-band scales (requires --scales-lf).
    #[arg(long, value_delimiter = ',')]
    pub scales_hf: Option<Vec<f64>>,
    /// Comma-separated low-band scales (requires --scales-hf).
    #[arg(long, value_delimiter = ',')]
    pub scales_lf: Option<Vec<f64>>,
}
