use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input file not found: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed RIFF header: {0}")]
    MalformedHeader(String),

    #[error("unsupported codec: {0}")]
    UnsupportedCodec(String),

    #[error("malformed data chunk")]
    MalformedData,

    #[error("signal is empty")]
    EmptySignal,

    #[error("amplitude {value} at index {index} lies outside [-1, 1]")]
    AmplitudeOutOfRange { index: usize, value: f64 },

    #[error("sample rate must be positive")]
    InvalidSampleRate,

    #[error("at least one channel is required")]
    NoChannels,

    #[error("channel {channel} has {len} samples, expected {expected}")]
    RaggedChannels {
        channel: usize,
        len: usize,
        expected: usize,
    },

    #[error("cascade needs at least 4 levels, got {0}")]
    TooFewLevels(u32),

    #[error("scale must be positive and finite, got {0}")]
    InvalidScale(f64),

    #[error("scale {scale} yields fewer than 2 taps")]
    KernelTooShort { scale: f64 },

    #[error("sample rate {0} Hz cannot represent 3000 Hz (Nyquist)")]
    NyquistViolation(u32),

    #[error("invalid scale bank: {0}")]
    InvalidScaleBank(String),

    #[error("convolution operand is empty")]
    EmptyOperand,

    #[error("kernel of {kernel} taps is longer than signal of {signal} samples")]
    KernelLongerThanSignal { kernel: usize, signal: usize },

    #[error("sequence of length {0} is too short (need at least 2)")]
    SequenceTooShort(usize),

    #[error("invalid frame spec: {0}")]
    InvalidFrameSpec(String),

    #[error("input of {len} samples is shorter than one frame of {frame} samples")]
    ShorterThanFrame { len: usize, frame: usize },

    #[error("frame is empty")]
    EmptyFrame,

    #[error("bin count must be at least 1")]
    InvalidBins,

    #[error("coefficient matrix is empty")]
    EmptyMatrix,

    #[error("no speech/silence contrast: entropy vector is constant")]
    NoContrast,

    #[error("no speech detected")]
    NoSpeechDetected,

    #[error("invalid detector configuration: {0}")]
    InvalidConfig(String),

    #[error("endpoint result out of range: {0}")]
    ResultOutOfRange(String),

    #[error("ground-truth segment has zero length")]
    ZeroLengthLabel,

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("nothing to aggregate")]
    EmptyReport,

    #[error("label file: {0}")]
    LabelFile(String),

    #[error("invalid corpus item: {0}")]
    InvalidCorpusItem(String),
}
