//! Loading, validating and writing digitized recordings.
//!
//! Every recording is held as a [`SignalBuffer`]: mono amplitudes in
//! `[-1, 1]` plus the sample rate. Multichannel input is averaged down to
//! one channel on load.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Error, Result};

/// Mono amplitude sequence normalized to `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalBuffer {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl SignalBuffer {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidSampleRate);
        }
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some((index, &value)) = samples
            .iter()
            .enumerate()
            .find(|(_, a)| !(-1.0..=1.0).contains(*a))
        {
            return Err(Error::AmplitudeOutOfRange { index, value });
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// RMS level over the whole recording.
    pub fn rms_loudness(&self) -> f64 {
        // Non-empty by construction.
        rms(&self.samples).unwrap_or(0.0)
    }

    /// Copy of the buffer with every amplitude multiplied by `gain`.
    /// Fails when the result leaves `[-1, 1]`.
    pub fn scaled(&self, gain: f64) -> Result<Self> {
        Self::new(
            self.samples.iter().map(|a| a * gain).collect(),
            self.sample_rate,
        )
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Root mean square of `samples`.
pub fn rms(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySignal);
    }
    let energy: f64 = samples.iter().map(|a| a * a).sum();
    Ok((energy / samples.len() as f64).sqrt())
}

/// Averages equal-length channels into one mono buffer.
pub fn to_mono<C: AsRef<[f64]>>(channels: &[C], sample_rate: u32) -> Result<SignalBuffer> {
    let first = channels.first().ok_or(Error::NoChannels)?.as_ref();
    let expected = first.len();
    for (channel, c) in channels.iter().enumerate() {
        let len = c.as_ref().len();
        if len != expected {
            return Err(Error::RaggedChannels {
                channel,
                len,
                expected,
            });
        }
    }
    if channels.len() == 1 {
        return SignalBuffer::new(first.to_vec(), sample_rate);
    }
    let n = channels.len() as f64;
    let mono = (0..expected)
        .map(|i| channels.iter().map(|c| c.as_ref()[i]).sum::<f64>() / n)
        .collect();
    SignalBuffer::new(mono, sample_rate)
}

fn map_wav_error(err: hound::Error, reading_data: bool) -> Error {
    match err {
        hound::Error::Unsupported => {
            Error::UnsupportedCodec("only PCM integer and IEEE float are accepted".into())
        }
        hound::Error::InvalidSampleFormat => {
            Error::UnsupportedCodec("sample format does not match bit depth".into())
        }
        hound::Error::TooWide => Error::UnsupportedCodec("sample width exceeds 32 bits".into()),
        hound::Error::UnfinishedSample => Error::MalformedData,
        hound::Error::IoError(_) if reading_data => Error::MalformedData,
        hound::Error::IoError(e) => Error::MalformedHeader(e.to_string()),
        hound::Error::FormatError(msg) => Error::MalformedHeader(msg.to_string()),
    }
}

/// Reads a RIFF/WAVE file holding PCM integer or IEEE-float samples.
///
/// Integer samples are divided by the format's full-scale value
/// (`2^(bits-1)`), float samples are clamped to `[-1, 1]`, and multichannel
/// audio is averaged to mono.
pub fn load_wav(path: impl AsRef<Path>) -> Result<SignalBuffer> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| match source.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io {
            path: path.to_path_buf(),
            source,
        },
    })?;
    let reader = WavReader::new(BufReader::new(file)).map_err(|e| map_wav_error(e, false))?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channels == 0 {
        return Err(Error::NoChannels);
    }

    let interleaved: Vec<f64> = match spec.sample_format {
        SampleFormat::Int => {
            let full_scale = (1u64 << (spec.bits_per_sample - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| v as f64 / full_scale))
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| map_wav_error(e, true))?
        }
        SampleFormat::Float => reader
            .into_samples::<f32>()
            .map(|s| s.map(|v| (v as f64).clamp(-1.0, 1.0)))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| map_wav_error(e, true))?,
    };
    if !interleaved.len().is_multiple_of(channels) {
        return Err(Error::MalformedData);
    }

    let frames = interleaved.len() / channels;
    let per_channel: Vec<Vec<f64>> = (0..channels)
        .map(|c| (0..frames).map(|i| interleaved[i * channels + c]).collect())
        .collect();
    to_mono(&per_channel, spec.sample_rate)
}

/// Writes the buffer as mono 16-bit PCM at its own sample rate.
pub fn save_wav(path: impl AsRef<Path>, signal: &SignalBuffer) -> Result<()> {
    let path = path.as_ref();
    let spec = WavSpec {
        channels: 1,
        sample_rate: signal.sample_rate,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let io_err = |e: hound::Error| match e {
        hound::Error::IoError(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::MalformedHeader(other.to_string()),
    };
    let mut writer = WavWriter::create(path, spec).map_err(io_err)?;
    for &a in &signal.samples {
        writer.write_sample(quantize_i16(a)).map_err(io_err)?;
    }
    writer.finalize().map_err(io_err)
}

/// Full-scale 16-bit quantization matching the `1 / 32768` read scaling.
pub fn quantize_i16(amplitude: f64) -> i16 {
    (amplitude * 32768.0).round().clamp(-32768.0, 32767.0) as i16
}
