//! Overlapping rectangular frames and per-frame histogram entropy.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_FRAME_MS: f64 = 20.0;
pub const DEFAULT_SHIFT_MS: f64 = 10.0;
pub const DEFAULT_BINS: usize = 100;

/// Frame length and shift, tied to a sample rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    frame_length_ms: f64,
    frame_shift_ms: f64,
    sample_rate: u32,
}

impl FrameSpec {
    pub fn new(frame_length_ms: f64, frame_shift_ms: f64, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidSampleRate);
        }
        if !(frame_shift_ms > 0.0
            && frame_shift_ms <= frame_length_ms
            && frame_length_ms.is_finite())
        {
            return Err(Error::InvalidFrameSpec(format!(
                "need 0 < shift ({frame_shift_ms} ms) <= length ({frame_length_ms} ms)"
            )));
        }
        let spec = Self {
            frame_length_ms,
            frame_shift_ms,
            sample_rate,
        };
        if spec.frame_length_samples() < 2 {
            return Err(Error::InvalidFrameSpec(format!(
                "{frame_length_ms} ms at {sample_rate} Hz is fewer than 2 samples"
            )));
        }
        if spec.frame_shift_samples() < 1 {
            return Err(Error::InvalidFrameSpec(format!(
                "{frame_shift_ms} ms at {sample_rate} Hz rounds to zero samples"
            )));
        }
        Ok(spec)
    }

    /// 20 ms frames every 10 ms.
    pub fn standard(sample_rate: u32) -> Result<Self> {
        Self::new(DEFAULT_FRAME_MS, DEFAULT_SHIFT_MS, sample_rate)
    }

    pub fn frame_length_ms(&self) -> f64 {
        self.frame_length_ms
    }

    pub fn frame_shift_ms(&self) -> f64 {
        self.frame_shift_ms
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn frame_length_samples(&self) -> usize {
        ms_to_samples(self.frame_length_ms, self.sample_rate)
    }

    pub fn frame_shift_samples(&self) -> usize {
        ms_to_samples(self.frame_shift_ms, self.sample_rate)
    }

    /// Number of whole frames that fit in `len` samples (0 if none).
    pub fn frame_count(&self, len: usize) -> usize {
        let fl = self.frame_length_samples();
        if len < fl {
            0
        } else {
            (len - fl) / self.frame_shift_samples() + 1
        }
    }

    /// Frames needed to cover `ms` milliseconds of shift, rounded.
    pub fn ms_to_frames(&self, ms: f64) -> usize {
        (ms / self.frame_shift_ms).round().max(0.0) as usize
    }
}

fn ms_to_samples(ms: f64, sample_rate: u32) -> usize {
    (ms * sample_rate as f64 / 1000.0).round() as usize
}

/// Half-open sample ranges of every whole frame; a trailing partial frame is
/// dropped.
pub fn frame_indices(len: usize, spec: &FrameSpec) -> Result<Vec<Range<usize>>> {
    let fl = spec.frame_length_samples();
    let count = spec.frame_count(len);
    if count == 0 {
        return Err(Error::ShorterThanFrame { len, frame: fl });
    }
    let shift = spec.frame_shift_samples();
    Ok((0..count).map(|i| i * shift..i * shift + fl).collect())
}

/// How histogram bin edges are placed when entropy is taken per frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Binning {
    /// Bins span each frame's own min..max. Entropy ignores level entirely.
    PerFrame,
    /// Bins span the min..max of the whole sequence, shared by all frames.
    /// Quiet frames collapse into few bins and score low.
    #[default]
    SequenceRange,
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Relative frequencies over `bins` uniform bins spanning `[lo, hi]`.
/// A degenerate range puts everything in one bin.
pub fn histogram_in_range(frame: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Vec<f64>> {
    if frame.is_empty() {
        return Err(Error::EmptyFrame);
    }
    if bins == 0 {
        return Err(Error::InvalidBins);
    }
    let width = hi - lo;
    if width.is_nan() || width <= 0.0 {
        return Ok(vec![1.0]);
    }
    let mut counts = vec![0usize; bins];
    let top = bins - 1;
    for &x in frame {
        let pos = (x - lo) / width * bins as f64;
        let idx = if pos <= 0.0 {
            0
        } else {
            (pos as usize).min(top)
        };
        counts[idx] += 1;
    }
    let n = frame.len() as f64;
    Ok(counts.into_iter().map(|c| c as f64 / n).collect())
}

/// Histogram over the frame's own min..max range.
pub fn histogram_probabilities(frame: &[f64], bins: usize) -> Result<Vec<f64>> {
    let (lo, hi) = min_max(frame);
    histogram_in_range(frame, lo, hi, bins)
}

/// `-sum p log10 p` with `0 log 0 = 0`.
pub fn entropy_of(probabilities: &[f64]) -> f64 {
    let h: f64 = probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log10())
        .sum();
    h.max(0.0)
}

/// Entropy of one frame under per-frame min..max binning; lies in
/// `[0, log10(bins)]`.
pub fn frame_entropy(frame: &[f64], bins: usize) -> Result<f64> {
    Ok(entropy_of(&histogram_probabilities(frame, bins)?))
}

/// Frame-indexed entropy of a coefficient sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyVector {
    values: Vec<f64>,
    spec: FrameSpec,
}

impl EntropyVector {
    pub fn new(values: Vec<f64>, spec: FrameSpec) -> Self {
        Self { values, spec }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spec(&self) -> &FrameSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean_over(&self, frames: Range<usize>) -> Option<f64> {
        let slice = self.values.get(frames)?;
        if slice.is_empty() {
            return None;
        }
        Some(slice.iter().sum::<f64>() / slice.len() as f64)
    }
}

/// Applies the frame entropy to every whole frame of `seq`.
pub fn entropy_vector(
    seq: &[f64],
    spec: &FrameSpec,
    bins: usize,
    binning: Binning,
) -> Result<EntropyVector> {
    if bins == 0 {
        return Err(Error::InvalidBins);
    }
    let frames = frame_indices(seq.len(), spec)?;
    let values = match binning {
        Binning::PerFrame => frames
            .into_iter()
            .map(|r| frame_entropy(&seq[r], bins))
            .collect::<Result<_>>()?,
        Binning::SequenceRange => {
            let (lo, hi) = min_max(seq);
            frames
                .into_iter()
                .map(|r| histogram_in_range(&seq[r], lo, hi, bins).map(|p| entropy_of(&p)))
                .collect::<Result<_>>()?
        }
    };
    Ok(EntropyVector::new(values, *spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec48() -> FrameSpec {
        FrameSpec::standard(48000).unwrap()
    }

    #[test]
    fn frame_counts() {
        let s = spec48();
        assert_eq!(s.frame_length_samples(), 960);
        assert_eq!(s.frame_shift_samples(), 480);
        assert_eq!(frame_indices(48000, &s).unwrap().len(), 99);
        assert_eq!(frame_indices(960, &s).unwrap(), vec![0..960]);
        assert_eq!(frame_indices(960 + 480 - 1, &s).unwrap().len(), 1);
        assert_eq!(frame_indices(960 + 480, &s).unwrap().len(), 2);
        assert!(matches!(
            frame_indices(959, &s),
            Err(Error::ShorterThanFrame {
                len: 959,
                frame: 960
            })
        ));
    }

    #[test]
    fn frame_spec_validation() {
        assert!(FrameSpec::new(10.0, 20.0, 48000).is_err());
        assert!(FrameSpec::new(20.0, 0.0, 48000).is_err());
        assert!(FrameSpec::new(0.01, 0.01, 48000).is_err());
        assert!(FrameSpec::new(20.0, 10.0, 0).is_err());
        assert!(FrameSpec::new(20.0, 20.0, 8000).is_ok());
    }

    #[test]
    fn histogram_examples() {
        assert_eq!(
            histogram_probabilities(&[0.0, 0.1, 0.9, 1.0], 2).unwrap(),
            vec![0.5, 0.5]
        );
        assert_eq!(histogram_probabilities(&[0.3; 10], 100).unwrap(), vec![1.0]);
        let p = histogram_probabilities(&[0.1, -0.4, 0.77, 0.2, 0.0, -1.0, 0.5], 5).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(matches!(
            histogram_probabilities(&[], 3),
            Err(Error::EmptyFrame)
        ));
        assert!(matches!(
            histogram_probabilities(&[1.0], 0),
            Err(Error::InvalidBins)
        ));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn entropy_examples() {
        assert_eq!(frame_entropy(&[0.25; 32], 100).unwrap(), 0.0);
        // Two equiprobable outcomes: -2 * 0.5 * log10(0.5) = log10(2).
        let h = frame_entropy(&[0.0, 0.0, 1.0, 1.0], 2).unwrap();
        assert!((h - 0.301_029_995_663_981_2).abs() < 1e-9);
        // One value per bin across 10 bins.
        let frame: Vec<f64> = (0..10).map(|i| i as f64 + 0.5).collect();
        let h = frame_entropy(&frame, 10).unwrap();
        assert!((h - 1.0).abs() < 1e-9);
    }

    #[test]
    fn entropy_vector_of_zeros() {
        let s = spec48();
        for binning in [Binning::PerFrame, Binning::SequenceRange] {
            let v = entropy_vector(&vec![0.0; 4800], &s, 100, binning).unwrap();
            assert_eq!(v.len(), s.frame_count(4800));
            assert!(v.values().iter().all(|&e| e == 0.0));
        }
    }

    #[test]
    fn negated_frame_keeps_entropy() {
        let frame = [0.13, -0.52, 0.31, 0.07, 0.44, -0.29, 0.9, -0.61, 0.02];
        let neg: Vec<f64> = frame.iter().map(|x| -x).collect();
        assert_eq!(
            frame_entropy(&frame, 7).unwrap(),
            frame_entropy(&neg, 7).unwrap()
        );
    }
}
