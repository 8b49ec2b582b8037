//! The endpoint detection pipeline.
//!
//! The signal is convolved with DB8 kernels from a high-frequency and a
//! low-frequency scale bank. Each bank's rows are differenced, combined into
//! one magnitude sequence and framed into an entropy vector. Voiced speech
//! lights up the low-frequency entropy (`ce_l`); breath noise and clicks
//! barely register there, so the longest active `ce_l` run is taken as the
//! speech core. The core is then stretched along the high-frequency entropy
//! (`ce_h`) to pick up unvoiced onsets and offsets, stopping at the first
//! silent gap so that separated artifacts stay outside.

use serde::{Deserialize, Serialize};

use crate::convolution::{
    first_difference, CoefficientMatrix, SpectralConvolver, DEFAULT_FFT_THRESHOLD,
};
use crate::entropy::{
    entropy_vector, Binning, EntropyVector, FrameSpec, DEFAULT_BINS, DEFAULT_FRAME_MS,
    DEFAULT_SHIFT_MS,
};
use crate::error::{Error, Result};
use crate::signal::SignalBuffer;
use crate::wavelet::{
    kernel_at_scale, scale_bank_for, BankFrequencies, MotherWavelet, ScaleBank,
    DEFAULT_CASCADE_LEVELS,
};

/// Which entropy vectors drive core detection and edge stretching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyRoute {
    /// Low-frequency entropy finds the core, high-frequency entropy
    /// stretches both edges with the edge threshold.
    #[default]
    Dual,
    /// One entropy vector over all scales; the start edge uses the edge
    /// threshold and the end edge the core threshold.
    Single,
}

/// Every tunable of the detector. Field names double as config-file keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    pub frame_ms: f64,
    pub shift_ms: f64,
    /// Histogram bins for frame entropy.
    pub bins: usize,
    pub binning: Binning,
    /// Edge threshold as a fraction of the Otsu threshold of `ce_h`.
    pub gamma: f64,
    /// Consecutive sub-threshold frames that end an edge walk.
    pub gap_frames: usize,
    /// Active runs of `ce_l` separated by less than this are merged.
    pub merge_ms: f64,
    /// RMS above which bank rows are averaged instead of summed.
    pub loudness_th: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scales_hf: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scales_lf: Option<Vec<f64>>,
    pub hf_high_hz: f64,
    pub split_hz: f64,
    pub lf_low_hz: f64,
    pub hf_count: usize,
    pub lf_count: usize,
    pub cascade_levels: u32,
    pub fft_threshold: usize,
    pub otsu_bins: usize,
    pub route: EntropyRoute,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        let bank = BankFrequencies::default();
        Self {
            frame_ms: DEFAULT_FRAME_MS,
            shift_ms: DEFAULT_SHIFT_MS,
            bins: DEFAULT_BINS,
            binning: Binning::default(),
            gamma: 0.8,
            gap_frames: 3,
            merge_ms: 300.0,
            loudness_th: 0.1,
            scales_hf: None,
            scales_lf: None,
            hf_high_hz: bank.hf_high_hz,
            split_hz: bank.split_hz,
            lf_low_hz: bank.lf_low_hz,
            hf_count: bank.hf_count,
            lf_count: bank.lf_count,
            cascade_levels: DEFAULT_CASCADE_LEVELS,
            fft_threshold: DEFAULT_FFT_THRESHOLD,
            otsu_bins: 256,
            route: EntropyRoute::default(),
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must be positive, got {}", self.gamma));
        }
        if self.gap_frames == 0 {
            return bad("gap_frames must be at least 1".into());
        }
        if !(self.merge_ms >= 0.0 && self.merge_ms.is_finite()) {
            return bad(format!(
                "merge_ms must be non-negative, got {}",
                self.merge_ms
            ));
        }
        if self.loudness_th.is_nan() || self.loudness_th < 0.0 {
            return bad(format!(
                "loudness_th must be non-negative, got {}",
                self.loudness_th
            ));
        }
        if self.bins == 0 {
            return bad("bins must be at least 1".into());
        }
        if self.otsu_bins < 2 {
            return bad("otsu_bins must be at least 2".into());
        }
        if self.scales_hf.is_some() != self.scales_lf.is_some() {
            return bad("scales_hf and scales_lf must be given together".into());
        }
        Ok(())
    }

    pub fn frame_spec(&self, sample_rate: u32) -> Result<FrameSpec> {
        FrameSpec::new(self.frame_ms, self.shift_ms, sample_rate)
    }

    fn bank_frequencies(&self) -> BankFrequencies {
        BankFrequencies {
            hf_high_hz: self.hf_high_hz,
            split_hz: self.split_hz,
            lf_low_hz: self.lf_low_hz,
            hf_count: self.hf_count,
            lf_count: self.lf_count,
        }
    }

    /// Explicit scale lists when given, otherwise the frequency layout
    /// mapped through the mother wavelet at `sample_rate`.
    pub fn scale_bank(&self, mother: &MotherWavelet, sample_rate: u32) -> Result<ScaleBank> {
        match (&self.scales_hf, &self.scales_lf) {
            (Some(hf), Some(lf)) => ScaleBank::new(hf.clone(), lf.clone()),
            _ => scale_bank_for(mother, sample_rate, &self.bank_frequencies()),
        }
    }
}

/// Runs one bank of scales: kernel, "same" convolution, first difference.
pub fn wave_conv(
    signal: &[f64],
    scales: &[f64],
    mother: &MotherWavelet,
    fft_threshold: usize,
) -> Result<CoefficientMatrix> {
    let mut conv = SpectralConvolver::new(signal);
    wave_conv_with(&mut conv, scales, mother, fft_threshold)
}

fn wave_conv_with(
    conv: &mut SpectralConvolver<'_>,
    scales: &[f64],
    mother: &MotherWavelet,
    fft_threshold: usize,
) -> Result<CoefficientMatrix> {
    if scales.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let rows = scales
        .iter()
        .map(|&s| {
            let kernel = kernel_at_scale(mother, s)?;
            let coefs = conv.same(kernel.taps(), fft_threshold)?;
            first_difference(&coefs)
        })
        .collect::<Result<Vec<_>>>()?;
    CoefficientMatrix::new(rows, scales.to_vec())
}

/// How bank rows were folded into one sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combination {
    Sum,
    Mean,
}

impl Combination {
    /// Mean strictly above the threshold, sum at or below it.
    pub fn for_loudness(loudness: f64, loudness_threshold: f64) -> Self {
        if loudness > loudness_threshold {
            Combination::Mean
        } else {
            Combination::Sum
        }
    }
}

/// Per time index, sums or averages `|row|` across scales depending on the
/// recording's loudness.
pub fn combine_coefficients(
    matrix: &CoefficientMatrix,
    loudness: f64,
    loudness_threshold: f64,
) -> Vec<f64> {
    combine_with(
        matrix,
        Combination::for_loudness(loudness, loudness_threshold),
    )
}

pub fn combine_with(matrix: &CoefficientMatrix, how: Combination) -> Vec<f64> {
    let mut out = vec![0.0; matrix.row_len()];
    for row in matrix.rows() {
        for (o, v) in out.iter_mut().zip(row) {
            *o += v.abs();
        }
    }
    if how == Combination::Mean {
        let m = matrix.n_scales() as f64;
        out.iter_mut().for_each(|o| *o /= m);
    }
    out
}

/// Activity bar for the core region and the weaker bar for edge walks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPair {
    pub core_threshold: f64,
    pub edge_threshold: f64,
}

/// Otsu's two-class split of `values`: the cut that maximizes the
/// between-class variance of a `bins`-bin histogram. When a range of cuts
/// ties (an empty valley between clusters) the middle of that range is used.
pub fn otsu_threshold(values: &[f64], bins: usize) -> Result<f64> {
    if values.len() < 2 || bins < 2 {
        return Err(Error::NoContrast);
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
            (l.min(v), h.max(v))
        });
    let width = hi - lo;
    if width.is_nan() || width <= 0.0 || !width.is_finite() {
        return Err(Error::NoContrast);
    }
    let bin_width = width / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = (((v - lo) / bin_width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let n = values.len() as f64;
    let centers: Vec<f64> = (0..bins)
        .map(|i| lo + (i as f64 + 0.5) * bin_width)
        .collect();
    let total_mass: f64 = counts
        .iter()
        .zip(&centers)
        .map(|(&c, &x)| c as f64 * x)
        .sum();

    let mut best: Option<f64> = None;
    let (mut first, mut last) = (1usize, 1usize);
    let mut w0 = 0.0;
    let mut mass0 = 0.0;
    // Cut t puts bins [0, t) in the low class.
    for t in 1..bins {
        w0 += counts[t - 1] as f64;
        mass0 += counts[t - 1] as f64 * centers[t - 1];
        let w1 = n - w0;
        if w0 == 0.0 || w1 == 0.0 {
            continue;
        }
        let m0 = mass0 / w0;
        let m1 = (total_mass - mass0) / w1;
        let between = w0 * w1 * (m0 - m1) * (m0 - m1);
        match best {
            Some(b) if (between - b).abs() <= 1e-12 * b.abs().max(between.abs()) => last = t,
            Some(b) if between < b => {}
            _ => {
                best = Some(between);
                first = t;
                last = t;
            }
        }
    }
    if best.is_none() {
        return Err(Error::NoContrast);
    }
    let cut = (first + last) as f64 / 2.0;
    Ok(lo + cut * bin_width)
}

/// Otsu cut as the core threshold and `gamma` times it as the edge
/// threshold.
pub fn compute_thresholds(
    ce: &EntropyVector,
    gamma: f64,
    otsu_bins: usize,
) -> Result<ThresholdPair> {
    let core_threshold = otsu_threshold(ce.values(), otsu_bins)?;
    Ok(ThresholdPair {
        core_threshold,
        edge_threshold: gamma * core_threshold,
    })
}

/// Inclusive frame range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameRange {
    pub first: usize,
    pub last: usize,
}

impl FrameRange {
    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, frame: usize) -> bool {
        (self.first..=self.last).contains(&frame)
    }
}

/// Longest run of frames at or above `core_threshold`, after merging runs
/// separated by fewer than `merge_frames` inactive frames. Ties go to the
/// earliest run.
pub fn detect_core_region(
    ce_l: &[f64],
    core_threshold: f64,
    merge_frames: usize,
) -> Result<FrameRange> {
    let mut merged: Vec<FrameRange> = Vec::new();
    let mut i = 0;
    while i < ce_l.len() {
        if ce_l[i] < core_threshold {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < ce_l.len() && ce_l[i + 1] >= core_threshold {
            i += 1;
        }
        match merged.last_mut() {
            Some(prev) if start - prev.last - 1 < merge_frames => prev.last = i,
            _ => merged.push(FrameRange {
                first: start,
                last: i,
            }),
        }
        i += 1;
    }
    merged
        .into_iter()
        .reduce(|best, r| if r.len() > best.len() { r } else { best })
        .ok_or(Error::NoSpeechDetected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Backward,
    Forward,
}

/// Walks away from `anchor` while frames clear `edge_threshold`, skipping
/// dips shorter than `gap_frames`. Returns the last qualifying frame before
/// a dip of `gap_frames` or more, or `anchor` if nothing qualifies.
pub fn include_edges(
    ce_h: &[f64],
    anchor: usize,
    direction: Direction,
    edge_threshold: f64,
    gap_frames: usize,
) -> usize {
    let mut last = anchor;
    let mut pos = anchor;
    let mut dip = 0;
    loop {
        let next = match direction {
            Direction::Backward => pos.checked_sub(1),
            Direction::Forward => Some(pos + 1).filter(|&p| p < ce_h.len()),
        };
        let Some(next) = next else { break };
        pos = next;
        if ce_h[pos] >= edge_threshold {
            last = pos;
            dip = 0;
        } else {
            dip += 1;
            if dip >= gap_frames {
                break;
            }
        }
    }
    last
}

/// Detected speech span in frames and samples (both inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointResult {
    pub start_frame: usize,
    pub end_frame: usize,
    pub start_sample: usize,
    pub end_sample: usize,
    pub spec: FrameSpec,
}

impl EndpointResult {
    /// Maps an inclusive frame range onto samples of a `signal_len`-sample
    /// recording: frame start for the first sample, frame end for the last.
    pub fn from_frames(frames: FrameRange, spec: FrameSpec, signal_len: usize) -> Result<Self> {
        if frames.first > frames.last || signal_len == 0 {
            return Err(Error::ResultOutOfRange(format!(
                "frames {}..={} for {signal_len} samples",
                frames.first, frames.last
            )));
        }
        let shift = spec.frame_shift_samples();
        let start_sample = frames.first * shift;
        let end_sample =
            (frames.last * shift + spec.frame_length_samples() - 1).min(signal_len - 1);
        if start_sample >= signal_len {
            return Err(Error::ResultOutOfRange(format!(
                "start sample {start_sample} beyond {signal_len} samples"
            )));
        }
        Ok(Self {
            start_frame: frames.first,
            end_frame: frames.last,
            start_sample,
            end_sample,
            spec,
        })
    }

    pub fn frames(&self) -> FrameRange {
        FrameRange {
            first: self.start_frame,
            last: self.end_frame,
        }
    }

    pub fn len_samples(&self) -> usize {
        self.end_sample - self.start_sample + 1
    }
}

/// Samples `start_sample..=end_sample` of `signal`.
pub fn extract_segment(signal: &SignalBuffer, result: &EndpointResult) -> Result<SignalBuffer> {
    if result.start_sample > result.end_sample || result.end_sample >= signal.len() {
        return Err(Error::ResultOutOfRange(format!(
            "samples {}..={} for a {}-sample signal",
            result.start_sample,
            result.end_sample,
            signal.len()
        )));
    }
    SignalBuffer::new(
        signal.samples()[result.start_sample..=result.end_sample].to_vec(),
        signal.sample_rate(),
    )
}

/// Everything a detection run produced, for reports and plots.
#[derive(Debug, Clone)]
pub struct Detection {
    pub endpoints: EndpointResult,
    pub core: FrameRange,
    /// Core threshold from `ce_l`, edge threshold from `ce_h`.
    pub thresholds: ThresholdPair,
    pub loudness: f64,
    pub combination: Combination,
    pub bank: ScaleBank,
    pub ce_l: EntropyVector,
    pub ce_h: EntropyVector,
}

/// A configured detector. Holds the sampled mother wavelet so repeated
/// detections skip the cascade.
#[derive(Debug, Clone)]
pub struct Detector {
    config: DetectorConfig,
    mother: MotherWavelet,
}

impl Detector {
    pub fn new(config: DetectorConfig) -> Result<Self> {
        config.validate()?;
        let mother = MotherWavelet::db8_with_levels(config.cascade_levels)?;
        Ok(Self { config, mother })
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    pub fn mother(&self) -> &MotherWavelet {
        &self.mother
    }

    pub fn detect(&self, signal: &SignalBuffer) -> Result<Detection> {
        let cfg = &self.config;
        let rate = signal.sample_rate();
        let spec = cfg.frame_spec(rate)?;
        // Coefficient rows are one sample shorter than the signal.
        if spec.frame_count(signal.len().saturating_sub(1)) < 2 {
            return Err(Error::ShorterThanFrame {
                len: signal.len(),
                frame: spec.frame_length_samples() + spec.frame_shift_samples() + 1,
            });
        }
        let bank = cfg.scale_bank(&self.mother, rate)?;
        let loudness = signal.rms_loudness();
        let combination = Combination::for_loudness(loudness, cfg.loudness_th);

        let mut conv = SpectralConvolver::new(signal.samples());
        let hf = wave_conv_with(&mut conv, bank.hf_scales(), &self.mother, cfg.fft_threshold)?;
        let lf = wave_conv_with(&mut conv, bank.lf_scales(), &self.mother, cfg.fft_threshold)?;
        let merge_frames = spec.ms_to_frames(cfg.merge_ms);

        let (ce_l, ce_h, core, thresholds, start, end) = match cfg.route {
            EntropyRoute::Dual => {
                let coef_hf = combine_with(&hf, combination);
                let coef_lf = combine_with(&lf, combination);
                let ce_h = entropy_vector(&coef_hf, &spec, cfg.bins, cfg.binning)?;
                let ce_l = entropy_vector(&coef_lf, &spec, cfg.bins, cfg.binning)?;
                let core_threshold =
                    compute_thresholds(&ce_l, cfg.gamma, cfg.otsu_bins)?.core_threshold;
                let edge_threshold =
                    compute_thresholds(&ce_h, cfg.gamma, cfg.otsu_bins)?.edge_threshold;
                let core = detect_core_region(ce_l.values(), core_threshold, merge_frames)?;
                let start = include_edges(
                    ce_h.values(),
                    core.first,
                    Direction::Backward,
                    edge_threshold,
                    cfg.gap_frames,
                );
                let end = include_edges(
                    ce_h.values(),
                    core.last,
                    Direction::Forward,
                    edge_threshold,
                    cfg.gap_frames,
                );
                let pair = ThresholdPair {
                    core_threshold,
                    edge_threshold,
                };
                (ce_l, ce_h, core, pair, start, end)
            }
            EntropyRoute::Single => {
                let mut rows = hf.rows().to_vec();
                rows.extend_from_slice(lf.rows());
                let mut labels = hf.scale_labels().to_vec();
                labels.extend_from_slice(lf.scale_labels());
                let all = CoefficientMatrix::new(rows, labels)?;
                let coef = combine_with(&all, combination);
                let ce = entropy_vector(&coef, &spec, cfg.bins, cfg.binning)?;
                let pair = compute_thresholds(&ce, cfg.gamma, cfg.otsu_bins)?;
                let core = detect_core_region(ce.values(), pair.core_threshold, merge_frames)?;
                let start = include_edges(
                    ce.values(),
                    core.first,
                    Direction::Backward,
                    pair.edge_threshold,
                    cfg.gap_frames,
                );
                let end = include_edges(
                    ce.values(),
                    core.last,
                    Direction::Forward,
                    pair.core_threshold,
                    cfg.gap_frames,
                );
                (ce.clone(), ce, core, pair, start, end)
            }
        };

        let endpoints = EndpointResult::from_frames(
            FrameRange {
                first: start,
                last: end,
            },
            spec,
            signal.len(),
        )?;
        Ok(Detection {
            endpoints,
            core,
            thresholds,
            loudness,
            combination,
            bank,
            ce_l,
            ce_h,
        })
    }
}

/// One-shot detection with a fresh [`Detector`].
pub fn detect_endpoints(signal: &SignalBuffer, config: &DetectorConfig) -> Result<EndpointResult> {
    Ok(Detector::new(config.clone())?.detect(signal)?.endpoints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_sum_and_mean() {
        let row = vec![0.5, -1.0, 0.25];
        let m = CoefficientMatrix::new(vec![row.clone(); 4], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let sum = combine_with(&m, Combination::Sum);
        let mean = combine_with(&m, Combination::Mean);
        for (s, a) in sum.iter().zip(&mean) {
            assert!((s - 4.0 * a).abs() < 1e-15);
        }
        let single = CoefficientMatrix::new(vec![row.clone()], vec![1.0]).unwrap();
        assert_eq!(
            combine_with(&single, Combination::Sum),
            vec![0.5, 1.0, 0.25]
        );
        assert_eq!(
            combine_with(&single, Combination::Mean),
            vec![0.5, 1.0, 0.25]
        );
    }

    #[test]
    fn loudness_tie_takes_sum() {
        assert_eq!(Combination::for_loudness(0.1, 0.1), Combination::Sum);
        assert_eq!(Combination::for_loudness(0.1000001, 0.1), Combination::Mean);
        assert_eq!(Combination::for_loudness(0.0, 0.1), Combination::Sum);
    }

    #[test]
    fn core_region_examples() {
        let ce = [0.0, 0.0, 0.8, 0.9, 0.8, 0.0, 0.0];
        assert_eq!(
            detect_core_region(&ce, 0.5, 30).unwrap(),
            FrameRange { first: 2, last: 4 }
        );

        let mut ce = vec![0.0; 80];
        ce[10..=20].iter_mut().for_each(|v| *v = 1.0);
        ce[25..=60].iter_mut().for_each(|v| *v = 1.0);
        assert_eq!(
            detect_core_region(&ce, 0.5, 30).unwrap(),
            FrameRange {
                first: 10,
                last: 60
            }
        );
        // Without merging the longer run wins.
        assert_eq!(
            detect_core_region(&ce, 0.5, 4).unwrap(),
            FrameRange {
                first: 25,
                last: 60
            }
        );

        assert!(matches!(
            detect_core_region(&[0.1, 0.2], 0.5, 30),
            Err(Error::NoSpeechDetected)
        ));
    }

    #[test]
    fn include_edges_examples() {
        let ce = [0.0, 0.0, 0.5, 0.9, 0.5, 0.0, 0.0];
        assert_eq!(include_edges(&ce, 3, Direction::Backward, 0.4, 1), 2);
        assert_eq!(include_edges(&ce, 3, Direction::Forward, 0.4, 1), 4);

        let ce = [0.9, 0.0, 0.0, 0.0, 0.6, 0.9, 0.9];
        assert_eq!(include_edges(&ce, 5, Direction::Backward, 0.4, 3), 4);
        // A shorter gap lets the walk cross the dip.
        assert_eq!(include_edges(&ce, 5, Direction::Backward, 0.4, 4), 0);

        let ce = [0.9, 0.9, 0.9];
        assert_eq!(include_edges(&ce, 0, Direction::Backward, 0.4, 3), 0);
        assert_eq!(include_edges(&ce, 1, Direction::Forward, 0.4, 3), 2);
        assert_eq!(include_edges(&ce, 2, Direction::Forward, 0.4, 3), 2);
    }

    #[test]
    fn include_edges_returns_anchor_when_neighbor_fails() {
        let ce = [0.0, 0.0, 0.9, 0.0, 0.0];
        assert_eq!(include_edges(&ce, 2, Direction::Backward, 0.5, 1), 2);
        assert_eq!(include_edges(&ce, 2, Direction::Forward, 0.5, 1), 2);
    }

    #[test]
    fn otsu_rejects_constant() {
        assert!(matches!(
            otsu_threshold(&[0.4; 10], 256),
            Err(Error::NoContrast)
        ));
        assert!(matches!(
            otsu_threshold(&[0.4], 256),
            Err(Error::NoContrast)
        ));
    }

    #[test]
    fn gamma_one_gives_equal_thresholds() {
        let spec = FrameSpec::standard(48000).unwrap();
        let ce = EntropyVector::new(vec![0.1, 0.1, 0.9, 0.9, 0.2], spec);
        let pair = compute_thresholds(&ce, 1.0, 256).unwrap();
        assert_eq!(pair.core_threshold, pair.edge_threshold);
        let pair = compute_thresholds(&ce, 0.8, 256).unwrap();
        assert!(pair.edge_threshold < pair.core_threshold);
    }

    #[test]
    fn endpoint_mapping() {
        let spec = FrameSpec::standard(48000).unwrap();
        let r =
            EndpointResult::from_frames(FrameRange { first: 2, last: 5 }, spec, 100_000).unwrap();
        assert_eq!(r.start_sample, 960);
        assert_eq!(r.end_sample, 5 * 480 + 959);
        let r = EndpointResult::from_frames(FrameRange { first: 0, last: 5 }, spec, 3000).unwrap();
        assert_eq!(r.end_sample, 2999);
    }

    #[test]
    fn extract_segment_slices() {
        let spec = FrameSpec::new(2.0, 1.0, 1000).unwrap();
        let sig = SignalBuffer::new((0..10).map(|i| i as f64 / 10.0).collect(), 1000).unwrap();
        let full = EndpointResult::from_frames(FrameRange { first: 0, last: 8 }, spec, 10).unwrap();
        assert_eq!(extract_segment(&sig, &full).unwrap(), sig);
        let part = EndpointResult::from_frames(FrameRange { first: 2, last: 4 }, spec, 10).unwrap();
        let seg = extract_segment(&sig, &part).unwrap();
        assert_eq!(seg.len(), part.end_sample - part.start_sample + 1);
        assert_eq!(seg.samples(), &sig.samples()[2..=5]);
        let bad = EndpointResult {
            end_sample: 10,
            ..part
        };
        assert!(matches!(
            extract_segment(&sig, &bad),
            Err(Error::ResultOutOfRange(_))
        ));
    }

    #[test]
    fn config_validation() {
        assert!(DetectorConfig::default().validate().is_ok());
        let bad = DetectorConfig {
            gap_frames: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = DetectorConfig {
            scales_hf: Some(vec![1.0, 2.0]),
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
