//! Daubechies-8 mother wavelet, dilated kernels and scale banks.
//!
//! The mother wavelet has no closed form, so it is sampled once by the
//! cascade algorithm on a dense dyadic grid. Kernels at any positive scale
//! are resampled from that grid by linear interpolation; a scale of `s`
//! means one wavelet time unit spans `s` signal samples, so the kernel
//! support is `15 * s` samples and the pseudo-frequency is `Fc * fs / s`.

use realfft::RealFftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Daubechies scaling (reconstruction low-pass) filter with 8 vanishing
/// moments. Sums to `sqrt(2)` and has unit energy.
pub const DB8_SCALING_FILTER: [f64; 16] = [
    0.054_415_842_243_104_01,
    0.312_871_590_914_299_95,
    0.675_630_736_297_289_8,
    0.585_354_683_654_206_7,
    -0.015_829_105_256_349_306,
    -0.284_015_542_961_546_9,
    0.000_472_484_573_913_282_8,
    0.128_747_426_620_478_47,
    -0.017_369_301_001_807_547,
    -0.044_088_253_930_794_755,
    0.013_981_027_917_398_282,
    0.008_746_094_047_405_777,
    -0.004_870_352_993_451_574,
    -0.000_391_740_373_376_947_05,
    0.000_675_449_406_450_569_3,
    -0.000_117_476_784_124_769_53,
];

pub const DEFAULT_CASCADE_LEVELS: u32 = 10;
const MIN_CASCADE_LEVELS: u32 = 4;

/// Quadrature-mirror high-pass filter: `g[k] = (-1)^k h[N-1-k]`.
pub fn db8_wavelet_filter() -> [f64; 16] {
    let h = DB8_SCALING_FILTER;
    let n = h.len();
    std::array::from_fn(|k| {
        if k % 2 == 0 {
            h[n - 1 - k]
        } else {
            -h[n - 1 - k]
        }
    })
}

/// Samples the DB8 wavelet function at `2^levels` points per unit of its
/// 15-unit support.
///
/// The result has zero mean and unit L2 norm.
pub fn sample_mother_wavelet(levels: u32) -> Result<Vec<f64>> {
    if levels < MIN_CASCADE_LEVELS {
        return Err(Error::TooFewLevels(levels));
    }
    let h = DB8_SCALING_FILTER;
    let sqrt2 = std::f64::consts::SQRT_2;

    // psi at resolution 2^-j is sqrt(2)^j * G(z^(2^(j-1))) H(z^(2^(j-2))) ... H(z):
    // start from the high-pass and refine with the low-pass at every level.
    let mut taps: Vec<f64> = db8_wavelet_filter().iter().map(|g| sqrt2 * g).collect();
    for _ in 1..levels {
        let mut up = vec![0.0; 2 * taps.len() - 1];
        for (i, &t) in taps.iter().enumerate() {
            up[2 * i] = t;
        }
        let mut next = vec![0.0; up.len() + h.len() - 1];
        for (i, &u) in up.iter().enumerate() {
            if u == 0.0 {
                continue;
            }
            for (k, &hk) in h.iter().enumerate() {
                next[i + k] += sqrt2 * u * hk;
            }
        }
        taps = next;
    }

    zero_mean_unit_norm(&mut taps);
    Ok(taps)
}

fn zero_mean_unit_norm(taps: &mut [f64]) {
    let mean = taps.iter().sum::<f64>() / taps.len() as f64;
    taps.iter_mut().for_each(|t| *t -= mean);
    let norm = taps.iter().map(|t| t * t).sum::<f64>().sqrt();
    if norm > 0.0 {
        taps.iter_mut().for_each(|t| *t /= norm);
    }
}

/// Densely sampled mother wavelet plus its estimated center frequency.
#[derive(Debug, Clone)]
pub struct MotherWavelet {
    taps: Vec<f64>,
    samples_per_unit: usize,
    center_frequency: f64,
}

impl MotherWavelet {
    pub fn db8() -> Self {
        Self::db8_with_levels(DEFAULT_CASCADE_LEVELS).expect("default cascade depth is valid")
    }

    pub fn db8_with_levels(levels: u32) -> Result<Self> {
        let taps = sample_mother_wavelet(levels)?;
        let samples_per_unit = 1usize << levels;
        let center_frequency = dominant_frequency(&taps, samples_per_unit);
        Ok(Self {
            taps,
            samples_per_unit,
            center_frequency,
        })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn samples_per_unit(&self) -> usize {
        self.samples_per_unit
    }

    /// Support length in wavelet time units (about 15 for DB8).
    pub fn support(&self) -> f64 {
        (self.taps.len() - 1) as f64 / self.samples_per_unit as f64
    }

    /// Center frequency `Fc` in cycles per wavelet unit.
    pub fn center_frequency(&self) -> f64 {
        self.center_frequency
    }

    /// Pseudo-frequency in Hz highlighted by `scale` at `sample_rate`.
    pub fn scale_to_frequency(&self, scale: f64, sample_rate: u32) -> Result<f64> {
        check_scale(scale)?;
        Ok(self.center_frequency * sample_rate as f64 / scale)
    }

    pub fn frequency_to_scale(&self, frequency_hz: f64, sample_rate: u32) -> Result<f64> {
        if !(frequency_hz > 0.0 && frequency_hz.is_finite()) {
            return Err(Error::InvalidScaleBank(format!(
                "frequency must be positive, got {frequency_hz}"
            )));
        }
        Ok(self.center_frequency * sample_rate as f64 / frequency_hz)
    }

    /// Kernel dilated to `scale` samples per wavelet unit.
    pub fn kernel(&self, scale: f64) -> Result<WaveletKernel> {
        kernel_at_scale(self, scale)
    }
}

fn check_scale(scale: f64) -> Result<()> {
    if scale > 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidScale(scale))
    }
}

/// Frequency (cycles per unit) of the strongest non-DC DFT bin.
fn dominant_frequency(taps: &[f64], samples_per_unit: usize) -> f64 {
    let n = taps.len();
    let mut planner = RealFftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    let mut input = taps.to_vec();
    let mut spectrum = fft.make_output_vec();
    fft.process(&mut input, &mut spectrum)
        .expect("buffer sizes come from the plan");
    let (bin, _) = spectrum
        .iter()
        .enumerate()
        .skip(1)
        .fold((1, f64::MIN), |best, (k, c)| {
            let m = c.norm();
            if m > best.1 {
                (k, m)
            } else {
                best
            }
        });
    bin as f64 * samples_per_unit as f64 / n as f64
}

/// Mother wavelet sampled on the signal grid at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletKernel {
    scale: f64,
    taps: Vec<f64>,
}

impl WaveletKernel {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn support_len(&self) -> usize {
        self.taps.len()
    }
}

/// Resamples `base` so that its support spans `scale * support` samples,
/// applies the `1/sqrt(scale)` factor and renormalizes to unit energy.
///
/// The dilation is in signal samples, so the same kernel serves any sample
/// rate; only the pseudo-frequency it highlights depends on the rate.
pub fn kernel_at_scale(base: &MotherWavelet, scale: f64) -> Result<WaveletKernel> {
    check_scale(scale)?;
    let span = base.support() * scale;
    let n_taps = span.floor() as usize + 1;
    if n_taps < 2 || !span.is_finite() {
        return Err(Error::KernelTooShort { scale });
    }
    let dense = &base.taps;
    let last = dense.len() - 1;
    let step = base.samples_per_unit as f64 / scale;
    let norm = 1.0 / scale.sqrt();
    let mut taps: Vec<f64> = (0..n_taps)
        .map(|j| {
            let pos = j as f64 * step;
            let i = (pos.floor() as usize).min(last);
            let frac = pos - i as f64;
            let v = if i == last {
                dense[last]
            } else {
                dense[i] + frac * (dense[i + 1] - dense[i])
            };
            v * norm
        })
        .collect();
    // Interpolation breaks exact zero mean; restore it, then unit energy.
    zero_mean_unit_norm(&mut taps);
    Ok(WaveletKernel { scale, taps })
}

/// High-frequency and low-frequency analysis scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleBank {
    hf_scales: Vec<f64>,
    lf_scales: Vec<f64>,
}

impl ScaleBank {
    /// Validates that both banks are non-empty, positive and ascending, that
    /// the high-frequency bank is the larger one, and that every
    /// high-frequency scale lies below every low-frequency scale.
    pub fn new(hf_scales: Vec<f64>, lf_scales: Vec<f64>) -> Result<Self> {
        for (name, bank) in [("hf", &hf_scales), ("lf", &lf_scales)] {
            if bank.is_empty() {
                return Err(Error::InvalidScaleBank(format!("{name} bank is empty")));
            }
            if let Some(s) = bank.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
                return Err(Error::InvalidScaleBank(format!(
                    "{name} scale {s} is not positive"
                )));
            }
            if bank.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidScaleBank(format!(
                    "{name} scales must be strictly ascending"
                )));
            }
        }
        if hf_scales.len() <= lf_scales.len() {
            return Err(Error::InvalidScaleBank(format!(
                "hf bank needs more scales than lf bank ({} <= {})",
                hf_scales.len(),
                lf_scales.len()
            )));
        }
        if hf_scales.last() >= lf_scales.first() {
            return Err(Error::InvalidScaleBank(
                "every hf scale must be below every lf scale".into(),
            ));
        }
        Ok(Self {
            hf_scales,
            lf_scales,
        })
    }

    pub fn hf_scales(&self) -> &[f64] {
        &self.hf_scales
    }

    pub fn lf_scales(&self) -> &[f64] {
        &self.lf_scales
    }
}

/// Frequency layout used to derive a [`ScaleBank`] for a given sample rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BankFrequencies {
    /// Highest pseudo-frequency of the hf bank (inclusive).
    pub hf_high_hz: f64,
    /// Boundary between the banks: inclusive for hf, exclusive for lf.
    pub split_hz: f64,
    /// Lowest pseudo-frequency of the lf bank (inclusive).
    pub lf_low_hz: f64,
    pub hf_count: usize,
    pub lf_count: usize,
}

impl Default for BankFrequencies {
    fn default() -> Self {
        Self {
            hf_high_hz: 3200.0,
            split_hz: 1000.0,
            lf_low_hz: 300.0,
            hf_count: 12,
            lf_count: 6,
        }
    }
}

pub const MIN_BANK_SAMPLE_RATE: u32 = 8000;

/// 12 hf scales log-spaced over 1000..=3200 Hz and 6 lf scales over
/// 300..1000 Hz.
pub fn default_scale_bank(base: &MotherWavelet, sample_rate: u32) -> Result<ScaleBank> {
    scale_bank_for(base, sample_rate, &BankFrequencies::default())
}

pub fn scale_bank_for(
    base: &MotherWavelet,
    sample_rate: u32,
    layout: &BankFrequencies,
) -> Result<ScaleBank> {
    if sample_rate < MIN_BANK_SAMPLE_RATE || (sample_rate as f64) / 2.0 < layout.hf_high_hz {
        return Err(Error::NyquistViolation(sample_rate));
    }
    let BankFrequencies {
        hf_high_hz,
        split_hz,
        lf_low_hz,
        hf_count,
        lf_count,
    } = *layout;
    if !(lf_low_hz > 0.0 && lf_low_hz < split_hz && split_hz < hf_high_hz) {
        return Err(Error::InvalidScaleBank(format!(
            "need 0 < lf_low ({lf_low_hz}) < split ({split_hz}) < hf_high ({hf_high_hz})"
        )));
    }
    if hf_count < 2 || lf_count == 0 {
        return Err(Error::InvalidScaleBank(
            "hf bank needs at least 2 scales and lf at least 1".into(),
        ));
    }

    // hf: endpoints included. lf: lower endpoint included, split excluded.
    let hf_ratio = (hf_high_hz / split_hz).ln();
    let mut hf: Vec<f64> = (0..hf_count)
        .map(|k| split_hz * (hf_ratio * k as f64 / (hf_count - 1) as f64).exp())
        .map(|f| base.frequency_to_scale(f, sample_rate))
        .collect::<Result<_>>()?;
    let lf_ratio = (split_hz / lf_low_hz).ln();
    let mut lf: Vec<f64> = (0..lf_count)
        .map(|k| lf_low_hz * (lf_ratio * k as f64 / lf_count as f64).exp())
        .map(|f| base.frequency_to_scale(f, sample_rate))
        .collect::<Result<_>>()?;
    hf.sort_by(f64::total_cmp);
    lf.sort_by(f64::total_cmp);
    ScaleBank::new(hf, lf)
}
