//! Seeded synthetic recordings with exact ground truth.
//!
//! Speech is a harmonic complex with slow pitch drift, raised-cosine
//! on/off ramps and a band-limited 2-4 kHz fricative tail. Artifacts are
//! band-limited noise bursts: breaths (1-4 kHz, 100-400 ms) and clicks
//! (2-6 kHz, 5-30 ms). Everything outside the declared spans is exactly
//! zero.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::convolution::convolve_fft;
use crate::entropy::FrameSpec;
use crate::error::{Error, Result};
use crate::eval::GroundTruthLabel;
use crate::signal::SignalBuffer;

const BANDPASS_TAPS: usize = 1023;
const VOICED_RAMP_S: f64 = 0.02;
const FRICATIVE_RAMP_S: f64 = 0.01;
const FRICATIVE_LEVEL: f64 = 0.35;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BurstKind {
    Breath,
    Click,
}

impl BurstKind {
    pub fn default_band(self) -> (f64, f64) {
        match self {
            BurstKind::Breath => (1000.0, 4000.0),
            BurstKind::Click => (2000.0, 6000.0),
        }
    }
}

/// One non-speech artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurstSpec {
    pub kind: BurstKind,
    pub start_s: f64,
    pub duration_s: f64,
    pub low_hz: f64,
    pub high_hz: f64,
    /// Peak amplitude.
    pub amplitude: f64,
}

impl BurstSpec {
    pub fn end_s(&self) -> f64 {
        self.start_s + self.duration_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeechSpec {
    pub start_s: f64,
    pub duration_s: f64,
    pub fundamental_hz: f64,
    pub harmonics: usize,
    /// Peak amplitude of the whole utterance.
    pub amplitude: f64,
    /// Length of the unvoiced tail that closes the utterance.
    pub fricative_tail_s: f64,
}

impl SpeechSpec {
    pub fn end_s(&self) -> f64 {
        self.start_s + self.duration_s
    }
}

/// Declarative description of one synthetic recording.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusItemSpec {
    pub name: String,
    #[serde(default = "default_group")]
    pub group: String,
    pub sample_rate: u32,
    pub total_s: f64,
    pub seed: u64,
    pub speech: SpeechSpec,
    #[serde(default)]
    pub bursts: Vec<BurstSpec>,
}

fn default_group() -> String {
    "synthetic".into()
}

/// A list of items, as read from a corpus file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    #[serde(rename = "item")]
    pub items: Vec<CorpusItemSpec>,
}

impl CorpusItemSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCorpusItem(format!("{}: {m}", self.name)));
        if self.sample_rate == 0 {
            return bad("sample rate must be positive".into());
        }
        let nyquist = self.sample_rate as f64 / 2.0;
        let sp = &self.speech;
        if !(sp.start_s >= 0.0 && sp.duration_s > 0.0 && sp.end_s() <= self.total_s) {
            return bad(format!(
                "speech span {}..{} s outside 0..{} s",
                sp.start_s,
                sp.end_s(),
                self.total_s
            ));
        }
        if !(sp.amplitude > 0.0 && sp.amplitude <= 1.0) {
            return bad(format!("speech amplitude {} outside (0, 1]", sp.amplitude));
        }
        if sp.harmonics == 0 || sp.fundamental_hz.is_nan() || sp.fundamental_hz <= 0.0 {
            return bad("speech needs a positive fundamental and at least one harmonic".into());
        }
        if sp.fundamental_hz * sp.harmonics as f64 >= nyquist {
            return bad(format!(
                "harmonic {} of {} Hz is above Nyquist ({nyquist} Hz)",
                sp.harmonics, sp.fundamental_hz
            ));
        }
        if 4000.0 >= nyquist {
            return bad(format!(
                "fricative band 2-4 kHz is above Nyquist ({nyquist} Hz)"
            ));
        }
        if !(sp.fricative_tail_s >= 0.0 && sp.fricative_tail_s < sp.duration_s) {
            return bad("fricative tail must be shorter than the utterance".into());
        }

        let mut spans = vec![(sp.start_s, sp.end_s(), "speech".to_string())];
        for (i, b) in self.bursts.iter().enumerate() {
            if !(b.start_s >= 0.0 && b.duration_s > 0.0 && b.end_s() <= self.total_s) {
                return bad(format!("burst {i} outside the recording"));
            }
            if !(b.low_hz > 0.0 && b.low_hz < b.high_hz) {
                return bad(format!(
                    "burst {i} band {}..{} Hz is empty",
                    b.low_hz, b.high_hz
                ));
            }
            if b.high_hz >= nyquist {
                return bad(format!(
                    "burst {i} band edge {} Hz is above Nyquist ({nyquist} Hz)",
                    b.high_hz
                ));
            }
            if !(b.amplitude > 0.0 && b.amplitude <= 1.0) {
                return bad(format!(
                    "burst {i} amplitude {} outside (0, 1]",
                    b.amplitude
                ));
            }
            spans.push((b.start_s, b.end_s(), format!("burst {i}")));
        }
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in spans.windows(2) {
            if w[1].0 < w[0].1 {
                return bad(format!("{} overlaps {}", w[0].2, w[1].2));
            }
        }
        Ok(())
    }

    /// Ground truth for this item under `spec`'s frame shift.
    pub fn label(&self, spec: &FrameSpec) -> GroundTruthLabel {
        let to_frame = |s: f64| (s * 1000.0 / spec.frame_shift_ms()).round() as usize;
        GroundTruthLabel {
            start_frame: to_frame(self.speech.start_s),
            end_frame: to_frame(self.speech.end_s()),
            group: self.group.clone(),
        }
    }
}

fn blackman(n: usize) -> Vec<f64> {
    let m = (n - 1) as f64;
    (0..n)
        .map(|i| {
            let x = i as f64 / m;
            0.42 - 0.5 * (2.0 * PI * x).cos() + 0.08 * (4.0 * PI * x).cos()
        })
        .collect()
}

/// Blackman-windowed sinc band-pass between `low_hz` and `high_hz`.
fn bandpass_fir(low_hz: f64, high_hz: f64, sample_rate: u32) -> Vec<f64> {
    let n = BANDPASS_TAPS;
    let mid = (n - 1) as f64 / 2.0;
    let lowpass = |fc: f64, t: f64| {
        let w = 2.0 * fc / sample_rate as f64;
        if t == 0.0 {
            w
        } else {
            (PI * w * t).sin() / (PI * t)
        }
    };
    blackman(n)
        .into_iter()
        .enumerate()
        .map(|(i, win)| {
            let t = i as f64 - mid;
            (lowpass(high_hz, t) - lowpass(low_hz, t)) * win
        })
        .collect()
}

/// `len` samples of unit-peak band-limited Gaussian noise.
fn band_noise(
    rng: &mut ChaCha8Rng,
    len: usize,
    low_hz: f64,
    high_hz: f64,
    rate: u32,
) -> Result<Vec<f64>> {
    let fir = bandpass_fir(low_hz, high_hz, rate);
    let white: Vec<f64> = (0..len + fir.len() - 1)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    let full = convolve_fft(&white, &fir)?;
    // Fully overlapped ("valid") part only.
    let mut out = full[fir.len() - 1..fir.len() - 1 + len].to_vec();
    normalize_peak(&mut out, 1.0);
    Ok(out)
}

fn normalize_peak(x: &mut [f64], peak: f64) {
    let max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max > 0.0 {
        x.iter_mut().for_each(|v| *v *= peak / max);
    }
}

/// Unit plateau with raised-cosine ramps of `ramp` samples at both ends.
fn ramp_envelope(len: usize, ramp: usize) -> Vec<f64> {
    let ramp = ramp.min(len / 2);
    (0..len)
        .map(|i| {
            let edge = i.min(len - 1 - i);
            if edge < ramp {
                0.5 - 0.5 * (PI * edge as f64 / ramp as f64).cos()
            } else {
                1.0
            }
        })
        .collect()
}

fn secs_to_samples(s: f64, rate: u32) -> usize {
    (s * rate as f64).round() as usize
}

fn synthesize_speech(spec: &SpeechSpec, rate: u32, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let n = secs_to_samples(spec.duration_s, rate);
    let tail = secs_to_samples(spec.fricative_tail_s, rate).min(n);
    let fs = rate as f64;

    let drift_hz: f64 = rng.random_range(2.0..5.0);
    let phases: Vec<f64> = (0..spec.harmonics)
        .map(|_| rng.random_range(0.0..2.0 * PI))
        .collect();
    let mut phase = 0.0;
    let mut voiced: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let f0 = spec.fundamental_hz * (1.0 + 0.05 * (2.0 * PI * drift_hz * t).sin());
            phase += 2.0 * PI * f0 / fs;
            phases
                .iter()
                .enumerate()
                .map(|(k, p)| ((k + 1) as f64 * phase + p).sin() / (k + 1) as f64)
                .sum()
        })
        .collect();
    normalize_peak(&mut voiced, 1.0);
    let voiced_env = ramp_envelope(n - tail, secs_to_samples(VOICED_RAMP_S, rate));
    for (i, v) in voiced.iter_mut().enumerate() {
        *v *= voiced_env.get(i).copied().unwrap_or(0.0);
    }

    if tail > 0 {
        let ramp = secs_to_samples(FRICATIVE_RAMP_S, rate);
        let span = (tail + ramp).min(n);
        let noise = band_noise(rng, n, 2000.0, 4000.0, rate)?;
        let env = ramp_envelope(span, ramp);
        for (j, e) in env.iter().enumerate() {
            let i = n - span + j;
            voiced[i] += FRICATIVE_LEVEL * noise[i] * e;
        }
    }
    normalize_peak(&mut voiced, spec.amplitude);
    Ok(voiced)
}

/// Renders `item` and its ground-truth label under `frames`.
pub fn synthesize_test_signal(
    item: &CorpusItemSpec,
    frames: &FrameSpec,
) -> Result<(SignalBuffer, GroundTruthLabel)> {
    item.validate()?;
    let rate = item.sample_rate;
    let mut rng = ChaCha8Rng::seed_from_u64(item.seed);
    let mut x = vec![0.0; secs_to_samples(item.total_s, rate)];

    let speech = synthesize_speech(&item.speech, rate, &mut rng)?;
    let s0 = secs_to_samples(item.speech.start_s, rate);
    for (dst, v) in x[s0..].iter_mut().zip(&speech) {
        *dst += v;
    }

    for b in &item.bursts {
        let len = secs_to_samples(b.duration_s, rate).max(2);
        let mut z = band_noise(&mut rng, len, b.low_hz, b.high_hz, rate)?;
        let env = ramp_envelope(len, (len / 5).max(1));
        z.iter_mut().zip(&env).for_each(|(v, e)| *v *= e);
        normalize_peak(&mut z, b.amplitude);
        let b0 = secs_to_samples(b.start_s, rate);
        for (dst, v) in x[b0..].iter_mut().zip(&z) {
            *dst += v;
        }
    }

    let signal = SignalBuffer::new(x, rate)?;
    Ok((signal, item.label(frames)))
}

/// Draws one item: speech onset 0.3-2.5 s, 0.5-2 s long, with 1-4 artifacts
/// each separated from the speech (and each other) by 100-300 ms.
pub fn random_item(
    name: impl Into<String>,
    sample_rate: u32,
    rng: &mut ChaCha8Rng,
) -> CorpusItemSpec {
    let start_s: f64 = rng.random_range(0.3..2.5);
    let duration_s: f64 = rng.random_range(0.5..2.0);
    let amplitude: f64 = rng.random_range(0.15..0.9);
    let fundamental_hz: f64 = rng.random_range(120.0..300.0);
    let harmonics: usize = rng.random_range(4..=8);
    let fricative_tail_s: f64 = rng.random_range(0.05..0.12);
    let speech = SpeechSpec {
        start_s,
        duration_s,
        fundamental_hz,
        harmonics,
        amplitude,
        fricative_tail_s,
    };

    let count: usize = rng.random_range(1..=4);
    let mut before = start_s;
    let mut after = speech.end_s();
    let mut bursts = Vec::with_capacity(count);
    for _ in 0..count {
        let kind = if rng.random_bool(0.5) {
            BurstKind::Click
        } else {
            BurstKind::Breath
        };
        let (duration_s, level) = match kind {
            BurstKind::Click => (rng.random_range(0.005..0.03), rng.random_range(0.3..1.0)),
            BurstKind::Breath => (rng.random_range(0.1..0.4), rng.random_range(0.1..0.4)),
        };
        let (low_hz, high_hz) = kind.default_band();
        let gap: f64 = rng.random_range(0.1..0.3);
        let fits_before = before - gap - duration_s > 0.02;
        let start = if fits_before && rng.random_bool(0.5) {
            before -= gap + duration_s;
            before
        } else {
            let s = after + gap;
            after = s + duration_s;
            s
        };
        bursts.push(BurstSpec {
            kind,
            start_s: start,
            duration_s,
            low_hz,
            high_hz,
            amplitude: amplitude * level,
        });
    }
    let total_s = after + rng.random_range(0.2..0.5);
    let group = if fundamental_hz >= 200.0 {
        "high_f0"
    } else {
        "low_f0"
    };
    CorpusItemSpec {
        name: name.into(),
        group: group.into(),
        sample_rate,
        total_s,
        seed: rng.random(),
        speech,
        bursts,
    }
}

/// `count` items drawn from one seeded stream.
pub fn random_corpus(count: usize, sample_rate: u32, seed: u64) -> Vec<CorpusItemSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| random_item(format!("item_{i:03}"), sample_rate, &mut rng))
        .collect()
}
