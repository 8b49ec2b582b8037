use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wcsed::{
    detect_endpoints, extract_segment, otsu_threshold, Detector, DetectorConfig, EntropyRoute,
    Error, SignalBuffer,
};

const RATE: u32 = 48_000;

/// Harmonic complex over `[on, off)` seconds with 20 ms raised-cosine ramps.
fn voiced(total_s: f64, on: f64, off: f64, amp: f64) -> Vec<f64> {
    let n = (total_s * RATE as f64) as usize;
    let (a, b) = ((on * RATE as f64) as usize, (off * RATE as f64) as usize);
    let ramp = (0.02 * RATE as f64) as usize;
    let mut x = vec![0.0; n];
    for (i, v) in x.iter_mut().enumerate().take(b).skip(a) {
        let t = i as f64 / RATE as f64;
        let edge = (i - a).min(b - 1 - i);
        let env = if edge < ramp {
            0.5 - 0.5 * (PI * edge as f64 / ramp as f64).cos()
        } else {
            1.0
        };
        let s: f64 = (1..=6)
            .map(|k| (2.0 * PI * 160.0 * k as f64 * t + k as f64).sin() / k as f64)
            .sum();
        *v = amp * env * s / 2.5;
    }
    x
}

fn add_click(x: &mut [f64], at_s: f64, dur_s: f64, amp: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = (at_s * RATE as f64) as usize;
    let n = (dur_s * RATE as f64) as usize;
    let mut prev = 0.0;
    for i in 0..n {
        // First-differenced white noise tilts energy toward high frequencies.
        let w: f64 = rng.random_range(-1.0..1.0);
        let env = (PI * i as f64 / n as f64).sin();
        x[a + i] += amp * env * (w - prev) / 2.0;
        prev = w;
    }
}

#[test]
fn silence_speech_silence() {
    let x = voiced(2.0, 0.5, 1.5, 0.5);
    let sig = SignalBuffer::new(x, RATE).unwrap();
    let r = detect_endpoints(&sig, &DetectorConfig::default()).unwrap();
    assert!(
        (47..=53).contains(&r.start_frame),
        "start {}",
        r.start_frame
    );
    assert!((147..=153).contains(&r.end_frame), "end {}", r.end_frame);
    assert!(r.start_sample <= r.end_sample && r.end_sample < sig.len());
}

#[test]
fn click_before_onset_is_excluded() {
    let clean = SignalBuffer::new(voiced(2.0, 0.5, 1.5, 0.5), RATE).unwrap();
    let mut x = voiced(2.0, 0.5, 1.5, 0.5);
    add_click(&mut x, 0.27, 0.03, 0.8, 4);
    let noisy = SignalBuffer::new(x, RATE).unwrap();
    let cfg = DetectorConfig::default();
    let a = detect_endpoints(&clean, &cfg).unwrap();
    let b = detect_endpoints(&noisy, &cfg).unwrap();
    assert!(
        a.start_frame.abs_diff(b.start_frame) <= 3,
        "{} vs {}",
        a.start_frame,
        b.start_frame
    );
    assert!(b.start_sample > (0.30 * RATE as f64) as usize);
}

#[test]
fn repeated_runs_are_identical() {
    let mut x = voiced(2.5, 0.8, 1.9, 0.4);
    add_click(&mut x, 0.3, 0.02, 0.6, 1);
    let sig = SignalBuffer::new(x, RATE).unwrap();
    let det = Detector::new(DetectorConfig::default()).unwrap();
    let a = det.detect(&sig).unwrap();
    let b = det.detect(&sig).unwrap();
    assert_eq!(a.endpoints, b.endpoints);
    assert_eq!(a.ce_l, b.ce_l);
    assert_eq!(a.ce_h, b.ce_h);
}

#[test]
fn endpoints_stable_across_levels() {
    let cfg = DetectorConfig::default();
    let base = voiced(2.0, 0.5, 1.5, 1.0);
    let mut frames = Vec::new();
    for gain in [0.9, 0.3, 0.05, 0.01] {
        let sig = SignalBuffer::new(base.iter().map(|v| v * gain).collect(), RATE).unwrap();
        frames.push(detect_endpoints(&sig, &cfg).unwrap().frames());
    }
    for f in &frames[1..] {
        assert!(f.first.abs_diff(frames[0].first) <= 3 && f.last.abs_diff(frames[0].last) <= 3);
    }
}

#[test]
fn single_route_runs_and_brackets_core() {
    let sig = SignalBuffer::new(voiced(2.0, 0.5, 1.5, 0.5), RATE).unwrap();
    let cfg = DetectorConfig {
        route: EntropyRoute::Single,
        ..DetectorConfig::default()
    };
    let d = Detector::new(cfg).unwrap().detect(&sig).unwrap();
    assert!(d.endpoints.start_frame <= d.core.first && d.core.last <= d.endpoints.end_frame);
    assert_eq!(d.ce_l, d.ce_h);
    assert!(d.thresholds.edge_threshold <= d.thresholds.core_threshold);
}

#[test]
fn explicit_scale_lists_override_bank() {
    let sig = SignalBuffer::new(voiced(2.0, 0.5, 1.5, 0.5), RATE).unwrap();
    let cfg = DetectorConfig {
        scales_hf: Some(vec![10.0, 14.0, 20.0, 28.0]),
        scales_lf: Some(vec![40.0, 60.0, 90.0]),
        ..DetectorConfig::default()
    };
    let d = Detector::new(cfg).unwrap().detect(&sig).unwrap();
    assert_eq!(d.bank.hf_scales(), &[10.0, 14.0, 20.0, 28.0]);
    assert!((45..=55).contains(&d.endpoints.start_frame));
}

#[test]
fn extracted_segment_matches_sample_span() {
    let sig = SignalBuffer::new(voiced(2.0, 0.5, 1.5, 0.5), RATE).unwrap();
    let r = detect_endpoints(&sig, &DetectorConfig::default()).unwrap();
    let seg = extract_segment(&sig, &r).unwrap();
    assert_eq!(seg.len(), r.end_sample - r.start_sample + 1);
    assert_eq!(seg.samples(), &sig.samples()[r.start_sample..=r.end_sample]);
}

#[test]
fn silent_or_tiny_input_is_rejected() {
    let cfg = DetectorConfig::default();
    let silent = SignalBuffer::new(vec![0.0; RATE as usize], RATE).unwrap();
    assert!(matches!(
        detect_endpoints(&silent, &cfg),
        Err(Error::NoContrast | Error::NoSpeechDetected)
    ));
    let tiny = SignalBuffer::new(vec![0.1; 100], RATE).unwrap();
    assert!(matches!(
        detect_endpoints(&tiny, &cfg),
        Err(Error::ShorterThanFrame { .. })
    ));
}

#[test]
fn otsu_splits_bimodal_cluster() {
    let mut v = vec![0.1; 50];
    v.extend(vec![0.9; 50]);
    let t = otsu_threshold(&v, 256).unwrap();
    assert!(t > 0.1 && t < 0.9);
}
