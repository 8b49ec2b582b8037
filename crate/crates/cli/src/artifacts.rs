use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use wcsed::{Combination, Detection, DetectorConfig, FrameRange, ThresholdPair};

/// Body of `<name>.endpoints.json`.
#[derive(Debug, Serialize)]
pub struct EndpointReport<'a> {
    pub input: &'a str,
    pub sample_rate: u32,
    pub num_samples: usize,
    pub start_frame: usize,
    pub end_frame: usize,
    pub start_sample: usize,
    pub end_sample: usize,
    pub start_s: f64,
    pub end_s: f64,
    pub core: FrameRange,
    pub thresholds: ThresholdPair,
    pub loudness: f64,
    pub combination: Combination,
    pub scales_hf: &'a [f64],
    pub scales_lf: &'a [f64],
    pub config: &'a DetectorConfig,
}

impl<'a> EndpointReport<'a> {
    pub fn new(
        input: &'a str,
        num_samples: usize,
        det: &'a Detection,
        config: &'a DetectorConfig,
    ) -> Self {
        let e = &det.endpoints;
        let rate = e.spec.sample_rate();
        Self {
            input,
            sample_rate: rate,
            num_samples,
            start_frame: e.start_frame,
            end_frame: e.end_frame,
            start_sample: e.start_sample,
            end_sample: e.end_sample,
            start_s: e.start_sample as f64 / rate as f64,
            end_s: (e.end_sample + 1) as f64 / rate as f64,
            core: det.core,
            thresholds: det.thresholds,
            loudness: det.loudness,
            combination: det.combination,
            scales_hf: det.bank.hf_scales(),
            scales_lf: det.bank.lf_scales(),
            config,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Per-frame `frame,ce_l,ce_h,active` rows.
pub fn trace_csv(det: &Detection) -> String {
    let range = det.endpoints.frames();
    let mut out = String::from("frame,ce_l,ce_h,active\n");
    for (i, (l, h)) in det.ce_l.values().iter().zip(det.ce_h.values()).enumerate() {
        let _ = writeln!(out, "{i},{l},{h},{}", u8::from(range.contains(i)));
    }
    out
}
