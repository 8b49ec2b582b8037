use std::path::Path;

use anyhow::{Context, Result};
use wcsed::DetectorConfig;

use crate::args::Tunables;

/// File values (or defaults) with command-line overrides applied.
pub fn resolve(file: Option<&Path>, flags: &Tunables) -> Result<DetectorConfig> {
    let mut cfg = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))?;
            parse(&text).with_context(|| format!("invalid config {}", path.display()))?
        }
        None => DetectorConfig::default(),
    };
    apply(&mut cfg, flags);
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse(text: &str) -> Result<DetectorConfig> {
    Ok(toml::from_str(text)?)
}

fn apply(cfg: &mut DetectorConfig, t: &Tunables) {
    fn set<T: Clone>(dst: &mut T, src: &Option<T>) {
        if let Some(v) = src {
            *dst = v.clone();
        }
    }
    set(&mut cfg.frame_ms, &t.frame_ms);
    set(&mut cfg.shift_ms, &t.shift_ms);
    set(&mut cfg.bins, &t.bins);
    set(&mut cfg.gamma, &t.gamma);
    set(&mut cfg.gap_frames, &t.gap_frames);
    set(&mut cfg.merge_ms, &t.merge_ms);
    set(&mut cfg.loudness_th, &t.loudness_th);
    if t.scales_hf.is_some() {
        cfg.scales_hf = t.scales_hf.clone();
    }
    if t.scales_lf.is_some() {
        cfg.scales_lf = t.scales_lf.clone();
    }
}
