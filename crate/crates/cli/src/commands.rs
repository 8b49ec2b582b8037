use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use log::{error, info};
use rayon::prelude::*;
use wcsed::eval::{read_labels, write_labels};
use wcsed::synth::{CorpusItemSpec, CorpusSpec};
use wcsed::{
    aggregate_report, extract_segment, load_wav, random_corpus, save_wav, synthesize_test_signal,
    Detector, DetectorConfig, LabelRecord, LabeledDetection,
};

use crate::artifacts::{trace_csv, write_json, EndpointReport};

fn is_wav(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("wav"))
}

/// Expands directories to the WAV files directly inside them, sorted.
pub fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    if inputs.is_empty() {
        bail!("no --input given");
    }
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(input)
                .with_context(|| format!("cannot list {}", input.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && is_wav(p))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}

fn stem(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_owned)
        .ok_or_else(|| anyhow!("cannot derive an output name from {}", path.display()))
}

fn detect_one(detector: &Detector, path: &Path, out_dir: &Path, trace: bool) -> Result<()> {
    let name = stem(path)?;
    let signal = load_wav(path)?;
    let det = detector.detect(&signal)?;
    let segment = extract_segment(&signal, &det.endpoints)?;
    save_wav(out_dir.join(format!("{name}.extracted.wav")), &segment)?;
    let file_name = path.file_name().and_then(|s| s.to_str()).unwrap_or(&name);
    let report = EndpointReport::new(file_name, signal.len(), &det, detector.config());
    write_json(&out_dir.join(format!("{name}.endpoints.json")), &report)?;
    if trace {
        let p = out_dir.join(format!("{name}.trace.csv"));
        std::fs::write(&p, trace_csv(&det))
            .with_context(|| format!("cannot write {}", p.display()))?;
    }
    info!(
        "{}: frames {}..={} samples {}..={}",
        path.display(),
        det.endpoints.start_frame,
        det.endpoints.end_frame,
        det.endpoints.start_sample,
        det.endpoints.end_sample
    );
    Ok(())
}

pub fn run_detect(
    config: DetectorConfig,
    inputs: &[PathBuf],
    out_dir: &Path,
    trace: bool,
) -> Result<()> {
    let files = collect_inputs(inputs)?;
    if files.is_empty() {
        bail!("no WAV files found in the given inputs");
    }
    let mut names = BTreeMap::new();
    for f in &files {
        if let Some(prev) = names.insert(stem(f)?, f) {
            bail!(
                "{} and {} would write the same output names",
                prev.display(),
                f.display()
            );
        }
    }
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let detector = Detector::new(config)?;
    let outcomes: Vec<Result<()>> = files
        .par_iter()
        .map(|f| detect_one(&detector, f, out_dir, trace))
        .collect();
    let mut failed = 0;
    for (f, r) in files.iter().zip(&outcomes) {
        if let Err(e) = r {
            failed += 1;
            error!("{}: {e:#}", f.display());
        }
    }
    if failed > 0 {
        bail!("{failed} of {} files failed", files.len());
    }
    Ok(())
}

fn resolve_label_path(labels: &Path, entry: &str) -> PathBuf {
    let p = Path::new(entry);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        labels.parent().unwrap_or(Path::new(".")).join(p)
    }
}

pub fn run_eval(config: DetectorConfig, labels: Option<&Path>, out_dir: &Path) -> Result<String> {
    let labels = labels.ok_or_else(|| anyhow!("eval mode requires --labels"))?;
    let records = read_labels(labels)?;
    let detector = Detector::new(config)?;
    let outcomes: Vec<Result<LabeledDetection>> = records
        .par_iter()
        .map(|r| {
            let path = resolve_label_path(labels, &r.path);
            let signal = load_wav(&path)?;
            let det = detector.detect(&signal)?;
            Ok(LabeledDetection {
                name: r.path.clone(),
                label: r.label()?,
                detected: det.endpoints.frames(),
            })
        })
        .collect();
    let mut items = Vec::with_capacity(outcomes.len());
    let mut failed = 0;
    for (r, o) in records.iter().zip(outcomes) {
        match o {
            Ok(d) => items.push(d),
            Err(e) => {
                failed += 1;
                error!("{}: {e:#}", r.path);
            }
        }
    }
    if failed > 0 {
        bail!("{failed} of {} labeled files failed", records.len());
    }
    let report = aggregate_report(&items)?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    write_json(&out_dir.join("report.json"), &report)?;
    let table = report.to_table();
    std::fs::write(out_dir.join("report.txt"), &table)?;
    let mut csv = String::from(
        "path,group,truth_start,truth_end,detected_start,detected_end,start_pct,end_pct\n",
    );
    for it in &report.items {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            it.name,
            it.group,
            it.truth_start,
            it.truth_end,
            it.detected_start,
            it.detected_end,
            it.start_pct,
            it.end_pct
        ));
    }
    std::fs::write(out_dir.join("report.csv"), csv)?;
    Ok(table)
}

pub struct SynthRequest<'a> {
    pub spec_file: Option<&'a Path>,
    pub count: usize,
    pub seed: u64,
    pub sample_rate: u32,
}

fn load_corpus(path: &Path) -> Result<Vec<CorpusItemSpec>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read corpus spec {}", path.display()))?;
    let spec: CorpusSpec =
        toml::from_str(&text).with_context(|| format!("invalid corpus spec {}", path.display()))?;
    Ok(spec.items)
}

pub fn run_synth(config: &DetectorConfig, req: &SynthRequest, out_dir: &Path) -> Result<()> {
    let items = match req.spec_file {
        Some(p) => load_corpus(p)?,
        None => random_corpus(req.count, req.sample_rate, req.seed),
    };
    if items.is_empty() {
        bail!("corpus has no items");
    }
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let records: Vec<Result<LabelRecord>> = items
        .par_iter()
        .map(|item| {
            let spec = config.frame_spec(item.sample_rate)?;
            let (signal, label) = synthesize_test_signal(item, &spec)?;
            let file = format!("{}.wav", item.name);
            save_wav(out_dir.join(&file), &signal)?;
            Ok(LabelRecord {
                path: file,
                start_frame: label.start_frame,
                end_frame: label.end_frame,
                group: label.group,
            })
        })
        .collect();
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    write_labels(out_dir.join("labels.csv"), &records)?;
    let echo = toml::to_string(&CorpusSpec { items })?;
    std::fs::write(out_dir.join("corpus.toml"), echo)?;
    info!("wrote {} items to {}", records.len(), out_dir.display());
    Ok(())
}
