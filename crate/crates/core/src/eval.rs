//! Frame-deviation evaluation against ground-truth labels.
//!
//! Deviation is the absolute frame error of each endpoint as a percentage
//! of the true segment length in frames. Reports group items by a free-form
//! tag and average per group and overall.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detect::{EndpointResult, FrameRange};
use crate::error::{Error, Result};

/// Hand-marked (or constructed) speech span in frames, inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthLabel {
    pub start_frame: usize,
    pub end_frame: usize,
    pub group: String,
}

impl GroundTruthLabel {
    pub fn new(start_frame: usize, end_frame: usize, group: impl Into<String>) -> Result<Self> {
        if start_frame > end_frame {
            return Err(Error::InvalidLabel(format!(
                "start frame {start_frame} after end frame {end_frame}"
            )));
        }
        Ok(Self {
            start_frame,
            end_frame,
            group: group.into(),
        })
    }

    /// Segment length in frames.
    pub fn len_frames(&self) -> usize {
        (self.end_frame + 1).saturating_sub(self.start_frame)
    }

    pub fn frames(&self) -> FrameRange {
        FrameRange {
            first: self.start_frame,
            last: self.end_frame,
        }
    }
}

/// `(start %, end %)` deviation of `detected` from `truth`.
pub fn frame_deviation(truth: &GroundTruthLabel, detected: &EndpointResult) -> Result<(f64, f64)> {
    deviation_of_frames(truth, detected.frames())
}

pub fn deviation_of_frames(truth: &GroundTruthLabel, detected: FrameRange) -> Result<(f64, f64)> {
    let len = truth.len_frames();
    if len == 0 {
        return Err(Error::ZeroLengthLabel);
    }
    let pct = |a: usize, b: usize| 100.0 * a.abs_diff(b) as f64 / len as f64;
    Ok((
        pct(detected.first, truth.start_frame),
        pct(detected.last, truth.end_frame),
    ))
}

/// One labeled recording with its detected span.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDetection {
    pub name: String,
    pub label: GroundTruthLabel,
    pub detected: FrameRange,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemDeviation {
    pub name: String,
    pub group: String,
    pub truth_start: usize,
    pub truth_end: usize,
    pub detected_start: usize,
    pub detected_end: usize,
    pub start_pct: f64,
    pub end_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: String,
    pub count: usize,
    pub mean_start_pct: f64,
    pub mean_end_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub items: Vec<ItemDeviation>,
    /// Sorted by group name.
    pub groups: Vec<GroupSummary>,
    /// Mean over all items (not over group means).
    pub overall: GroupSummary,
}

fn summarize<'a>(group: &str, items: impl Iterator<Item = &'a ItemDeviation>) -> GroupSummary {
    let (count, start, end) = items.fold((0usize, 0.0, 0.0), |(n, s, e), it| {
        (n + 1, s + it.start_pct, e + it.end_pct)
    });
    let n = count.max(1) as f64;
    GroupSummary {
        group: group.to_string(),
        count,
        mean_start_pct: start / n,
        mean_end_pct: end / n,
    }
}

/// Per-item deviations plus per-group and overall means.
pub fn aggregate_report(items: &[LabeledDetection]) -> Result<DeviationReport> {
    if items.is_empty() {
        return Err(Error::EmptyReport);
    }
    let rows = items
        .iter()
        .map(|it| {
            let (start_pct, end_pct) = deviation_of_frames(&it.label, it.detected)?;
            Ok(ItemDeviation {
                name: it.name.clone(),
                group: it.label.group.clone(),
                truth_start: it.label.start_frame,
                truth_end: it.label.end_frame,
                detected_start: it.detected.first,
                detected_end: it.detected.last,
                start_pct,
                end_pct,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut by_group: BTreeMap<&str, Vec<&ItemDeviation>> = BTreeMap::new();
    for r in &rows {
        by_group.entry(r.group.as_str()).or_default().push(r);
    }
    let groups = by_group
        .iter()
        .map(|(g, members)| summarize(g, members.iter().copied()))
        .collect();
    let overall = summarize("ALL", rows.iter());
    Ok(DeviationReport {
        items: rows,
        groups,
        overall,
    })
}

impl DeviationReport {
    /// Plain-text table: one row per group, then the overall average.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<24} {:>6} {:>14} {:>14}",
            "group", "items", "start dev %", "end dev %"
        );
        for g in &self.groups {
            let _ = writeln!(
                out,
                "{:<24} {:>6} {:>14.3} {:>14.3}",
                g.group, g.count, g.mean_start_pct, g.mean_end_pct
            );
        }
        let o = &self.overall;
        let _ = writeln!(
            out,
            "{:<24} {:>6} {:>14.3} {:>14.3}",
            "average", o.count, o.mean_start_pct, o.mean_end_pct
        );
        out
    }

    /// Fraction of items whose endpoints are both within `tolerance` frames.
    pub fn fraction_within(&self, tolerance: usize) -> f64 {
        let ok = self
            .items
            .iter()
            .filter(|r| {
                r.detected_start.abs_diff(r.truth_start) <= tolerance
                    && r.detected_end.abs_diff(r.truth_end) <= tolerance
            })
            .count();
        ok as f64 / self.items.len().max(1) as f64
    }
}

/// One row of a label CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub path: String,
    pub start_frame: usize,
    pub end_frame: usize,
    pub group: String,
}

impl LabelRecord {
    pub fn label(&self) -> Result<GroundTruthLabel> {
        GroundTruthLabel::new(self.start_frame, self.end_frame, self.group.clone())
    }
}

pub const LABEL_HEADER: [&str; 4] = ["path", "start_frame", "end_frame", "group"];

/// Parses a label CSV with header `path,start_frame,end_frame,group`.
pub fn read_labels(path: impl AsRef<Path>) -> Result<Vec<LabelRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| match source.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io {
            path: path.to_path_buf(),
            source,
        },
    })?;
    parse_labels(&text)
}

pub fn parse_labels(text: &str) -> Result<Vec<LabelRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::LabelFile(e.to_string()))?
        .clone();
    if header.iter().collect::<Vec<_>>() != LABEL_HEADER {
        return Err(Error::LabelFile(format!(
            "header mismatch: expected `{}`, found `{}`",
            LABEL_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let records = reader
        .deserialize::<LabelRecord>()
        .enumerate()
        .map(|(i, r)| {
            let rec = r.map_err(|e| Error::LabelFile(format!("row {}: {e}", i + 2)))?;
            rec.label()
                .map_err(|e| Error::LabelFile(format!("row {}: {e}", i + 2)))?;
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;
    if records.is_empty() {
        return Err(Error::LabelFile("no label rows".into()));
    }
    Ok(records)
}

pub fn write_labels(path: impl AsRef<Path>, records: &[LabelRecord]) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::LabelFile(e.to_string()))?;
    if records.is_empty() {
        writer
            .write_record(LABEL_HEADER)
            .map_err(|e| Error::LabelFile(e.to_string()))?;
    }
    for r in records {
        writer
            .serialize(r)
            .map_err(|e| Error::LabelFile(e.to_string()))?;
    }
    writer.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::FrameSpec;

    fn detected(first: usize, last: usize) -> EndpointResult {
        EndpointResult::from_frames(
            FrameRange { first, last },
            FrameSpec::standard(48000).unwrap(),
            10_000_000,
        )
        .unwrap()
    }

    #[test]
    fn deviation_examples() {
        let truth = GroundTruthLabel::new(50, 249, "g").unwrap();
        assert_eq!(truth.len_frames(), 200);
        let (s, _) = frame_deviation(&truth, &detected(52, 249)).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(
            frame_deviation(&truth, &detected(50, 249)).unwrap(),
            (0.0, 0.0)
        );
        let (_, e) = frame_deviation(&truth, &detected(50, 254)).unwrap();
        assert!((e - 2.5).abs() < 1e-12);
        // Early and late errors count the same.
        let (s1, _) = frame_deviation(&truth, &detected(47, 249)).unwrap();
        let (s2, _) = frame_deviation(&truth, &detected(53, 249)).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn invalid_label() {
        assert!(GroundTruthLabel::new(5, 4, "x").is_err());
    }

    #[test]
    fn report_means() {
        let item = |name: &str, group: &str, first: usize| LabeledDetection {
            name: name.into(),
            label: GroundTruthLabel::new(0, 99, group).unwrap(),
            detected: FrameRange { first, last: 99 },
        };
        let single = aggregate_report(&[item("a", "g", 2)]).unwrap();
        assert_eq!(single.overall.mean_start_pct, 2.0);
        assert_eq!(single.groups[0].mean_start_pct, 2.0);
        assert_eq!(single.overall.mean_end_pct, 0.0);

        let two = aggregate_report(&[item("a", "F", 1), item("b", "M", 3)]).unwrap();
        assert_eq!(two.groups.len(), 2);
        assert!((two.overall.mean_start_pct - 2.0).abs() < 1e-12);
        assert!(two.to_table().contains("average"));

        assert!(matches!(aggregate_report(&[]), Err(Error::EmptyReport)));
    }

    #[test]
    fn label_csv() {
        let text = "path,start_frame,end_frame,group\na.wav,10,20,F\n b.wav , 3 , 9 , M\n";
        let labels = parse_labels(text).unwrap();
        assert_eq!(labels.len(), 2);
        assert_eq!(labels[1].path, "b.wav");
        assert_eq!(labels[1].label().unwrap().end_frame, 9);

        assert!(parse_labels("path,start_frame,end_frame,group\n").is_err());
        assert!(parse_labels("file,start,end,group\na.wav,1,2,F\n").is_err());
        assert!(parse_labels("path,start_frame,end_frame,group\na.wav,9,2,F\n").is_err());
    }

    #[test]
    fn label_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("labels.csv");
        let recs = vec![LabelRecord {
            path: "x.wav".into(),
            start_frame: 1,
            end_frame: 5,
            group: "low_f0".into(),
        }];
        write_labels(&p, &recs).unwrap();
        assert_eq!(read_labels(&p).unwrap(), recs);
    }
}
