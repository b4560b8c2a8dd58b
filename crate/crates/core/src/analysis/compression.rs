use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use walkdir::WalkDir;

use super::{AnalysisError, Result};

/// `before / after`; above 1 means the Taylor artifact is smaller.
pub fn compression_ratio(before_bytes: u64, after_bytes: u64) -> Result<f64> {
    if after_bytes == 0 {
        return Err(AnalysisError::InvalidInput(
            "compressed size must be positive".to_string(),
        ));
    }
    Ok(before_bytes as f64 / after_bytes as f64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressionItem {
    pub label: String,
    pub before_bytes: u64,
    pub after_bytes: u64,
}

impl CompressionItem {
    pub fn new(label: impl Into<String>, before_bytes: u64, after_bytes: u64) -> Self {
        Self {
            label: label.into(),
            before_bytes,
            after_bytes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemRatio {
    pub label: String,
    pub action: String,
    pub before_bytes: u64,
    pub after_bytes: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionStats {
    pub action: String,
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Total-bytes quotient over the action's items.
    pub aggregate_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionReport {
    pub items: Vec<ItemRatio>,
    pub actions: Vec<ActionStats>,
    pub total_before_bytes: u64,
    pub total_after_bytes: u64,
    /// `sum(before) / sum(after)`, not a mean of per-item ratios.
    pub aggregate_ratio: f64,
}

impl CompressionReport {
    pub fn ratio(&self, label: &str) -> Option<f64> {
        self.items
            .iter()
            .find(|i| i.label == label)
            .map(|i| i.ratio)
    }

    pub fn action(&self, action: &str) -> Option<&ActionStats> {
        self.actions.iter().find(|a| a.action == action)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Action of an item: the directory that contains it (`hug/clip01` is in
/// `hug`). A label without a separator is its own action.
pub fn action_of(label: &str) -> &str {
    let trimmed = label.trim_end_matches('/');
    match trimmed.rsplit_once('/') {
        Some((parent, _)) => parent.rsplit('/').next().unwrap_or(parent),
        None => trimmed,
    }
}

pub fn aggregate_report(items: &[CompressionItem]) -> Result<CompressionReport> {
    if items.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let rows = items
        .iter()
        .map(|item| {
            Ok(ItemRatio {
                label: item.label.clone(),
                action: action_of(&item.label).to_string(),
                before_bytes: item.before_bytes,
                after_bytes: item.after_bytes,
                ratio: compression_ratio(item.before_bytes, item.after_bytes)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut groups: BTreeMap<&str, Vec<&ItemRatio>> = BTreeMap::new();
    for row in &rows {
        groups.entry(row.action.as_str()).or_default().push(row);
    }
    let actions = groups
        .into_iter()
        .map(|(action, members)| {
            let ratios: Vec<f64> = members.iter().map(|m| m.ratio).collect();
            let before: u64 = members.iter().map(|m| m.before_bytes).sum();
            let after: u64 = members.iter().map(|m| m.after_bytes).sum();
            Ok(ActionStats {
                action: action.to_string(),
                count: members.len(),
                min: ratios.iter().cloned().fold(f64::INFINITY, f64::min),
                max: ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                mean: ratios.iter().sum::<f64>() / ratios.len() as f64,
                aggregate_ratio: compression_ratio(before, after)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let total_before: u64 = rows.iter().map(|r| r.before_bytes).sum();
    let total_after: u64 = rows.iter().map(|r| r.after_bytes).sum();
    Ok(CompressionReport {
        aggregate_ratio: compression_ratio(total_before, total_after)?,
        items: rows,
        actions,
        total_before_bytes: total_before,
        total_after_bytes: total_after,
    })
}

/// Size of a file, or the summed size of all files under a directory.
pub fn path_size(path: impl AsRef<Path>) -> std::io::Result<u64> {
    let path = path.as_ref();
    let meta = fs::metadata(path)?;
    if meta.is_file() {
        return Ok(meta.len());
    }
    let mut total = 0;
    for entry in WalkDir::new(path) {
        let entry = entry.map_err(std::io::Error::other)?;
        if entry.file_type().is_file() {
            total += entry.metadata().map_err(std::io::Error::other)?.len();
        }
    }
    Ok(total)
}

/// Reads a `label,before_path,after_path` manifest and measures both sides.
///
/// Relative paths resolve against the manifest's directory. A first row
/// whose label is literally `label` is treated as a header.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<CompressionItem>> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(0, e))?;
    let mut items = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 1;
        let record = record.map_err(|e| csv_error(line, e))?;
        if record.len() != 3 {
            return Err(AnalysisError::Manifest {
                line,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        if idx == 0 && &record[0] == "label" {
            continue;
        }
        let size = |field: &str| {
            let p = base.join(field);
            path_size(&p).map_err(|e| AnalysisError::Manifest {
                line,
                message: format!("{}: {e}", p.display()),
            })
        };
        items.push(CompressionItem::new(
            &record[0],
            size(&record[1])?,
            size(&record[2])?,
        ));
    }
    Ok(items)
}

fn csv_error(line: usize, e: csv::Error) -> AnalysisError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => AnalysisError::Io(io),
        other => AnalysisError::Manifest {
            line,
            message: format!("{other:?}"),
        },
    }
}
