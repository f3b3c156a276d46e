use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{normalize, Interval, IntervalSet};
use crate::summarize::{Roi, Segment};
use crate::train::PairRecord;

/// `{"intervals": [[start, end], ...], "fps": optional}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalsDoc {
    pub intervals: Vec<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fps: Option<f64>,
}

impl IntervalsDoc {
    /// Checks `start < end` record by record, then merges.
    pub fn to_set(&self) -> Result<IntervalSet> {
        for (i, iv) in self.intervals.iter().enumerate() {
            if iv.start >= iv.end {
                return Err(Error::validation(format!(
                    "interval record {i}: start {} must be below end {}",
                    iv.start, iv.end
                )));
            }
        }
        normalize(self.intervals.iter().copied())
    }
}

/// A generated summary: the intervals schema plus selection metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub intervals: Vec<Interval>,
    pub k: usize,
    pub seg_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fps: Option<f64>,
}

/// Per-frame regions of interest for semantic scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoiDoc {
    pub frame_width: f64,
    pub frame_height: f64,
    /// Centrality spread in pixels; a quarter of the frame diagonal when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub frames: Vec<Vec<Roi>>,
}

impl RoiDoc {
    pub fn sigma_or_default(&self) -> f64 {
        self.sigma
            .unwrap_or_else(|| self.frame_width.hypot(self.frame_height) / 4.0)
    }
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::format(path, e.to_string()))
}

/// Pretty-printed JSON with a trailing newline. Keys follow field order.
pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::format(path, e.to_string()))?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// Reads an intervals document (a summary document is accepted too).
pub fn read_intervals(path: impl AsRef<Path>) -> Result<IntervalSet> {
    let path = path.as_ref();
    let doc: IntervalsDoc = read_json(path)?;
    doc.to_set().map_err(|e| Error::format(path, e.to_string()))
}

pub fn read_summary(path: impl AsRef<Path>) -> Result<SummaryDoc> {
    read_json(path)
}

pub fn write_summary(
    path: impl AsRef<Path>,
    segments: &[Segment],
    k: usize,
    seg_len: usize,
) -> Result<()> {
    let doc = SummaryDoc {
        intervals: segments
            .iter()
            .map(|s| Interval::new(s.start, s.end))
            .collect(),
        k,
        seg_len,
        fps: None,
    };
    write_json(path, &doc)
}

pub fn read_pairs(path: impl AsRef<Path>) -> Result<Vec<PairRecord>> {
    let path = path.as_ref();
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::format(path, e.to_string()))?;
    rdr.deserialize()
        .enumerate()
        .map(|(i, rec)| rec.map_err(|e| Error::format(path, format!("pair record {i}: {e}"))))
        .collect()
}

pub fn write_pairs(path: impl AsRef<Path>, pairs: &[PairRecord]) -> Result<()> {
    let path = path.as_ref();
    let to_err = |e: csv::Error| Error::format(path, e.to_string());
    let mut w = csv::Writer::from_path(path).map_err(to_err)?;
    for p in pairs {
        w.serialize(p).map_err(to_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
