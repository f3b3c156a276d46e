use serde::{Deserialize, Serialize};

use super::loss::PairLabel;
use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;
use crate::summarize::Segment;

/// One training pair: the frames of a segment and a description vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PairExample {
    pub segment: FeatureMatrix,
    pub desc: Vec<f64>,
    pub label: PairLabel,
}

/// A labelled (segment, description) index pair, one line of a pair-label file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub segment_index: usize,
    pub desc_index: usize,
    pub tn: PairLabel,
}

/// Materialises labelled pairs in record order. `segments` index into
/// `frames`; `desc_index` selects a row of `descs`.
pub fn sample_pairs(
    frames: &FeatureMatrix,
    segments: &[Segment],
    descs: &FeatureMatrix,
    labels: &[PairRecord],
) -> Result<Vec<PairExample>> {
    labels
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let seg = segments.get(rec.segment_index).ok_or_else(|| {
                Error::validation(format!(
                    "pair record {i}: segment_index {} out of range (have {} segments)",
                    rec.segment_index,
                    segments.len()
                ))
            })?;
            if rec.desc_index >= descs.rows() {
                return Err(Error::validation(format!(
                    "pair record {i}: desc_index {} out of range (have {} descriptions)",
                    rec.desc_index,
                    descs.rows()
                )));
            }
            let segment = frames
                .slice_rows(seg.start, seg.end)
                .map_err(|e| Error::validation(format!("pair record {i}: {e}")))?;
            if segment.is_empty() {
                return Err(Error::validation(format!("pair record {i}: empty segment")));
            }
            Ok(PairExample {
                segment,
                desc: descs.row(rec.desc_index).to_vec(),
                label: rec.tn,
            })
        })
        .collect()
}
