//! Evaluation measures: keyshot precision/recall/F1 over frame intervals,
//! jitter of a focus-of-expansion track, and speed-up deviation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Frames `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        Interval { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

impl From<[usize; 2]> for Interval {
    fn from([start, end]: [usize; 2]) -> Self {
        Interval { start, end }
    }
}

impl From<Interval> for [usize; 2] {
    fn from(i: Interval) -> Self {
        [i.start, i.end]
    }
}

/// Sorted, disjoint, non-adjacent frame intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IntervalSet(Vec<Interval>);

impl IntervalSet {
    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    /// Total number of frames covered.
    pub fn duration(&self) -> usize {
        self.0.iter().map(Interval::len).sum()
    }

    pub fn contains(&self, frame: usize) -> bool {
        let i = self.0.partition_point(|iv| iv.end <= frame);
        self.0.get(i).is_some_and(|iv| iv.start <= frame)
    }

    /// Number of frames covered by both sets.
    pub fn overlap(&self, other: &IntervalSet) -> usize {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut total) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            let lo = a[i].start.max(b[j].start);
            let hi = a[i].end.min(b[j].end);
            total += hi.saturating_sub(lo);
            if a[i].end < b[j].end {
                i += 1;
            } else {
                j += 1;
            }
        }
        total
    }
}

/// Sorts and merges overlapping or touching intervals.
pub fn normalize(intervals: impl IntoIterator<Item = Interval>) -> Result<IntervalSet> {
    let mut v: Vec<Interval> = Vec::new();
    for (k, iv) in intervals.into_iter().enumerate() {
        if iv.start >= iv.end {
            return Err(Error::validation(format!(
                "interval {k}: start {} must be below end {}",
                iv.start, iv.end
            )));
        }
        v.push(iv);
    }
    v.sort_unstable();
    let mut merged: Vec<Interval> = Vec::with_capacity(v.len());
    for iv in v {
        match merged.last_mut() {
            Some(last) if iv.start <= last.end => last.end = last.end.max(iv.end),
            _ => merged.push(iv),
        }
    }
    Ok(IntervalSet(merged))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyshotScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision is overlap over the duration of the generated summary `a`;
/// recall is overlap over the duration of the reference `b`.
pub fn keyshot_pr(a: &IntervalSet, b: &IntervalSet) -> Result<KeyshotScore> {
    let (da, db) = (a.duration(), b.duration());
    if da == 0 || db == 0 {
        return Err(Error::domain(format!(
            "summary durations must be positive, got {da} and {db}"
        )));
    }
    let overlap = a.overlap(b) as f64;
    let precision = overlap / da as f64;
    let recall = overlap / db as f64;
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(KeyshotScore {
        precision,
        recall,
        f1,
    })
}

/// Focus-of-expansion positions, one per output frame.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FoeTrack(pub Vec<(f64, f64)>);

/// Mean displacement of the FOE between consecutive output frames.
pub fn jitter_amount(track: &FoeTrack) -> Result<f64> {
    let pts = &track.0;
    if pts.len() < 2 {
        return Err(Error::domain(format!(
            "need at least 2 FOE points, got {}",
            pts.len()
        )));
    }
    if pts.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::domain("FOE coordinates must be finite"));
    }
    let total: f64 = pts
        .windows(2)
        .map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1))
        .sum();
    Ok(total / (pts.len() - 1) as f64)
}

/// `|desired - n_input / n_output|`.
pub fn speedup_deviation(desired: f64, n_input: usize, n_output: usize) -> Result<f64> {
    if n_output == 0 {
        return Err(Error::domain("output has no frames"));
    }
    if !(desired >= 1.0) {
        return Err(Error::domain(format!(
            "desired speed-up must be >= 1, got {desired}"
        )));
    }
    Ok((desired - n_input as f64 / n_output as f64).abs())
}
