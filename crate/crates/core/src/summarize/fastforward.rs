use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A detected region of interest in one frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Roi {
    /// Detector confidence in `[0, 1]`.
    pub confidence: f64,
    /// Region centre in pixels.
    pub center: (f64, f64),
    /// Region area in square pixels.
    pub area: f64,
}

/// Semantic score of a frame: the sum over its regions of
/// `confidence * centrality * size`.
///
/// Centrality is `exp(-r^2 / (2 sigma^2))` with `r` the distance from the
/// frame centre; size is the fraction of the frame covered, clamped to `[0, 1]`.
pub fn semantic_score(rois: &[Roi], frame_w: f64, frame_h: f64, sigma: f64) -> Result<f64> {
    if !(frame_w > 0.0 && frame_h > 0.0) {
        return Err(Error::domain(format!(
            "frame size must be positive, got {frame_w}x{frame_h}"
        )));
    }
    if !(sigma > 0.0) {
        return Err(Error::domain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let (cx, cy) = (frame_w / 2.0, frame_h / 2.0);
    let mut total = 0.0;
    for (k, roi) in rois.iter().enumerate() {
        if !(0.0..=1.0).contains(&roi.confidence) || !(roi.area >= 0.0) {
            return Err(Error::validation(format!(
                "roi {k}: confidence {} must be in [0, 1] and area {} non-negative",
                roi.confidence, roi.area
            )));
        }
        let r2 = (roi.center.0 - cx).powi(2) + (roi.center.1 - cy).powi(2);
        let centrality = (-r2 / (2.0 * sigma * sigma)).exp();
        let size = (roi.area / (frame_w * frame_h)).clamp(0.0, 1.0);
        total += roi.confidence * centrality * size;
    }
    Ok(total)
}

/// Result of splitting a score sequence at its semantic threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSplit {
    pub threshold: f64,
    /// Maximal runs of frames scoring at or above the threshold.
    pub semantic: Vec<Range<usize>>,
    /// The complementary runs.
    pub non_semantic: Vec<Range<usize>>,
}

impl ThresholdSplit {
    pub fn semantic_len(&self) -> usize {
        self.semantic.iter().map(|r| r.len()).sum()
    }

    pub fn non_semantic_len(&self) -> usize {
        self.non_semantic.iter().map(|r| r.len()).sum()
    }

    /// All runs in temporal order, flagged `true` when semantic.
    pub fn runs(&self) -> Vec<(Range<usize>, bool)> {
        let mut runs: Vec<_> = self
            .semantic
            .iter()
            .map(|r| (r.clone(), true))
            .chain(self.non_semantic.iter().map(|r| (r.clone(), false)))
            .collect();
        runs.sort_by_key(|(r, _)| r.start);
        runs
    }
}

/// Threshold = midpoint of the smallest and largest inlier score, where
/// inliers lie within two population standard deviations of the mean. Every
/// frame, outliers included, is then classified against the threshold.
pub fn semantic_threshold_split(scores: &[f64]) -> Result<ThresholdSplit> {
    if scores.is_empty() {
        return Err(Error::domain("no frame scores"));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::domain("frame scores must be finite"));
    }
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let std = (scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n).sqrt();
    let (lo, hi) = scores
        .iter()
        .filter(|&&s| (s - mean).abs() <= 2.0 * std)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
            (lo.min(s), hi.max(s))
        });
    let threshold = (lo + hi) / 2.0;

    let mut semantic = Vec::new();
    let mut non_semantic = Vec::new();
    let mut start = 0;
    for t in 1..=scores.len() {
        let here = scores[start] >= threshold;
        if t == scores.len() || (scores[t] >= threshold) != here {
            if here {
                semantic.push(start..t);
            } else {
                non_semantic.push(start..t);
            }
            start = t;
        }
    }
    Ok(ThresholdSplit {
        threshold,
        semantic,
        non_semantic,
    })
}

/// Speed-up for the non-semantic part such that the whole video is sped up by
/// `target` when the semantic part is sped up by `rho_s`.
pub fn segment_speedups(len_s: usize, len_ns: usize, target: f64, rho_s: f64) -> Result<f64> {
    if !(target >= 1.0) || !target.is_finite() {
        return Err(Error::domain(format!(
            "target speed-up must be >= 1, got {target}"
        )));
    }
    if !(rho_s >= 1.0 && rho_s <= target) {
        return Err(Error::domain(format!(
            "semantic speed-up must lie in [1, target = {target}], got {rho_s}"
        )));
    }
    let (ls, lns) = (len_s as f64, len_ns as f64);
    if len_ns == 0 {
        // Nothing to compensate with: only the uniform rate reaches the target.
        return if len_s == 0 || rho_s == target {
            Ok(target)
        } else {
            Err(Error::domain(format!(
                "no non-semantic frames, so the semantic speed-up must equal the target {target}"
            )))
        };
    }
    let budget = (ls + lns) / target - ls / rho_s;
    if !(budget > 0.0) {
        return Err(Error::domain(format!(
            "infeasible: semantic part alone needs {} output frames, more than the {} allowed by the target",
            ls / rho_s,
            (ls + lns) / target
        )));
    }
    Ok(lns / budget)
}

/// Weights of the frame-sampling graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FastForwardParams {
    /// Desired speed-up.
    pub rho: f64,
    /// Longest allowed jump between consecutive output frames.
    pub max_skip: usize,
    pub lambda_speed: f64,
    pub lambda_sem: f64,
}

impl FastForwardParams {
    fn validate(&self) -> Result<()> {
        if self.max_skip == 0 {
            return Err(Error::domain("max_skip must be at least 1"));
        }
        if !(self.rho >= 1.0) || !self.rho.is_finite() {
            return Err(Error::domain(format!(
                "speed-up must be >= 1, got {}",
                self.rho
            )));
        }
        if !(self.lambda_speed.is_finite() && self.lambda_sem.is_finite()) {
            return Err(Error::domain("weights must be finite"));
        }
        Ok(())
    }

    fn edge(&self, from: usize, to: usize, score_to: f64, s_max: f64) -> f64 {
        let gap = (to - from) as f64 - self.rho;
        self.lambda_speed * gap * gap + self.lambda_sem * (s_max - score_to)
    }
}

fn max_score(scores: &[f64]) -> f64 {
    scores.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Total edge cost of an output frame sequence.
pub fn path_cost(scores: &[f64], path: &[usize], params: &FastForwardParams) -> f64 {
    let s_max = max_score(scores);
    path.windows(2)
        .map(|w| params.edge(w[0], w[1], scores[w[1]], s_max))
        .sum()
}

/// Cheapest path from the first to the last frame through jumps of at most
/// `max_skip` frames. Edge `i -> j` costs
/// `lambda_speed * ((j - i) - rho)^2 + lambda_sem * (max score - score_j)`.
/// Equal-cost choices prefer the shorter jump.
pub fn speedup_frame_selection(scores: &[f64], params: &FastForwardParams) -> Result<Vec<usize>> {
    params.validate()?;
    let t_len = scores.len();
    if t_len < 2 {
        return Err(Error::domain(format!(
            "need at least 2 frames, got {t_len}"
        )));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::domain("frame scores must be finite"));
    }
    let s_max = max_score(scores);

    // cost_to_go[i]: cheapest cost from frame i to the last frame.
    let mut cost_to_go = vec![f64::INFINITY; t_len];
    let mut next = vec![usize::MAX; t_len];
    cost_to_go[t_len - 1] = 0.0;
    for i in (0..t_len - 1).rev() {
        let last = (i + params.max_skip).min(t_len - 1);
        for j in (i + 1)..=last {
            let c = params.edge(i, j, scores[j], s_max) + cost_to_go[j];
            if c < cost_to_go[i] {
                cost_to_go[i] = c;
                next[i] = j;
            }
        }
    }

    let mut path = vec![0];
    let mut at = 0;
    while at != t_len - 1 {
        at = next[at];
        path.push(at);
    }
    Ok(path)
}

/// Output of the semantic fast-forward pipeline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemanticFastForward {
    pub split: ThresholdSplit,
    pub rho_semantic: f64,
    pub rho_non_semantic: f64,
    /// Selected frames over the whole video, increasing.
    pub frames: Vec<usize>,
}

/// Splits the video at its semantic threshold, balances the two speed-ups so
/// that the overall rate meets `target`, and samples every run with its own
/// shortest path. `params.rho` is replaced per run.
pub fn semantic_fast_forward(
    scores: &[f64],
    target: f64,
    rho_semantic: f64,
    params: &FastForwardParams,
) -> Result<SemanticFastForward> {
    let split = semantic_threshold_split(scores)?;
    let rho_non_semantic = segment_speedups(
        split.semantic_len(),
        split.non_semantic_len(),
        target,
        rho_semantic,
    )?;
    let mut frames = Vec::new();
    for (run, is_semantic) in split.runs() {
        if run.len() == 1 {
            frames.push(run.start);
            continue;
        }
        let run_params = FastForwardParams {
            rho: if is_semantic {
                rho_semantic
            } else {
                rho_non_semantic
            },
            ..*params
        };
        let picked = speedup_frame_selection(&scores[run.clone()], &run_params)?;
        frames.extend(picked.into_iter().map(|f| f + run.start));
    }
    Ok(SemanticFastForward {
        split,
        rho_semantic,
        rho_non_semantic,
        frames,
    })
}
