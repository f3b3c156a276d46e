//! Planted-event feature streams for exercising the pipeline without real
//! video.
//!
//! Events are runs of frames scattered around a per-event centre; the frames
//! between events are low-amplitude noise around the origin. Each event is
//! described by a one-hot description vector, and every uniform segment lying
//! wholly inside an event is paired positively with its event's description
//! and negatively with all others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{sq_dist, Matrix};
use crate::metrics::{normalize, Interval, IntervalSet};
use crate::summarize::{uniform_segments, Segment};
use crate::train::{PairLabel, PairRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    pub n_events: usize,
    pub frames_per_event: usize,
    /// Frames between consecutive events.
    pub gap_frames: usize,
    pub dim: usize,
    pub noise_sigma: f64,
    /// Segment length the pair labels refer to.
    pub seg_len: usize,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            seed: 0,
            n_events: 5,
            frames_per_event: 40,
            gap_frames: 5,
            dim: 16,
            noise_sigma: 0.05,
            seg_len: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthData {
    pub features: Matrix,
    /// One-hot description vectors, one row per event.
    pub descs: Matrix,
    /// Event windows.
    pub truth: IntervalSet,
    pub labels: Vec<PairRecord>,
    pub seg_len: usize,
    /// Event centres, one row per event.
    pub centers: Matrix,
}

impl SynthData {
    pub fn segments(&self) -> Vec<Segment> {
        uniform_segments(self.features.rows(), self.seg_len).expect("seg_len validated")
    }

    /// Event index of the window that fully contains `segment`, if any.
    pub fn event_of(&self, segment: &Segment) -> Option<usize> {
        self.truth
            .intervals()
            .iter()
            .position(|w| w.start <= segment.start && segment.end <= w.end)
    }
}

const MAX_CENTER_DRAWS: usize = 10_000;

impl SynthSpec {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n_events", self.n_events),
            ("frames_per_event", self.frames_per_event),
            ("gap_frames", self.gap_frames),
            ("dim", self.dim),
            ("seg_len", self.seg_len),
        ] {
            if v == 0 {
                return Err(Error::domain(format!("{name} must be at least 1")));
            }
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return Err(Error::domain(format!(
                "noise_sigma must be finite and >= 0, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }

    pub fn n_frames(&self) -> usize {
        self.n_events * self.frames_per_event + (self.n_events - 1) * self.gap_frames
    }

    fn window(&self, event: usize) -> Interval {
        let start = event * (self.frames_per_event + self.gap_frames);
        Interval::new(start, start + self.frames_per_event)
    }
}

/// Deterministic for a given spec.
pub fn synth_generate(spec: &SynthSpec) -> Result<SynthData> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    // Centres sit at least `min_sep` from each other and from the gap frames at the origin.
    let min_sep = 10.0 * spec.noise_sigma;
    let scale = min_sep.max(1.0);
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(spec.n_events);
    let mut draws = 0;
    while centers.len() < spec.n_events {
        draws += 1;
        if draws > MAX_CENTER_DRAWS {
            return Err(Error::domain(format!(
                "could not place {} centres {min_sep} apart in {} dimensions",
                spec.n_events, spec.dim
            )));
        }
        let c: Vec<f64> = (0..spec.dim)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                scale * z
            })
            .collect();
        let origin = vec![0.0; spec.dim];
        let far = |o: &[f64]| sq_dist(&c, o).sqrt() >= min_sep;
        if far(&origin) && centers.iter().all(|o| far(o)) {
            centers.push(c);
        }
    }

    let event_noise = Normal::new(0.0, spec.noise_sigma).expect("sigma validated");
    let gap_noise = Normal::new(0.0, 0.1 * spec.noise_sigma).expect("sigma validated");
    let n_frames = spec.n_frames();
    let mut data = Vec::with_capacity(n_frames * spec.dim);
    let mut windows = Vec::with_capacity(spec.n_events);
    for (e, center) in centers.iter().enumerate() {
        if e > 0 {
            for _ in 0..spec.gap_frames * spec.dim {
                data.push(gap_noise.sample(&mut rng));
            }
        }
        windows.push(spec.window(e));
        for _ in 0..spec.frames_per_event {
            data.extend(center.iter().map(|c| c + event_noise.sample(&mut rng)));
        }
    }
    let features = Matrix::new(n_frames, spec.dim, data)?;
    let descs = Matrix::from_fn(spec.n_events, spec.n_events, |r, c| (r == c) as u8 as f64);
    let truth = normalize(windows.iter().copied())?;
    let centers = Matrix::from_rows(spec.dim, &centers)?;

    let mut out = SynthData {
        features,
        descs,
        truth,
        labels: Vec::new(),
        seg_len: spec.seg_len,
        centers,
    };
    let mut labels = Vec::new();
    for seg in out.segments() {
        if let Some(event) = out.event_of(&seg) {
            for desc in 0..spec.n_events {
                labels.push(PairRecord {
                    segment_index: seg.index,
                    desc_index: desc,
                    tn: if desc == event {
                        PairLabel::Positive
                    } else {
                        PairLabel::Negative
                    },
                });
            }
        }
    }
    out.labels = labels;
    Ok(out)
}
