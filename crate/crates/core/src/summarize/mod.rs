//! Segment-level summarisation and semantic fast-forward.
//!
//! Segments are embedded with the video subnetwork, clustered with PAM
//! k-medoids under squared Euclidean distance, and the medoid segments are
//! returned in temporal order. The fast-forward half scores frames from
//! regions of interest, splits the video into semantic and non-semantic runs,
//! balances per-part speed-ups and samples frames by shortest path.

mod fastforward;
mod kmedoids;
mod segments;

pub use fastforward::{
    path_cost, segment_speedups, semantic_fast_forward, semantic_score, semantic_threshold_split,
    speedup_frame_selection, FastForwardParams, Roi, SemanticFastForward, ThresholdSplit,
};
pub use kmedoids::{kmedoids, objective, Clustering, DEFAULT_MAX_SWAPS};
pub use segments::{generate_summary, segment_features, uniform_segments, Segment, SegmentFeature};
