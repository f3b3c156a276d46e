//! Video summarization over per-frame feature streams.
//!
//! The engine never touches pixels. It consumes frame features (and
//! precomputed sentence vectors) and provides:
//!
//! * [`model`]: a bias-free LSTM cell, a bidirectional frame-importance
//!   scorer, and two tanh subnetworks that embed video segments and
//!   descriptions into a shared space.
//! * [`train`]: the margin contrastive loss, exact gradients, a
//!   finite-difference checker and a seeded SGD loop.
//! * [`summarize`]: uniform segmentation, PAM k-medoids selection of summary
//!   segments, ROI-based semantic scoring and shortest-path fast-forward.
//! * [`metrics`]: keyshot precision/recall/F1, FOE jitter and speed-up
//!   deviation.
//! * [`formats`], [`synth`] and [`cli`]: binary and JSON file formats, a
//!   planted-event generator and the `vidsum` command line.

pub mod cli;
pub mod error;
pub mod formats;
pub mod matrix;
pub mod metrics;
pub mod model;
pub mod summarize;
pub mod synth;
pub mod train;

pub use error::{Error, Result};
pub use matrix::{FeatureMatrix, Matrix};
