//! Forward passes: the bias-free LSTM cell, the bidirectional frame
//! importance scorer and the two tanh embedding subnetworks.
//!
//! Everything here is read-only once constructed, so parameters can be shared
//! across threads and evaluated concurrently.

mod init;
mod lstm;
mod subnet;

pub use init::{SubnetDims, DEFAULT_DESC_DIM, DEFAULT_EMBED_DIM, DEFAULT_HIDDEN_DIM};
pub use lstm::{
    lstm_scan, lstm_step, score_importance, ImportanceScorer, LstmGates, LstmParams, LstmState,
};
pub use subnet::{embed_description, embed_frames, ffn_forward, DescSubnet, TanhMlp, VideoSubnet};

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}
