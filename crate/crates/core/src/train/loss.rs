use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::sq_dist;

/// Whether a (segment, description) pair is relevant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum PairLabel {
    Negative,
    Positive,
}

impl PairLabel {
    pub fn is_positive(self) -> bool {
        self == PairLabel::Positive
    }
}

impl TryFrom<u8> for PairLabel {
    type Error = Error;

    fn try_from(tn: u8) -> Result<Self> {
        match tn {
            0 => Ok(PairLabel::Negative),
            1 => Ok(PairLabel::Positive),
            other => Err(Error::validation(format!(
                "label must be 0 or 1, got {other}"
            ))),
        }
    }
}

impl From<PairLabel> for u8 {
    fn from(label: PairLabel) -> u8 {
        label.is_positive() as u8
    }
}

/// `d` for positive pairs and `max(0, margin - d)` for negative pairs, where
/// `d` is the squared Euclidean distance between the two embeddings.
pub fn contrastive_loss(x: &[f64], y: &[f64], label: PairLabel, margin: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::shape(format!(
            "embeddings have lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if !(margin >= 0.0) {
        return Err(Error::domain(format!("margin must be >= 0, got {margin}")));
    }
    let d = sq_dist(x, y);
    Ok(match label {
        PairLabel::Positive => d,
        PairLabel::Negative => (margin - d).max(0.0),
    })
}
