use std::path::Path;

use serde::{Deserialize, Serialize};

use super::docs::{read_json, write_json};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{DescSubnet, TanhMlp, VideoSubnet};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointDims {
    pub input_dim: usize,
    pub hidden: usize,
    pub embed_dim: usize,
    pub desc_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct LayerArrays {
    w1: Vec<Vec<f64>>,
    b1: Vec<f64>,
    w2: Vec<Vec<f64>>,
    b2: Vec<f64>,
}

/// Both subnetworks as nested decimal arrays. Floats are written in their
/// shortest round-trip form, so loading restores every parameter bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    format_version: u32,
    pub dims: CheckpointDims,
    video: LayerArrays,
    desc: LayerArrays,
}

fn to_arrays(net: &TanhMlp) -> LayerArrays {
    let rows = |m: &Matrix| m.iter_rows().map(<[f64]>::to_vec).collect();
    LayerArrays {
        w1: rows(&net.w1),
        b1: net.b1.clone(),
        w2: rows(&net.w2),
        b2: net.b2.clone(),
    }
}

fn from_arrays(
    which: &str,
    a: &LayerArrays,
    input: usize,
    hidden: usize,
    embed: usize,
) -> Result<TanhMlp> {
    let matrix = |name: &str, rows: &[Vec<f64>], r: usize, c: usize| -> Result<Matrix> {
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            let found_cols = rows.first().map_or(0, Vec::len);
            return Err(Error::validation(format!(
                "dimension mismatch: {which}.{name} is {}x{found_cols}, dims require {r}x{c}",
                rows.len()
            )));
        }
        Matrix::from_rows(c, rows)
    };
    let vector = |name: &str, v: &[f64], n: usize| -> Result<Vec<f64>> {
        if v.len() != n {
            return Err(Error::validation(format!(
                "dimension mismatch: {which}.{name} has {} entries, dims require {n}",
                v.len()
            )));
        }
        Ok(v.to_vec())
    };
    TanhMlp::new(
        matrix("w1", &a.w1, hidden, input)?,
        vector("b1", &a.b1, hidden)?,
        matrix("w2", &a.w2, embed, hidden)?,
        vector("b2", &a.b2, embed)?,
    )
}

impl Checkpoint {
    pub fn new(video: &VideoSubnet, desc: &DescSubnet) -> Result<Self> {
        if video.dims().hidden_dim != desc.dims().hidden_dim
            || video.embed_dim() != desc.embed_dim()
        {
            return Err(Error::shape(format!(
                "checkpoint needs equal hidden and embed sizes, got video {:?} and description {:?}",
                video.dims(),
                desc.dims()
            )));
        }
        Ok(Checkpoint {
            format_version: CHECKPOINT_VERSION,
            dims: CheckpointDims {
                input_dim: video.input_dim(),
                hidden: video.dims().hidden_dim,
                embed_dim: video.embed_dim(),
                desc_dim: desc.input_dim(),
            },
            video: to_arrays(video),
            desc: to_arrays(desc),
        })
    }

    pub fn format_version(&self) -> u32 {
        self.format_version
    }

    pub fn into_nets(self) -> Result<(VideoSubnet, DescSubnet)> {
        if self.format_version != CHECKPOINT_VERSION {
            return Err(Error::validation(format!(
                "checkpoint format_version {} is not supported (expected {CHECKPOINT_VERSION})",
                self.format_version
            )));
        }
        let d = self.dims;
        let video = from_arrays("video", &self.video, d.input_dim, d.hidden, d.embed_dim)?;
        let desc = from_arrays("desc", &self.desc, d.desc_dim, d.hidden, d.embed_dim)?;
        Ok((VideoSubnet(video), DescSubnet(desc)))
    }
}

pub fn save_checkpoint(
    path: impl AsRef<Path>,
    video: &VideoSubnet,
    desc: &DescSubnet,
) -> Result<()> {
    write_json(path, &Checkpoint::new(video, desc)?)
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<(VideoSubnet, DescSubnet)> {
    let path = path.as_ref();
    let ckpt: Checkpoint = read_json(path)?;
    ckpt.into_nets()
        .map_err(|e| Error::format(path, e.to_string()))
}
