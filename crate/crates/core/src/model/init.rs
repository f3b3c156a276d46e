use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const DEFAULT_EMBED_DIM: usize = 300;
pub const DEFAULT_HIDDEN_DIM: usize = 256;
/// Width of the precomputed skip-thought sentence vectors.
pub const DEFAULT_DESC_DIM: usize = 4800;

/// Layer widths of a two-layer embedding subnetwork.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubnetDims {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub embed_dim: usize,
}

impl SubnetDims {
    pub fn new(input_dim: usize, hidden_dim: usize, embed_dim: usize) -> Self {
        SubnetDims {
            input_dim,
            hidden_dim,
            embed_dim,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        check_positive(&[
            ("input_dim", self.input_dim),
            ("hidden_dim", self.hidden_dim),
            ("embed_dim", self.embed_dim),
        ])
    }
}

pub(crate) fn check_positive(dims: &[(&str, usize)]) -> Result<()> {
    match dims.iter().find(|(_, d)| *d == 0) {
        Some((name, _)) => Err(Error::domain(format!("{name} must be positive"))),
        None => Ok(()),
    }
}

// Each parameter family draws from its own ChaCha stream so that, say, a video
// and a description subnet built from the same seed are not correlated.
pub(crate) enum Stream {
    Video = 1,
    Desc = 2,
    Lstm = 3,
    Scorer = 4,
}

pub(crate) fn rng_for(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Uniform in `[-1/sqrt(fan_in), 1/sqrt(fan_in)]`.
pub(crate) fn fan_in_uniform(fan_in: usize) -> Uniform<f64> {
    let s = 1.0 / (fan_in as f64).sqrt();
    Uniform::new_inclusive(-s, s).expect("finite bound")
}

pub(crate) fn draw_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, fan_in: usize) -> Matrix {
    let dist = fan_in_uniform(fan_in);
    Matrix::from_fn(rows, cols, |_, _| dist.sample(rng))
}

pub(crate) fn draw_vec(rng: &mut ChaCha8Rng, len: usize, fan_in: usize) -> Vec<f64> {
    let dist = fan_in_uniform(fan_in);
    (0..len).map(|_| dist.sample(rng)).collect()
}
