use std::ops::{Deref, DerefMut};

use super::init::{draw_matrix, draw_vec, rng_for, Stream, SubnetDims};
use crate::error::{Error, Result};
use crate::matrix::{FeatureMatrix, Matrix};

/// `tanh(W2 tanh(W1 x + b1) + b2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TanhMlp {
    pub w1: Matrix,
    pub b1: Vec<f64>,
    pub w2: Matrix,
    pub b2: Vec<f64>,
}

/// Intermediate activations of one forward pass.
#[derive(Debug, Clone)]
pub(crate) struct MlpTrace {
    pub hidden: Vec<f64>,
    pub output: Vec<f64>,
}

impl TanhMlp {
    pub fn new(w1: Matrix, b1: Vec<f64>, w2: Matrix, b2: Vec<f64>) -> Result<Self> {
        if b1.len() != w1.rows() || w2.cols() != w1.rows() || b2.len() != w2.rows() {
            return Err(Error::shape(format!(
                "inconsistent layers: W1 {}x{}, b1 {}, W2 {}x{}, b2 {}",
                w1.rows(),
                w1.cols(),
                b1.len(),
                w2.rows(),
                w2.cols(),
                b2.len()
            )));
        }
        if b1.iter().chain(&b2).any(|v| !v.is_finite()) {
            return Err(Error::domain("biases must be finite"));
        }
        Ok(TanhMlp { w1, b1, w2, b2 })
    }

    pub fn zeros(dims: SubnetDims) -> Result<Self> {
        dims.validate()?;
        Ok(TanhMlp {
            w1: Matrix::zeros(dims.hidden_dim, dims.input_dim),
            b1: vec![0.0; dims.hidden_dim],
            w2: Matrix::zeros(dims.embed_dim, dims.hidden_dim),
            b2: vec![0.0; dims.embed_dim],
        })
    }

    fn draw(seed: u64, stream: Stream, dims: SubnetDims) -> Result<Self> {
        dims.validate()?;
        let mut rng = rng_for(seed, stream);
        let SubnetDims {
            input_dim,
            hidden_dim,
            embed_dim,
        } = dims;
        let w1 = draw_matrix(&mut rng, hidden_dim, input_dim, input_dim);
        let b1 = draw_vec(&mut rng, hidden_dim, input_dim);
        let w2 = draw_matrix(&mut rng, embed_dim, hidden_dim, hidden_dim);
        let b2 = draw_vec(&mut rng, embed_dim, hidden_dim);
        TanhMlp::new(w1, b1, w2, b2)
    }

    pub fn dims(&self) -> SubnetDims {
        SubnetDims::new(self.w1.cols(), self.w1.rows(), self.w2.rows())
    }

    pub fn input_dim(&self) -> usize {
        self.w1.cols()
    }

    pub fn embed_dim(&self) -> usize {
        self.w2.rows()
    }

    pub fn param_count(&self) -> usize {
        self.w1.as_slice().len() + self.b1.len() + self.w2.as_slice().len() + self.b2.len()
    }

    /// Parameter blocks in the fixed order `W1, b1, W2, b2`.
    pub fn param_blocks(&self) -> [&[f64]; 4] {
        [self.w1.as_slice(), &self.b1, self.w2.as_slice(), &self.b2]
    }

    pub fn param_blocks_mut(&mut self) -> [&mut [f64]; 4] {
        [
            self.w1.as_mut_slice(),
            &mut self.b1,
            self.w2.as_mut_slice(),
            &mut self.b2,
        ]
    }

    pub(crate) fn trace(&self, x: &[f64]) -> MlpTrace {
        let mut hidden = self.w1.mat_vec(x);
        for (h, b) in hidden.iter_mut().zip(&self.b1) {
            *h = (*h + b).tanh();
        }
        let mut output = self.w2.mat_vec(&hidden);
        for (o, b) in output.iter_mut().zip(&self.b2) {
            *o = (*o + b).tanh();
        }
        MlpTrace { hidden, output }
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::shape(format!(
                "input has {} values, network expects {}",
                x.len(),
                self.input_dim()
            )));
        }
        Ok(self.trace(x).output)
    }
}

/// Frame-level projection into the joint semantic space.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoSubnet(pub TanhMlp);

/// Projection of precomputed sentence vectors into the joint semantic space.
#[derive(Debug, Clone, PartialEq)]
pub struct DescSubnet(pub TanhMlp);

macro_rules! subnet_impl {
    ($name:ident, $stream:expr) => {
        impl $name {
            /// Seeded uniform initialisation, bound `1/sqrt(fan_in)` per layer.
            pub fn init(seed: u64, dims: SubnetDims) -> Result<Self> {
                TanhMlp::draw(seed, $stream, dims).map($name)
            }

            pub fn zeros(dims: SubnetDims) -> Result<Self> {
                TanhMlp::zeros(dims).map($name)
            }
        }

        impl Deref for $name {
            type Target = TanhMlp;
            fn deref(&self) -> &TanhMlp {
                &self.0
            }
        }

        impl DerefMut for $name {
            fn deref_mut(&mut self) -> &mut TanhMlp {
                &mut self.0
            }
        }
    };
}

subnet_impl!(VideoSubnet, Stream::Video);
subnet_impl!(DescSubnet, Stream::Desc);

pub fn ffn_forward(net: &VideoSubnet, x: &[f64]) -> Result<Vec<f64>> {
    net.forward(x)
}

/// Mean-pools the per-frame embeddings of a segment.
pub fn embed_frames(net: &VideoSubnet, segment: &FeatureMatrix) -> Result<Vec<f64>> {
    if segment.is_empty() {
        return Err(Error::domain("cannot embed an empty segment"));
    }
    if segment.cols() != net.input_dim() {
        return Err(Error::shape(format!(
            "segment has {} columns, network expects {}",
            segment.cols(),
            net.input_dim()
        )));
    }
    let mut acc = vec![0.0; net.embed_dim()];
    for frame in segment.iter_rows() {
        for (a, v) in acc.iter_mut().zip(net.trace(frame).output) {
            *a += v;
        }
    }
    let n = segment.rows() as f64;
    acc.iter_mut().for_each(|a| *a /= n);
    Ok(acc)
}

pub fn embed_description(net: &DescSubnet, v: &[f64]) -> Result<Vec<f64>> {
    net.forward(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_net() -> VideoSubnet {
        let one = || Matrix::new(1, 1, vec![1.0]).unwrap();
        VideoSubnet(TanhMlp::new(one(), vec![0.0], one(), vec![0.0]).unwrap())
    }

    #[test]
    fn zero_net_outputs_zero() {
        let net = VideoSubnet::zeros(SubnetDims::new(3, 4, 2)).unwrap();
        assert_eq!(ffn_forward(&net, &[1.0, 2.0, 3.0]).unwrap(), vec![0.0, 0.0]);
        let d = DescSubnet::zeros(SubnetDims::new(5, 2, 2)).unwrap();
        assert_eq!(embed_description(&d, &[1.0; 5]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn scalar_net() {
        let y = ffn_forward(&unit_net(), &[1.0]).unwrap();
        assert!((y[0] - 0.642_014_4).abs() < 1e-6);
        assert_eq!(y[0], 1f64.tanh().tanh());
        let d = DescSubnet(unit_net().0);
        assert_eq!(embed_description(&d, &[1.0]).unwrap(), y);
    }

    #[test]
    fn outputs_stay_inside_unit_interval() {
        let net = VideoSubnet::init(3, SubnetDims::new(4, 6, 3)).unwrap();
        let y = ffn_forward(&net, &[1e6, -1e6, 3.0, 0.0]).unwrap();
        assert!(y.iter().all(|v| v.abs() <= 1.0 && v.is_finite()));
        let d = DescSubnet::init(3, SubnetDims::new(4, 6, 3)).unwrap();
        let y = embed_description(&d, &[-50.0, 2.0, 0.1, 9.0]).unwrap();
        assert!(y.iter().all(|v| v.abs() <= 1.0));
    }

    #[test]
    fn pooling() {
        let net = unit_net();
        let same = Matrix::new(4, 1, vec![0.7; 4]).unwrap();
        let one = ffn_forward(&net, &[0.7]).unwrap();
        let pooled = embed_frames(&net, &same).unwrap();
        assert!((pooled[0] - one[0]).abs() < 1e-15);
        let single = Matrix::new(1, 1, vec![0.7]).unwrap();
        assert_eq!(embed_frames(&net, &single).unwrap(), one);
        let two = Matrix::new(2, 1, vec![1.0, -0.5]).unwrap();
        let expected = (1f64.tanh().tanh() + (-0.5f64).tanh().tanh()) / 2.0;
        assert!((embed_frames(&net, &two).unwrap()[0] - expected).abs() < 1e-15);
        assert!(matches!(
            embed_frames(&net, &Matrix::zeros(0, 1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn init_is_seeded_and_bounded() {
        let dims = SubnetDims::new(40, 25, 8);
        let a = VideoSubnet::init(11, dims).unwrap();
        assert_eq!(a, VideoSubnet::init(11, dims).unwrap());
        assert_ne!(a, VideoSubnet::init(12, dims).unwrap());
        let desc = DescSubnet::init(11, dims).unwrap();
        assert_ne!(a.0, desc.0);
        let s1 = 1.0 / 40f64.sqrt();
        let s2 = 1.0 / 25f64.sqrt();
        assert!(a.w1.as_slice().iter().chain(&a.b1).all(|v| v.abs() <= s1));
        assert!(a.w2.as_slice().iter().chain(&a.b2).all(|v| v.abs() <= s2));
        assert!(matches!(
            VideoSubnet::init(1, SubnetDims::new(0, 2, 2)),
            Err(Error::Domain(_))
        ));
    }
}
