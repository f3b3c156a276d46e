use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::grad::loss_gradients;
use super::pairs::PairExample;
use crate::error::{Error, Result};
use crate::model::{DescSubnet, TanhMlp, VideoSubnet};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub margin: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Reshuffle the example order every epoch.
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            margin: 1.0,
            learning_rate: 0.05,
            epochs: 100,
            seed: 0,
            shuffle: true,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.margin >= 0.0) || !self.margin.is_finite() {
            return Err(Error::domain(format!(
                "margin must be >= 0, got {}",
                self.margin
            )));
        }
        if !(self.learning_rate >= 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::domain(format!(
                "learning rate must be >= 0, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub video: VideoSubnet,
    pub desc: DescSubnet,
    /// Mean per-example loss of each epoch, measured before each example's update.
    pub history: Vec<f64>,
}

/// One plain gradient step on a single example. Returns the loss before the step.
pub fn sgd_step(
    video: &mut VideoSubnet,
    desc: &mut DescSubnet,
    ex: &PairExample,
    margin: f64,
    learning_rate: f64,
) -> Result<f64> {
    let grads = loss_gradients(video, desc, ex, margin)?;
    apply(&mut video.0, &grads.video, learning_rate);
    apply(&mut desc.0, &grads.desc, learning_rate);
    Ok(grads.loss)
}

fn apply(net: &mut TanhMlp, grad: &TanhMlp, lr: f64) {
    for (p, g) in net.param_blocks_mut().into_iter().zip(grad.param_blocks()) {
        for (p, g) in p.iter_mut().zip(g) {
            *p -= lr * g;
        }
    }
}

/// Plain per-example SGD over `dataset` for `cfg.epochs` epochs.
///
/// With `shuffle` on, each epoch visits the examples in a permutation drawn
/// from a ChaCha generator seeded with `cfg.seed`; the run is bitwise
/// reproducible for fixed inputs.
pub fn sgd_train(
    mut video: VideoSubnet,
    mut desc: DescSubnet,
    dataset: &[PairExample],
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if dataset.is_empty() {
        return Err(Error::domain("training set is empty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    let mut history = Vec::with_capacity(cfg.epochs);
    for _ in 0..cfg.epochs {
        if cfg.shuffle {
            order.shuffle(&mut rng);
        }
        let mut total = 0.0;
        for &i in &order {
            total += sgd_step(
                &mut video,
                &mut desc,
                &dataset[i],
                cfg.margin,
                cfg.learning_rate,
            )?;
        }
        history.push(total / dataset.len() as f64);
    }
    Ok(TrainOutcome {
        video,
        desc,
        history,
    })
}
