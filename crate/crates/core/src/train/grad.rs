use super::loss::{contrastive_loss, PairLabel};
use super::pairs::PairExample;
use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;
use crate::model::{embed_description, embed_frames, DescSubnet, TanhMlp, VideoSubnet};

/// Loss gradients with the same layout as the two networks.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub video: TanhMlp,
    pub desc: TanhMlp,
    /// Loss at the evaluation point.
    pub loss: f64,
}

impl Gradients {
    /// Analytic gradients flattened in parameter order: video `W1, b1, W2, b2`
    /// then description `W1, b1, W2, b2`.
    pub fn flatten(&self) -> Vec<f64> {
        self.video
            .param_blocks()
            .into_iter()
            .chain(self.desc.param_blocks())
            .flatten()
            .copied()
            .collect()
    }
}

fn check_dims(vnet: &VideoSubnet, dnet: &DescSubnet, ex: &PairExample) -> Result<()> {
    if vnet.embed_dim() != dnet.embed_dim() {
        return Err(Error::shape(format!(
            "video embeds into {} dims, description into {}",
            vnet.embed_dim(),
            dnet.embed_dim()
        )));
    }
    if ex.segment.cols() != vnet.input_dim() {
        return Err(Error::shape(format!(
            "segment frames have {} columns, video net expects {}",
            ex.segment.cols(),
            vnet.input_dim()
        )));
    }
    if ex.desc.len() != dnet.input_dim() {
        return Err(Error::shape(format!(
            "description has {} values, description net expects {}",
            ex.desc.len(),
            dnet.input_dim()
        )));
    }
    Ok(())
}

/// Contrastive loss of one pair under the current networks.
pub fn example_loss(
    vnet: &VideoSubnet,
    dnet: &DescSubnet,
    ex: &PairExample,
    margin: f64,
) -> Result<f64> {
    check_dims(vnet, dnet, ex)?;
    let x = embed_frames(vnet, &ex.segment)?;
    let y = embed_description(dnet, &ex.desc)?;
    contrastive_loss(&x, &y, ex.label, margin)
}

/// Exact gradient of [`example_loss`] with respect to every weight and bias of
/// both networks. The hinge of a negative pair is inactive at `d == margin`.
pub fn loss_gradients(
    vnet: &VideoSubnet,
    dnet: &DescSubnet,
    ex: &PairExample,
    margin: f64,
) -> Result<Gradients> {
    check_dims(vnet, dnet, ex)?;
    let x = embed_frames(vnet, &ex.segment)?;
    let y = embed_description(dnet, &ex.desc)?;
    let loss = contrastive_loss(&x, &y, ex.label, margin)?;

    // dL/dx; dL/dy is its negation.
    let d: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
    let coef = match ex.label {
        PairLabel::Positive => 2.0,
        PairLabel::Negative if margin - d > 0.0 => -2.0,
        PairLabel::Negative => 0.0,
    };
    let g_x: Vec<f64> = x.iter().zip(&y).map(|(a, b)| coef * (a - b)).collect();
    let g_y: Vec<f64> = g_x.iter().map(|g| -g).collect();

    let mut video = TanhMlp::zeros(vnet.dims())?;
    let mut desc = TanhMlp::zeros(dnet.dims())?;
    if coef != 0.0 {
        backprop_mean_pool(vnet, &ex.segment, &g_x, &mut video);
        backprop_one(dnet, &ex.desc, &g_y, 1.0, &mut desc);
    }
    Ok(Gradients { video, desc, loss })
}

fn backprop_mean_pool(net: &TanhMlp, frames: &FeatureMatrix, g_out: &[f64], acc: &mut TanhMlp) {
    let scale = 1.0 / frames.rows() as f64;
    for frame in frames.iter_rows() {
        backprop_one(net, frame, g_out, scale, acc);
    }
}

/// Accumulates `scale * d(g_out . net(x)) / d(theta)` into `acc`.
fn backprop_one(net: &TanhMlp, x: &[f64], g_out: &[f64], scale: f64, acc: &mut TanhMlp) {
    let trace = net.trace(x);
    let g_a2: Vec<f64> = g_out
        .iter()
        .zip(&trace.output)
        .map(|(g, o)| scale * g * (1.0 - o * o))
        .collect();
    acc.w2.add_outer(1.0, &g_a2, &trace.hidden);
    acc.b2.iter_mut().zip(&g_a2).for_each(|(b, g)| *b += g);
    let g_a1: Vec<f64> = net
        .w2
        .mat_t_vec(&g_a2)
        .into_iter()
        .zip(&trace.hidden)
        .map(|(g, h)| g * (1.0 - h * h))
        .collect();
    acc.w1.add_outer(1.0, &g_a1, x);
    acc.b1.iter_mut().zip(&g_a1).for_each(|(b, g)| *b += g);
}

/// Largest relative disagreement between the analytic gradient and central
/// differences `(L(t + h) - L(t - h)) / 2h` over every parameter of both
/// networks. The relative error of one parameter is
/// `|a - n| / max(|a|, |n|, 1e-8)`.
pub fn finite_diff_check(
    vnet: &VideoSubnet,
    dnet: &DescSubnet,
    ex: &PairExample,
    margin: f64,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("step must be positive, got {h}")));
    }
    let analytic = loss_gradients(vnet, dnet, ex, margin)?.flatten();
    let mut v = vnet.clone();
    let mut d = dnet.clone();
    let mut worst: f64 = 0.0;
    for (k, &a) in analytic.iter().enumerate() {
        let numeric = {
            let base = *param_slot(&mut v, &mut d, k);
            *param_slot(&mut v, &mut d, k) = base + h;
            let plus = example_loss(&v, &d, ex, margin)?;
            *param_slot(&mut v, &mut d, k) = base - h;
            let minus = example_loss(&v, &d, ex, margin)?;
            *param_slot(&mut v, &mut d, k) = base;
            (plus - minus) / (2.0 * h)
        };
        let denom = a.abs().max(numeric.abs()).max(1e-8);
        worst = worst.max((a - numeric).abs() / denom);
    }
    Ok(worst)
}

fn param_slot<'a>(v: &'a mut VideoSubnet, d: &'a mut DescSubnet, mut k: usize) -> &'a mut f64 {
    for net in [&mut v.0, &mut d.0] {
        for block in net.param_blocks_mut() {
            if k < block.len() {
                return &mut block[k];
            }
            k -= block.len();
        }
    }
    panic!("parameter index out of range")
}
