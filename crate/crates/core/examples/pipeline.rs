//! The whole path in one process: synthetic video, training, summary, evaluation.

use vidsum::metrics::{keyshot_pr, normalize, Interval};
use vidsum::model::{DescSubnet, SubnetDims, VideoSubnet};
use vidsum::summarize::{generate_summary, segment_features};
use vidsum::synth::{synth_generate, SynthSpec};
use vidsum::train::{sample_pairs, sgd_train, TrainConfig};

fn main() -> vidsum::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let data = synth_generate(&SynthSpec {
        seed,
        ..SynthSpec::default()
    })?;
    let segments = data.segments();
    println!(
        "{} frames, {} segments, {} events",
        data.features.rows(),
        segments.len(),
        data.truth.intervals().len()
    );

    let dims = |input| SubnetDims::new(input, 32, 16);
    let video = VideoSubnet::init(seed, dims(data.features.cols()))?;
    let desc = DescSubnet::init(seed, dims(data.descs.cols()))?;
    let dataset = sample_pairs(&data.features, &segments, &data.descs, &data.labels)?;
    let cfg = TrainConfig {
        epochs: 300,
        seed,
        ..TrainConfig::default()
    };
    let trained = sgd_train(video, desc, &dataset, &cfg)?;
    println!(
        "loss {:.4} -> {:.4}",
        trained.history.first().copied().unwrap_or(0.0),
        trained.history.last().copied().unwrap_or(0.0)
    );

    let feats = segment_features(&trained.video, &data.features, &segments)?;
    let chosen = generate_summary(&feats, data.truth.intervals().len())?;
    let summary = normalize(chosen.iter().map(|s| Interval::new(s.start, s.end)))?;
    let score = keyshot_pr(&summary, &data.truth)?;
    println!("summary {:?}", summary.intervals());
    println!(
        "precision {:.3}  recall {:.3}  f1 {:.3}",
        score.precision, score.recall, score.f1
    );
    Ok(())
}
