//! Picks representative segments with k-medoids and scores them against the events.

use vidsum::metrics::{keyshot_pr, normalize, Interval};
use vidsum::model::{SubnetDims, VideoSubnet};
use vidsum::summarize::{generate_summary, kmedoids, segment_features};
use vidsum::synth::{synth_generate, SynthSpec};

fn main() -> vidsum::Result<()> {
    let data = synth_generate(&SynthSpec {
        seed: 4,
        ..SynthSpec::default()
    })?;
    let video = VideoSubnet::init(4, SubnetDims::new(data.features.cols(), 64, 32))?;
    let feats = segment_features(&video, &data.features, &data.segments())?;

    let points: Vec<&[f64]> = feats.iter().map(|f| f.feature.as_slice()).collect();
    let c = kmedoids(&points, 5, 1000)?;
    println!("medoids {:?}", c.medoids);
    println!("objective trace {:?}", c.trace);

    let chosen = generate_summary(&feats, 5)?;
    let summary = normalize(chosen.iter().map(|s| Interval::new(s.start, s.end)))?;
    for s in &chosen {
        println!(
            "segment {:3}  frames {}..{}  event {:?}",
            s.index,
            s.start,
            s.end,
            data.event_of(s)
        );
    }
    let score = keyshot_pr(&summary, &data.truth)?;
    println!(
        "precision {:.3}  recall {:.3}  f1 {:.3}",
        score.precision, score.recall, score.f1
    );
    Ok(())
}
