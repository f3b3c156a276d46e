//! Trains the two embedding subnetworks on synthetic segment/description pairs.

use vidsum::matrix::sq_dist;
use vidsum::model::{embed_description, embed_frames, DescSubnet, SubnetDims, VideoSubnet};
use vidsum::synth::{synth_generate, SynthSpec};
use vidsum::train::{sample_pairs, sgd_train, TrainConfig};

fn main() -> vidsum::Result<()> {
    let data = synth_generate(&SynthSpec {
        seed: 1,
        ..SynthSpec::default()
    })?;
    let segments = data.segments();
    let dataset = sample_pairs(&data.features, &segments, &data.descs, &data.labels)?;
    println!("{} labelled pairs", dataset.len());

    let video = VideoSubnet::init(1, SubnetDims::new(data.features.cols(), 32, 16))?;
    let desc = DescSubnet::init(1, SubnetDims::new(data.descs.cols(), 32, 16))?;
    let cfg = TrainConfig {
        epochs: 200,
        seed: 1,
        ..TrainConfig::default()
    };
    let out = sgd_train(video, desc, &dataset, &cfg)?;
    for (e, loss) in out.history.iter().enumerate().step_by(25) {
        println!("epoch {e:3}  mean loss {loss:.5}");
    }

    // Each event's segments should now sit nearest their own description.
    let seg = &segments[0];
    let event = data
        .event_of(seg)
        .expect("first segment lies inside an event");
    let x = embed_frames(&out.video, &data.features.slice_rows(seg.start, seg.end)?)?;
    for i in 0..data.descs.rows() {
        let y = embed_description(&out.desc, data.descs.row(i))?;
        let mark = if i == event { " <- own event" } else { "" };
        println!(
            "segment 0 to description {i}: {:.4}{mark}",
            sq_dist(&x, &y).sqrt()
        );
    }
    Ok(())
}
