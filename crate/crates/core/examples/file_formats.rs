//! Writes and reloads feature matrices, pair lists and checkpoints.

use vidsum::formats::{
    load_checkpoint, read_matrix, read_pairs, save_checkpoint, write_matrix, write_pairs, Magic,
};
use vidsum::model::{embed_frames, DescSubnet, SubnetDims, VideoSubnet};
use vidsum::train::{PairLabel, PairRecord};
use vidsum::Matrix;

fn main() -> vidsum::Result<()> {
    let dir = std::env::temp_dir().join(format!("vidsum-formats-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| vidsum::Error::Io {
        path: dir.clone(),
        source: e,
    })?;

    let feats = Matrix::new(3, 2, vec![0.5, -1.0, 0.25, 2.0, 0.0, 1.5])?;
    let path = dir.join("clip.vsf");
    write_matrix(&path, &feats, Magic::Features)?;
    let back = read_matrix(&path, Magic::Features)?;
    println!(
        "{} bytes, reloaded {:?}",
        std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0),
        back.as_slice()
    );
    match read_matrix(&path, Magic::Descriptions) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("wrong magic rejected: {e}"),
    }

    let pairs = vec![
        PairRecord {
            segment_index: 0,
            desc_index: 1,
            tn: PairLabel::Positive,
        },
        PairRecord {
            segment_index: 2,
            desc_index: 0,
            tn: PairLabel::Negative,
        },
    ];
    write_pairs(dir.join("pairs.csv"), &pairs)?;
    println!(
        "{}",
        std::fs::read_to_string(dir.join("pairs.csv"))
            .unwrap_or_default()
            .trim_end()
    );
    assert_eq!(read_pairs(dir.join("pairs.csv"))?.len(), 2);

    let video = VideoSubnet::init(9, SubnetDims::new(2, 8, 4))?;
    let desc = DescSubnet::init(9, SubnetDims::new(5, 8, 4))?;
    save_checkpoint(dir.join("model.json"), &video, &desc)?;
    let (v2, _) = load_checkpoint(dir.join("model.json"))?;
    let same = embed_frames(&video, &back)? == embed_frames(&v2, &back)?;
    println!("checkpoint reload gives identical embeddings: {same}");

    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}
