//! Scores every frame of a toy clip with a bidirectional LSTM.

use vidsum::model::{lstm_scan, score_importance, ImportanceScorer, LstmParams};
use vidsum::Matrix;

fn main() -> vidsum::Result<()> {
    let frames = Matrix::new(12, 4, (0..48).map(|i| (i as f64 * 0.37).sin()).collect())?;

    let cell = LstmParams::init(7, 4, 8)?;
    let hidden = lstm_scan(&cell, &frames)?;
    println!(
        "forward hidden states: {} x {}",
        hidden.rows(),
        hidden.cols()
    );

    let scorer = ImportanceScorer::init(7, 4, 8)?;
    let scores = score_importance(&scorer, &frames)?;
    for (t, s) in scores.iter().enumerate() {
        println!("frame {t:2}  {s:.4}  {}", "#".repeat((s * 40.0) as usize));
    }
    Ok(())
}
