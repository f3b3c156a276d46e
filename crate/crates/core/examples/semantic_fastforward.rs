//! Fast-forwards a clip, slowing down where detections cluster near the centre.

use vidsum::metrics::speedup_deviation;
use vidsum::summarize::{semantic_fast_forward, semantic_score, FastForwardParams, Roi};

fn main() -> vidsum::Result<()> {
    let (w, h) = (640.0, 480.0);
    let sigma = (w * w + h * h).sqrt() / 4.0;
    let scores: Vec<f64> = (0..600)
        .map(|t| {
            let rois = if (200..320).contains(&t) {
                vec![Roi {
                    confidence: 0.8,
                    center: (320.0 + (t as f64 * 0.1).sin() * 40.0, 240.0),
                    area: 0.15 * w * h,
                }]
            } else if t % 97 == 0 {
                vec![Roi {
                    confidence: 0.3,
                    center: (30.0, 30.0),
                    area: 0.01 * w * h,
                }]
            } else {
                Vec::new()
            };
            semantic_score(&rois, w, h, sigma)
        })
        .collect::<vidsum::Result<_>>()?;

    let target = 6.0;
    let params = FastForwardParams {
        rho: target,
        max_skip: 18,
        lambda_speed: 1.0,
        lambda_sem: 0.0,
    };
    let ff = semantic_fast_forward(&scores, target, 3.0, &params)?;
    println!("threshold {:.3e}", ff.split.threshold);
    println!(
        "semantic frames {}, others {}",
        ff.split.semantic_len(),
        ff.split.non_semantic_len()
    );
    println!(
        "speed-ups: semantic {:.2}, non-semantic {:.2}",
        ff.rho_semantic, ff.rho_non_semantic
    );
    println!(
        "kept {} of {} frames, deviation from target {:.3}",
        ff.frames.len(),
        scores.len(),
        speedup_deviation(target, scores.len(), ff.frames.len())?
    );
    Ok(())
}
