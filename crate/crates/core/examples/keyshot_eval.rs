//! Keyshot precision/recall and camera jitter on hand-written inputs.

use vidsum::metrics::{jitter_amount, keyshot_pr, normalize, FoeTrack, Interval};

fn main() -> vidsum::Result<()> {
    let summary = normalize(vec![
        Interval::new(0, 10),
        Interval::new(40, 55),
        Interval::new(50, 60),
    ])?;
    let truth = normalize(vec![Interval::new(5, 15), Interval::new(45, 70)])?;
    println!("summary {:?}", summary.intervals());
    println!("truth   {:?}", truth.intervals());
    println!("overlap {} frames", summary.overlap(&truth));
    let s = keyshot_pr(&summary, &truth)?;
    println!(
        "precision {:.3}  recall {:.3}  f1 {:.3}",
        s.precision, s.recall, s.f1
    );

    let steady = FoeTrack((0..20).map(|t| (320.0 + t as f64, 240.0)).collect());
    let shaky = FoeTrack(
        (0..20)
            .map(|t| (320.0 + if t % 2 == 0 { 15.0 } else { -15.0 }, 240.0))
            .collect(),
    );
    println!(
        "jitter steady {:.3}, shaky {:.3}",
        jitter_amount(&steady)?,
        jitter_amount(&shaky)?
    );
    Ok(())
}
