//! The `vidsum` command line.
//!
//! Exit codes: 0 on success, 1 on runtime or validation errors (message on
//! stderr), 2 on usage errors (usage text on stderr).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formats::{
    load_checkpoint, read_intervals, read_json, read_matrix, read_pairs, save_checkpoint,
    write_json, write_matrix, write_pairs, write_summary, IntervalsDoc, Magic, RoiDoc,
};
use crate::matrix::Matrix;
use crate::metrics::{jitter_amount, keyshot_pr, speedup_deviation, FoeTrack, Interval};
use crate::model::{score_importance, DescSubnet, ImportanceScorer, SubnetDims, VideoSubnet};
use crate::model::{DEFAULT_EMBED_DIM, DEFAULT_HIDDEN_DIM};
use crate::summarize::{
    generate_summary, segment_features, semantic_fast_forward, semantic_score,
    speedup_frame_selection, uniform_segments, FastForwardParams,
};
use crate::synth::{synth_generate, SynthSpec};
use crate::train::{
    finite_diff_check, sample_pairs, sgd_train, PairExample, PairLabel, TrainConfig,
};

#[derive(Debug, Parser)]
#[command(name = "vidsum", version, about = "Feature-stream video summarization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a planted-event feature stream with descriptions, pair labels and truth windows.
    GenSynth(GenSynthArgs),
    /// Train the video and description subnetworks on labelled pairs.
    Train(TrainArgs),
    /// Select K summary segments by k-medoids over segment embeddings.
    Summarize(SummarizeArgs),
    /// Score frame importance with a seeded bidirectional LSTM.
    ScoreLstm(ScoreLstmArgs),
    /// Score frames from their regions of interest.
    ScoreSemantic(ScoreSemanticArgs),
    /// Pick output frames for a fast-forward by shortest path.
    Fastforward(FastforwardArgs),
    /// Compare a summary against reference intervals.
    Eval(EvalArgs),
    /// Check analytic loss gradients against central differences.
    Gradcheck(GradcheckArgs),
}

#[derive(Debug, Args)]
struct GenSynthArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    events: usize,
    #[arg(long, default_value_t = 40)]
    frames_per_event: usize,
    #[arg(long, default_value_t = 5)]
    gap: usize,
    #[arg(long, default_value_t = 16)]
    dim: usize,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long, default_value_t = 5)]
    seg_len: usize,
    /// Output feature file (VSF1).
    #[arg(long)]
    features: PathBuf,
    /// Output description file (VSD1).
    #[arg(long)]
    descs: PathBuf,
    /// Output pair-label CSV.
    #[arg(long)]
    pairs: PathBuf,
    /// Output truth intervals (JSON).
    #[arg(long)]
    truth: PathBuf,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    descs: PathBuf,
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    seg_len: usize,
    #[arg(long, default_value_t = DEFAULT_EMBED_DIM)]
    embed_dim: usize,
    #[arg(long, default_value_t = DEFAULT_HIDDEN_DIM)]
    hidden: usize,
    #[arg(long, default_value_t = 1.0)]
    margin: f64,
    #[arg(long, default_value_t = TrainConfig::default().learning_rate)]
    lr: f64,
    #[arg(long, default_value_t = TrainConfig::default().epochs)]
    epochs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output checkpoint (JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SummarizeArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    seg_len: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ScoreLstmArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long, default_value_t = DEFAULT_HIDDEN_DIM)]
    hidden: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output score column (VSF1, T x 1).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ScoreSemanticArgs {
    /// ROI document (JSON).
    #[arg(long)]
    rois: PathBuf,
    /// Output score column (VSF1, T x 1).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct FastforwardArgs {
    /// Score column (VSF1, T x 1).
    #[arg(long)]
    scores: PathBuf,
    #[arg(long)]
    speedup: f64,
    #[arg(long)]
    max_skip: usize,
    #[arg(long, default_value_t = 1.0)]
    lambda_speed: f64,
    #[arg(long, default_value_t = 0.0)]
    lambda_sem: f64,
    /// Split at the semantic threshold and play semantic runs at this rate,
    /// compensating in the non-semantic runs.
    #[arg(long)]
    semantic_speedup: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    summary: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Optional FOE track (JSON list of [x, y]) for the jitter amount.
    #[arg(long)]
    foe: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GradcheckArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    trials: u64,
    #[arg(long, default_value_t = 8)]
    input_dim: usize,
    #[arg(long, default_value_t = 6)]
    hidden: usize,
    #[arg(long, default_value_t = 4)]
    embed_dim: usize,
    #[arg(long, default_value_t = 5)]
    desc_dim: usize,
    #[arg(long, default_value_t = 3)]
    frames: usize,
    #[arg(long, default_value_t = 1.0)]
    margin: f64,
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    let report = match cmd {
        Command::GenSynth(a) => gen_synth(a)?,
        Command::Train(a) => train(a)?,
        Command::Summarize(a) => summarize(a)?,
        Command::ScoreLstm(a) => score_lstm(a)?,
        Command::ScoreSemantic(a) => score_semantic(a)?,
        Command::Fastforward(a) => fastforward(a)?,
        Command::Eval(a) => eval(a)?,
        Command::Gradcheck(a) => return gradcheck(a, out),
    };
    emit(out, &report)
}

fn emit(out: &mut dyn Write, report: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(report).expect("JSON values serialize");
    writeln!(out, "{text}").map_err(|e| Error::io("<stdout>", e))
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn gen_synth(a: GenSynthArgs) -> Result<serde_json::Value> {
    let spec = SynthSpec {
        seed: a.seed,
        n_events: a.events,
        frames_per_event: a.frames_per_event,
        gap_frames: a.gap,
        dim: a.dim,
        noise_sigma: a.noise,
        seg_len: a.seg_len,
    };
    let data = synth_generate(&spec)?;
    write_matrix(&a.features, &data.features, Magic::Features)?;
    write_matrix(&a.descs, &data.descs, Magic::Descriptions)?;
    write_pairs(&a.pairs, &data.labels)?;
    write_json(
        &a.truth,
        &IntervalsDoc {
            intervals: data.truth.intervals().to_vec(),
            fps: None,
        },
    )?;
    Ok(serde_json::json!({
        "frames": data.features.rows(),
        "dim": data.features.cols(),
        "events": data.truth.intervals().len(),
        "pairs": data.labels.len(),
    }))
}

fn train(a: TrainArgs) -> Result<serde_json::Value> {
    let frames = read_matrix(&a.features, Magic::Features)?;
    let descs = read_matrix(&a.descs, Magic::Descriptions)?;
    let labels = read_pairs(&a.pairs)?;
    let segments = uniform_segments(frames.rows(), a.seg_len)?;
    let dataset = sample_pairs(&frames, &segments, &descs, &labels)?;
    let video = VideoSubnet::init(
        a.seed,
        SubnetDims::new(frames.cols(), a.hidden, a.embed_dim),
    )?;
    let desc = DescSubnet::init(a.seed, SubnetDims::new(descs.cols(), a.hidden, a.embed_dim))?;
    let cfg = TrainConfig {
        margin: a.margin,
        learning_rate: a.lr,
        epochs: a.epochs,
        seed: a.seed,
        shuffle: true,
    };
    let outcome = sgd_train(video, desc, &dataset, &cfg)?;
    save_checkpoint(&a.out, &outcome.video, &outcome.desc)?;
    Ok(serde_json::json!({
        "examples": dataset.len(),
        "epochs": outcome.history.len(),
        "final_loss": outcome.history.last(),
        "loss_history": outcome.history,
    }))
}

fn summarize(a: SummarizeArgs) -> Result<serde_json::Value> {
    let frames = read_matrix(&a.features, Magic::Features)?;
    let (video, _) = load_checkpoint(&a.model)?;
    let segments = uniform_segments(frames.rows(), a.seg_len)?;
    let feats = segment_features(&video, &frames, &segments)?;
    let chosen = generate_summary(&feats, a.k)?;
    write_summary(&a.out, &chosen, a.k, a.seg_len)?;
    Ok(serde_json::json!({
        "segments": segments.len(),
        "selected": chosen.iter().map(|s| Interval::new(s.start, s.end)).collect::<Vec<_>>(),
    }))
}

fn score_column(scores: Vec<f64>) -> Result<Matrix> {
    let n = scores.len();
    Matrix::new(n, 1, scores)
}

fn score_lstm(a: ScoreLstmArgs) -> Result<serde_json::Value> {
    let frames = read_matrix(&a.features, Magic::Features)?;
    let scorer = ImportanceScorer::init(a.seed, frames.cols(), a.hidden)?;
    let scores = score_importance(&scorer, &frames)?;
    let n = scores.len();
    write_matrix(&a.out, &score_column(scores)?, Magic::Features)?;
    Ok(serde_json::json!({ "frames": n }))
}

fn score_semantic(a: ScoreSemanticArgs) -> Result<serde_json::Value> {
    let doc: RoiDoc = read_json(&a.rois)?;
    let sigma = doc.sigma_or_default();
    let scores = doc
        .frames
        .iter()
        .enumerate()
        .map(|(i, rois)| {
            semantic_score(rois, doc.frame_width, doc.frame_height, sigma)
                .map_err(|e| Error::validation(format!("frame {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = scores.len();
    write_matrix(&a.out, &score_column(scores)?, Magic::Features)?;
    Ok(serde_json::json!({ "frames": n, "sigma": sigma }))
}

fn fastforward(a: FastforwardArgs) -> Result<serde_json::Value> {
    let m = read_matrix(&a.scores, Magic::Features)?;
    if m.cols() != 1 {
        return Err(Error::validation(format!(
            "score file must have one column, found {}",
            m.cols()
        )));
    }
    let scores = m.into_vec();
    let params = FastForwardParams {
        rho: a.speedup,
        max_skip: a.max_skip,
        lambda_speed: a.lambda_speed,
        lambda_sem: a.lambda_sem,
    };
    let mut report = serde_json::Map::new();
    let frames = match a.semantic_speedup {
        None => speedup_frame_selection(&scores, &params)?,
        Some(rho_s) => {
            let ff = semantic_fast_forward(&scores, a.speedup, rho_s, &params)?;
            report.insert("threshold".into(), to_value(&ff.split.threshold));
            report.insert("rho_semantic".into(), to_value(&ff.rho_semantic));
            report.insert("rho_non_semantic".into(), to_value(&ff.rho_non_semantic));
            ff.frames
        }
    };
    let achieved = scores.len() as f64 / frames.len() as f64;
    report.insert("n_input".into(), to_value(&scores.len()));
    report.insert("n_output".into(), to_value(&frames.len()));
    report.insert("achieved_speedup".into(), to_value(&achieved));
    report.insert(
        "speedup_deviation".into(),
        to_value(&speedup_deviation(a.speedup, scores.len(), frames.len())?),
    );
    report.insert("frames".into(), to_value(&frames));
    let report = serde_json::Value::Object(report);
    write_json(&a.out, &report)?;
    Ok(serde_json::json!({
        "n_output": frames.len(),
        "achieved_speedup": achieved,
    }))
}

fn eval(a: EvalArgs) -> Result<serde_json::Value> {
    let summary = read_intervals(&a.summary)?;
    let truth = read_intervals(&a.truth)?;
    let score = keyshot_pr(&summary, &truth)?;
    let mut report = to_value(&score);
    if let Some(path) = a.foe {
        let track: FoeTrack = read_json(&path)?;
        report["jitter"] = to_value(&jitter_amount(&track)?);
    }
    Ok(report)
}

fn gradcheck(a: GradcheckArgs, out: &mut dyn Write) -> Result<()> {
    use rand::{Rng, SeedableRng};
    let mut worst: f64 = 0.0;
    for trial in 0..a.trials {
        let seed = a.seed.wrapping_add(trial);
        let video = VideoSubnet::init(seed, SubnetDims::new(a.input_dim, a.hidden, a.embed_dim))?;
        let desc = DescSubnet::init(seed, SubnetDims::new(a.desc_dim, a.hidden, a.embed_dim))?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let segment = Matrix::new(
            a.frames,
            a.input_dim,
            (0..a.frames * a.input_dim)
                .map(|_| rng.random_range(-1.0..1.0))
                .collect(),
        )?;
        let desc_vec = (0..a.desc_dim)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let label = if trial % 2 == 0 {
            PairLabel::Positive
        } else {
            PairLabel::Negative
        };
        let ex = PairExample {
            segment,
            desc: desc_vec,
            label,
        };
        worst = worst.max(finite_diff_check(&video, &desc, &ex, a.margin, a.step)?);
    }
    let passed = worst <= a.tolerance;
    emit(
        out,
        &serde_json::json!({
            "trials": a.trials,
            "max_rel_error": worst,
            "tolerance": a.tolerance,
            "passed": passed,
        }),
    )?;
    if passed {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "max relative error {worst:e} exceeds tolerance {:e}",
            a.tolerance
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("vidsum").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn help_and_usage_errors() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("gen-synth") && out.contains("gradcheck"));
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["summarize", "--k", "x"]).0, 2);
    }

    #[test]
    fn runtime_errors_exit_one() {
        let (code, _, err) = run_args(&[
            "eval",
            "--summary",
            "/nonexistent/a.json",
            "--truth",
            "/nonexistent/b.json",
        ]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn gradcheck_passes() {
        let (code, out, _) = run_args(&["gradcheck", "--trials", "4"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("\"passed\": true"));
    }
}
