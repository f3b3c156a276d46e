use proptest::prelude::*;

use vidsum::matrix::{sq_dist, Matrix};
use vidsum::metrics::{jitter_amount, keyshot_pr, normalize, FoeTrack, Interval};
use vidsum::model::DescSubnet;
use vidsum::model::{
    embed_frames, ffn_forward, lstm_scan, score_importance, ImportanceScorer, LstmParams,
    LstmState, SubnetDims, VideoSubnet,
};
use vidsum::summarize::{
    generate_summary, kmedoids, objective, path_cost, segment_speedups, semantic_threshold_split,
    speedup_frame_selection, uniform_segments, FastForwardParams, SegmentFeature,
};
use vidsum::train::{contrastive_loss, example_loss, sgd_step, PairExample, PairLabel};

fn frames(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3.0f64..3.0, rows * cols)
        .prop_map(move |d| Matrix::new(rows, cols, d).unwrap())
}

fn points(max_n: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, dim), 2..=max_n)
}

fn interval_list() -> impl Strategy<Value = Vec<Interval>> {
    prop::collection::vec((0usize..80, 1usize..25), 1..6).prop_map(|v| {
        v.into_iter()
            .map(|(s, l)| Interval::new(s, s + l))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lstm_ranges_and_causality(seed in 0u64..1000, x in frames(6, 3), cut in 1usize..6) {
        let params = LstmParams::init(seed, 3, 4).unwrap();
        let mut state = LstmState::zeros(4);
        for row in x.iter_rows() {
            let (next, g) = params.step_with_gates(&state, row).unwrap();
            for v in g.input.iter().chain(&g.forget).chain(&g.output) {
                prop_assert!(*v > 0.0 && *v < 1.0);
            }
            prop_assert!(next.h.iter().all(|h| h.abs() < 1.0));
            state = next;
        }
        let full = lstm_scan(&params, &x).unwrap();
        let head = lstm_scan(&params, &x.slice_rows(0, cut).unwrap()).unwrap();
        prop_assert_eq!(head.as_slice(), &full.as_slice()[..cut * 4]);
    }

    #[test]
    fn importance_scores_in_unit_interval(seed in 0u64..1000, x in frames(5, 2)) {
        let scorer = ImportanceScorer::init(seed, 2, 3).unwrap();
        let s = score_importance(&scorer, &x).unwrap();
        prop_assert_eq!(s.len(), 5);
        prop_assert!(s.iter().all(|v| *v > 0.0 && *v < 1.0));
    }

    #[test]
    fn mean_pooling_is_permutation_invariant(seed in 0u64..1000, x in frames(4, 3), rot in 1usize..4) {
        let net = VideoSubnet::init(seed, SubnetDims::new(3, 5, 2)).unwrap();
        let rotated = Matrix::from_rows(3, (0..4).map(|r| x.row((r + rot) % 4))).unwrap();
        let a = embed_frames(&net, &x).unwrap();
        let b = embed_frames(&net, &rotated).unwrap();
        for (u, v) in a.iter().zip(&b) {
            prop_assert!((u - v).abs() < 1e-12);
        }
        prop_assert!(ffn_forward(&net, x.row(0)).unwrap().iter().all(|v| v.is_finite() && v.abs() <= 1.0));
    }

    #[test]
    fn loss_nonnegative_and_zero_cases(
        x in prop::collection::vec(-1.0f64..1.0, 4),
        y in prop::collection::vec(-1.0f64..1.0, 4),
        m in 0.0f64..3.0,
    ) {
        let d = sq_dist(&x, &y);
        let pos = contrastive_loss(&x, &y, PairLabel::Positive, m).unwrap();
        let neg = contrastive_loss(&x, &y, PairLabel::Negative, m).unwrap();
        prop_assert!(pos >= 0.0 && neg >= 0.0);
        prop_assert_eq!(pos == 0.0, x == y);
        prop_assert_eq!(neg == 0.0, d >= m);
    }

    #[test]
    fn loss_is_rotation_invariant(
        x in prop::collection::vec(-1.0f64..1.0, 2),
        y in prop::collection::vec(-1.0f64..1.0, 2),
        angle in 0.0f64..std::f64::consts::TAU,
        positive in any::<bool>(),
    ) {
        let (s, c) = angle.sin_cos();
        let rot = |v: &[f64]| vec![c * v[0] - s * v[1], s * v[0] + c * v[1]];
        let label = if positive { PairLabel::Positive } else { PairLabel::Negative };
        let a = contrastive_loss(&x, &y, label, 1.0).unwrap();
        let b = contrastive_loss(&rot(&x), &rot(&y), label, 1.0).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn tiny_sgd_step_never_increases_loss(seed in 0u64..500, seg in frames(3, 4), positive in any::<bool>()) {
        let mut v = VideoSubnet::init(seed, SubnetDims::new(4, 5, 3)).unwrap();
        let mut d = DescSubnet::init(seed, SubnetDims::new(2, 5, 3)).unwrap();
        let ex = PairExample {
            segment: seg,
            desc: vec![0.5, -0.25],
            label: if positive { PairLabel::Positive } else { PairLabel::Negative },
        };
        let before = example_loss(&v, &d, &ex, 1.0).unwrap();
        sgd_step(&mut v, &mut d, &ex, 1.0, 1e-6).unwrap();
        prop_assert!(example_loss(&v, &d, &ex, 1.0).unwrap() <= before + 1e-15);
    }

    #[test]
    fn kmedoids_local_optimality_and_monotone(pts in points(9, 2), k in 1usize..4) {
        let k = k.min(pts.len());
        let c = kmedoids(&pts, k, 100).unwrap();
        prop_assert!(c.trace.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!((objective(&pts, &c.medoids).unwrap() - c.objective).abs() <= 1e-9 * (1.0 + c.objective));
        for slot in 0..k {
            for cand in (0..pts.len()).filter(|i| !c.medoids.contains(i)) {
                let mut m = c.medoids.clone();
                m[slot] = cand;
                prop_assert!(objective(&pts, &m).unwrap() >= c.objective * (1.0 - 1e-9) - 1e-12);
            }
        }
    }

    #[test]
    fn kmedoids_translation_and_scale_invariant(
        pts in points(8, 2),
        k in 1usize..4,
        shift in prop::collection::vec(-5.0f64..5.0, 2),
    ) {
        let k = k.min(pts.len());
        let base = kmedoids(&pts, k, 100).unwrap().medoids;
        // Powers of two keep the arithmetic exact, so ties resolve identically.
        let scaled: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|v| v * 4.0).collect()).collect();
        prop_assert_eq!(&kmedoids(&scaled, k, 100).unwrap().medoids, &base);
        let moved: Vec<Vec<f64>> = pts.iter().map(|p| vec![p[0] + shift[0], p[1] + shift[1]]).collect();
        let c = kmedoids(&moved, k, 100).unwrap();
        let orig = objective(&pts, &c.medoids).unwrap();
        let best = objective(&pts, &base).unwrap();
        prop_assert!((orig - best).abs() <= 1e-9 * (1.0 + best));
    }

    #[test]
    fn summary_is_ordered_and_unique(pts in points(12, 3), k in 1usize..6) {
        let segs = uniform_segments(pts.len() * 4, 4).unwrap();
        let feats: Vec<SegmentFeature> = segs.iter().zip(&pts)
            .map(|(s, p)| SegmentFeature { segment: *s, feature: p.clone() })
            .collect();
        let k = k.min(feats.len());
        let chosen = generate_summary(&feats, k).unwrap();
        prop_assert_eq!(chosen.len(), k);
        prop_assert!(chosen.windows(2).all(|w| w[0].start < w[1].start));
    }

    #[test]
    fn uniform_segments_cover_prefix(n in 0usize..200, len in 1usize..20) {
        let segs = uniform_segments(n, len).unwrap();
        prop_assert_eq!(segs.len(), n / len);
        prop_assert_eq!(segs.iter().map(|s| s.len()).sum::<usize>(), (n / len) * len);
        prop_assert!(segs.windows(2).all(|w| w[0].end == w[1].start));
        prop_assert!(segs.first().is_none_or(|s| s.start == 0));
    }

    #[test]
    fn threshold_split_partitions(scores in prop::collection::vec(-5.0f64..5.0, 1..60)) {
        let s = semantic_threshold_split(&scores).unwrap();
        let mut covered = vec![0u8; scores.len()];
        for r in s.semantic.iter().chain(&s.non_semantic) {
            for t in r.clone() { covered[t] += 1; }
        }
        prop_assert!(covered.iter().all(|&c| c == 1));
        for r in &s.semantic { prop_assert!(r.clone().all(|t| scores[t] >= s.threshold)); }
        for r in &s.non_semantic { prop_assert!(r.clone().all(|t| scores[t] < s.threshold)); }
        let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(s.threshold >= lo && s.threshold <= hi);
    }

    #[test]
    fn speedups_reproduce_target(len_s in 0usize..1000, len_ns in 1usize..1000, target in 1.0f64..12.0, frac in 0.0f64..1.0) {
        let rho_s = 1.0 + frac * (target - 1.0);
        if let Ok(rho_ns) = segment_speedups(len_s, len_ns, target, rho_s) {
            let (a, b) = (len_s as f64, len_ns as f64);
            prop_assert!(((a + b) / (a / rho_s + b / rho_ns) - target).abs() <= 1e-9);
            prop_assert!(rho_ns >= target - 1e-9);
        }
    }

    #[test]
    fn frame_selection_path_shape(
        scores in prop::collection::vec(0.0f64..1.0, 2..80),
        rho in 1.0f64..6.0,
        max_skip in 1usize..10,
        lambda_sem in 0.0f64..2.0,
    ) {
        let p = FastForwardParams { rho, max_skip, lambda_speed: 1.0, lambda_sem };
        let path = speedup_frame_selection(&scores, &p).unwrap();
        prop_assert_eq!(path[0], 0);
        prop_assert_eq!(*path.last().unwrap(), scores.len() - 1);
        prop_assert!(path.windows(2).all(|w| w[0] < w[1] && w[1] - w[0] <= max_skip));
        prop_assert!(path_cost(&scores, &path, &p).is_finite());
    }

    #[test]
    fn keyshot_properties(a in interval_list(), b in interval_list(), cut in 0usize..30) {
        let (sa, sb) = (normalize(a.clone()).unwrap(), normalize(b).unwrap());
        let ab = keyshot_pr(&sa, &sb).unwrap();
        let ba = keyshot_pr(&sb, &sa).unwrap();
        prop_assert_eq!(ab.precision, ba.recall);
        for v in [ab.precision, ab.recall, ab.f1] { prop_assert!((0.0..=1.0).contains(&v)); }
        prop_assert!(ab.f1 <= ab.precision.max(ab.recall) + 1e-15);
        prop_assert_eq!(ab.f1 == 0.0, sa.overlap(&sb) == 0);

        // Splitting an interval into adjacent pieces changes nothing.
        let first = a[0];
        let mid = first.start + cut % first.len().max(1);
        let mut split = a.clone();
        if mid > first.start {
            split[0] = Interval::new(first.start, mid);
            split.push(Interval::new(mid, first.end));
        }
        prop_assert_eq!(normalize(split).unwrap(), sa.clone());
    }

    #[test]
    fn normalize_preserves_coverage(a in interval_list()) {
        let s = normalize(a.clone()).unwrap();
        let count = (0..120).filter(|&f| a.iter().any(|i| i.start <= f && f < i.end)).count();
        prop_assert_eq!(s.duration(), count);
        prop_assert!(s.intervals().windows(2).all(|w| w[0].end < w[1].start));
    }

    #[test]
    fn jitter_translation_and_scale(
        pts in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 2..20),
        dx in -10.0f64..10.0,
        scale in 0.1f64..5.0,
    ) {
        let base = jitter_amount(&FoeTrack(pts.clone())).unwrap();
        let moved = jitter_amount(&FoeTrack(pts.iter().map(|(x, y)| (x + dx, y - dx)).collect())).unwrap();
        let scaled = jitter_amount(&FoeTrack(pts.iter().map(|(x, y)| (x * scale, y * scale)).collect())).unwrap();
        prop_assert!((moved - base).abs() <= 1e-9 * (1.0 + base));
        prop_assert!((scaled - scale * base).abs() <= 1e-9 * (1.0 + base));
    }
}
