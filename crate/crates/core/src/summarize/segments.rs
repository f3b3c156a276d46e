use serde::{Deserialize, Serialize};

use super::kmedoids::{kmedoids, DEFAULT_MAX_SWAPS};
use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;
use crate::model::{embed_frames, VideoSubnet};

/// Frames `[start, end)` of a video.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub index: usize,
    pub start: usize,
    pub end: usize,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

/// A segment together with its point in the semantic space.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentFeature {
    pub segment: Segment,
    pub feature: Vec<f64>,
}

/// Back-to-back segments of exactly `seg_len` frames. Trailing frames that do
/// not fill a whole segment are dropped.
pub fn uniform_segments(n_frames: usize, seg_len: usize) -> Result<Vec<Segment>> {
    if seg_len == 0 {
        return Err(Error::domain("segment length must be at least 1"));
    }
    Ok((0..n_frames / seg_len)
        .map(|index| Segment {
            index,
            start: index * seg_len,
            end: (index + 1) * seg_len,
        })
        .collect())
}

/// Mean-pooled embedding of each segment, in segment order.
pub fn segment_features(
    net: &VideoSubnet,
    frames: &FeatureMatrix,
    segments: &[Segment],
) -> Result<Vec<SegmentFeature>> {
    segments
        .iter()
        .map(|&segment| {
            if segment.is_empty() || segment.end > frames.rows() {
                return Err(Error::validation(format!(
                    "segment {} [{}, {}) outside the {} available frames",
                    segment.index,
                    segment.start,
                    segment.end,
                    frames.rows()
                )));
            }
            let block = frames.slice_rows(segment.start, segment.end)?;
            Ok(SegmentFeature {
                segment,
                feature: embed_frames(net, &block)?,
            })
        })
        .collect()
}

/// Picks `k` medoid segments and returns them in temporal order.
pub fn generate_summary(segfeats: &[SegmentFeature], k: usize) -> Result<Vec<Segment>> {
    let points: Vec<&[f64]> = segfeats.iter().map(|s| s.feature.as_slice()).collect();
    let clustering = kmedoids(&points, k, DEFAULT_MAX_SWAPS)?;
    let mut chosen: Vec<Segment> = clustering
        .medoids
        .iter()
        .map(|&m| segfeats[m].segment)
        .collect();
    chosen.sort_by_key(|s| (s.start, s.index));
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::model::SubnetDims;

    #[test]
    fn uniform_layout() {
        let s = uniform_segments(10, 5).unwrap();
        assert_eq!(
            s.iter().map(|s| (s.start, s.end)).collect::<Vec<_>>(),
            vec![(0, 5), (5, 10)]
        );
        assert!(uniform_segments(0, 3).unwrap().is_empty());
        let s = uniform_segments(11, 5).unwrap();
        assert_eq!(s.len(), 11 / 5);
        assert_eq!(s.last().unwrap().end, 10);
        assert!(matches!(uniform_segments(4, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn features_follow_embed_frames() {
        let dims = SubnetDims::new(3, 4, 2);
        let frames = Matrix::from_fn(8, 3, |r, c| ((r % 4) * 3 + c) as f64 * 0.1);
        let segs = uniform_segments(8, 4).unwrap();

        let zero = VideoSubnet::zeros(dims).unwrap();
        let f = segment_features(&zero, &frames, &segs).unwrap();
        assert!(f.iter().all(|s| s.feature == vec![0.0, 0.0]));

        let net = VideoSubnet::init(2, dims).unwrap();
        let f = segment_features(&net, &frames, &segs).unwrap();
        assert_eq!(f[0].feature, f[1].feature);
        assert_eq!(
            f[0].feature,
            embed_frames(&net, &frames.slice_rows(0, 4).unwrap()).unwrap()
        );

        let whole = [Segment {
            index: 0,
            start: 0,
            end: 8,
        }];
        let f = segment_features(&net, &frames, &whole).unwrap();
        assert_eq!(f[0].feature, embed_frames(&net, &frames).unwrap());

        let bad = [Segment {
            index: 0,
            start: 4,
            end: 9,
        }];
        assert!(matches!(
            segment_features(&net, &frames, &bad),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn summary_edge_cases() {
        let feats: Vec<SegmentFeature> = uniform_segments(12, 3)
            .unwrap()
            .into_iter()
            .map(|segment| SegmentFeature {
                feature: vec![segment.index as f64 * 10.0],
                segment,
            })
            .collect();
        let all = generate_summary(&feats, 4).unwrap();
        assert_eq!(all, feats.iter().map(|f| f.segment).collect::<Vec<_>>());
        assert_eq!(generate_summary(&feats, 1).unwrap().len(), 1);
        assert!(generate_summary(&feats, 5).is_err());
    }
}
