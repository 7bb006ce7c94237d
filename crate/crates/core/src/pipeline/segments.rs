//! Segmentation of the backscatter stream into per-movement groups.

use crate::error::{Error, Result};
use crate::pipeline::backscatter::BackscatterStream;
use crate::pipeline::states::MovementTriple;

/// The two stable backscatter segments flanking one transmitter movement.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentGroup {
    /// Bit-interval index range `[start, end)` of the pre-movement segment.
    pub pre_bits: (usize, usize),
    /// Bit-interval index range of the post-movement segment.
    pub post_bits: (usize, usize),
    /// Movement span in sample coordinates, centered on the slope windows.
    pub movement_samples: (usize, usize),
    pub pre_mean_db: f64,
    pub post_mean_db: f64,
    /// Raw reflection-power variance of each segment, dB^2.
    pub pre_var: f64,
    pub post_var: f64,
    /// Min-max normalized variance across the run's segments (reporting).
    pub pre_var_norm: f64,
    pub post_var_norm: f64,
}

/// Raw variance of a segment per the magnitude form:
/// sum((|x| - mean|x|)^2) / N.
pub fn segment_variance(segment: &[f64]) -> Result<f64> {
    if segment.len() < 2 {
        return Err(Error::invalid_argument(format!(
            "segment variance needs at least 2 values, got {}",
            segment.len()
        )));
    }
    let n = segment.len() as f64;
    let mean = segment.iter().map(|v| v.abs()).sum::<f64>() / n;
    Ok(segment.iter().map(|v| (v.abs() - mean).powi(2)).sum::<f64>() / n)
}

fn segment_mean(segment: &[f64]) -> f64 {
    segment.iter().sum::<f64>() / segment.len() as f64
}

/// Bit intervals of the stream fully inside the sample range `[s0, s1)`.
fn bits_within(stream: &BackscatterStream, s0: usize, s1: usize) -> (usize, usize) {
    let b = &stream.bit_boundaries;
    let n_bits = b.len() - 1;
    let start = b.partition_point(|&x| x < s0).min(n_bits);
    let mut end = start;
    while end < n_bits && b[end + 1] <= s1 {
        end += 1;
    }
    (start, end)
}

/// Cluster each movement triple into a [`SegmentGroup`]: the reflection
/// power of the bits inside the two stable trace intervals, with the
/// movement span excluded from both. Stable intervals that contain no full
/// bit interval skip the group and leave a diagnostic.
pub fn segment_and_group(
    stream: &BackscatterStream,
    triples: &[MovementTriple],
    trace_window: usize,
    slope_interval: usize,
    diagnostics: &mut Vec<String>,
) -> Vec<SegmentGroup> {
    let mut groups = Vec::with_capacity(triples.len());
    for (i, t) in triples.iter().enumerate() {
        let pre = bits_within(
            stream,
            t.pre.interval.0 * trace_window,
            t.pre.interval.1 * trace_window,
        );
        let post = bits_within(
            stream,
            t.post.interval.0 * trace_window,
            t.post.interval.1 * trace_window,
        );
        if pre.1 - pre.0 < 2 || post.1 - post.0 < 2 {
            diagnostics.push(format!(
                "group {i}: a stable interval holds fewer than 2 bit intervals; skipped"
            ));
            continue;
        }
        let pre_vals = &stream.reflection_power[pre.0..pre.1];
        let post_vals = &stream.reflection_power[post.0..post.1];
        // Movement interval reported at the center of the slope windows.
        let center = |idx: usize| (idx + slope_interval) * trace_window;
        groups.push(SegmentGroup {
            pre_bits: pre,
            post_bits: post,
            movement_samples: (center(t.varying.interval.0), center(t.varying.interval.1)),
            pre_mean_db: segment_mean(pre_vals),
            post_mean_db: segment_mean(post_vals),
            pre_var: segment_variance(pre_vals).expect("len checked"),
            post_var: segment_variance(post_vals).expect("len checked"),
            pre_var_norm: 0.0,
            post_var_norm: 0.0,
        });
    }
    normalize_variances(&mut groups);
    groups
}

/// Min-max normalization of segment variances across the run.
fn normalize_variances(groups: &mut [SegmentGroup]) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for g in groups.iter() {
        for v in [g.pre_var, g.post_var] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let span = hi - lo;
    for g in groups.iter_mut() {
        if span > 0.0 {
            g.pre_var_norm = (g.pre_var - lo) / span;
            g.post_var_norm = (g.post_var - lo) / span;
        } else {
            g.pre_var_norm = 0.0;
            g.post_var_norm = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::states::{StateKind, StateMark};

    #[test]
    fn constant_segment_has_zero_variance() {
        assert_eq!(segment_variance(&[3.0; 10]).unwrap(), 0.0);
    }

    #[test]
    fn alternating_unit_segment_has_unit_variance() {
        let seg: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 4.0 } else { 2.0 }).collect();
        assert!((segment_variance(&seg).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn variance_matches_naive_two_pass_oracle() {
        use crate::rng::stream_rng;
        use rand::Rng;
        let mut rng = stream_rng(55, 0);
        for _ in 0..200 {
            let len = rng.random_range(2..500usize);
            let seg: Vec<f64> = (0..len).map(|_| rng.random_range(-10.0..10.0)).collect();
            let got = segment_variance(&seg).unwrap();
            // Oracle: independent two-pass computation.
            let n = seg.len() as f64;
            let mean = seg.iter().map(|v| v.abs()).sum::<f64>() / n;
            let expected: f64 =
                seg.iter().map(|v| (v.abs() - mean) * (v.abs() - mean)).sum::<f64>() / n;
            let denom = expected.abs().max(1e-300);
            assert!(
                ((got - expected) / denom).abs() <= 1e-12,
                "variance mismatch: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn variance_requires_two_values() {
        assert!(segment_variance(&[1.0]).is_err());
    }

    fn stream_with_boundaries(n_bits: usize, spb: usize, power: f64) -> BackscatterStream {
        BackscatterStream {
            reflection_power: vec![power; n_bits],
            decoded_bits: vec![true; n_bits],
            bit_boundaries: (0..=n_bits).map(|k| k * spb).collect(),
            separable: vec![true; n_bits],
        }
    }

    fn triple(pre: (usize, usize), var: (usize, usize), post: (usize, usize)) -> MovementTriple {
        let mk = |kind, interval| StateMark {
            kind,
            interval,
            mean_db: 0.0,
        };
        MovementTriple {
            pre: mk(StateKind::Stable, pre),
            varying: mk(StateKind::Varying, var),
            post: mk(StateKind::Stable, post),
        }
    }

    #[test]
    fn one_triple_yields_one_group_over_stable_bits() {
        let stream = stream_with_boundaries(100, 10, 3.0);
        let mut diags = Vec::new();
        // Trace window 6: pre covers samples [0, 300), post [420, 960).
        let groups = segment_and_group(
            &stream,
            &[triple((0, 50), (50, 70), (70, 160))],
            6,
            2,
            &mut diags,
        );
        assert_eq!(groups.len(), 1);
        assert!(diags.is_empty());
        let g = &groups[0];
        assert_eq!(g.pre_bits, (0, 30));
        assert_eq!(g.post_bits, (42, 96));
        assert_eq!(g.pre_mean_db, 3.0);
        assert_eq!(g.post_mean_db, 3.0);
        assert_eq!(g.pre_var, 0.0);
        assert_eq!(g.movement_samples, ((50 + 2) * 6, (70 + 2) * 6));
    }

    #[test]
    fn groups_preserve_triple_order() {
        let stream = stream_with_boundaries(300, 10, 2.0);
        let mut diags = Vec::new();
        let triples = vec![
            triple((0, 40), (40, 44), (44, 90)),
            triple((44, 90), (90, 94), (94, 140)),
            triple((94, 140), (140, 144), (144, 200)),
        ];
        let groups = segment_and_group(&stream, &triples, 6, 2, &mut diags);
        assert_eq!(groups.len(), 3);
        assert!(groups.windows(2).all(|w| w[0].pre_bits.0 <= w[1].pre_bits.0));
    }

    #[test]
    fn empty_stable_interval_skips_group_with_diagnostic() {
        let stream = stream_with_boundaries(100, 10, 3.0);
        let mut diags = Vec::new();
        // Pre interval covers less than one bit interval (6 samples).
        let groups = segment_and_group(
            &stream,
            &[triple((0, 1), (1, 3), (3, 60))],
            6,
            2,
            &mut diags,
        );
        assert!(groups.is_empty());
        assert_eq!(diags.len(), 1);
    }
}
