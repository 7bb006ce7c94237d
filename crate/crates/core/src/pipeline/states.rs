//! Movement-state determination over the slope series, and selection of
//! the state triples caused by real transmitter movements.

use crate::error::Result;
use crate::pipeline::trace::{MainPathTrace, SlopeSeries};
use crate::pipeline::PipelineParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Stable,
    Varying,
}

/// One contiguous state of the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateMark {
    pub kind: StateKind,
    /// `[start, end)` in trace coordinates (slope-window start indices; the
    /// final mark absorbs the 2N trace tail the slope series cannot see).
    pub interval: (usize, usize),
    /// Mean trace level over the interval, dB.
    pub mean_db: f64,
}

/// Scan the slope series into stable and varying marks.
///
/// A sub-threshold value only counts as stable once at least
/// `min_stable_intervals` sub-threshold values sit directly in front of it;
/// the qualifying value then marks those predecessors stable as well. The
/// effect is that brief sub-threshold dips inside a movement stay part of
/// the varying state, while every sub-threshold run longer than the guard
/// becomes stable in full. Marks tile the trace.
pub fn detect_states(
    slope: &SlopeSeries,
    trace: &MainPathTrace,
    params: &PipelineParams,
) -> Result<Vec<StateMark>> {
    params.validate()?;
    let wmd = &slope.window_mean_diff;
    debug_assert!(!wmd.is_empty());
    let min_run = params.min_stable_intervals + 1;

    // Classify each slope index, then fuse runs.
    let mut stable = vec![false; wmd.len()];
    let mut run = 0usize;
    for (i, &v) in wmd.iter().enumerate() {
        if v < params.slope_threshold_db {
            run += 1;
            if run == min_run {
                for s in stable.iter_mut().take(i + 1).skip(i + 1 - min_run) {
                    *s = true;
                }
            } else if run > min_run {
                stable[i] = true;
            }
        } else {
            run = 0;
        }
    }

    let mut marks = Vec::new();
    let mut start = 0usize;
    for i in 1..=stable.len() {
        if i == stable.len() || stable[i] != stable[start] {
            marks.push((stable[start], start, i));
            start = i;
        }
    }
    // The slope series ends 2N trace points before the trace does; the last
    // mark absorbs the tail so the marks tile the whole trace.
    let trace_len = trace.values.len();
    let mut out = Vec::with_capacity(marks.len());
    for (idx, (is_stable, a, b)) in marks.iter().copied().enumerate() {
        let end = if idx == marks.len() - 1 { trace_len } else { b };
        let vals = &trace.values[a..end.min(trace_len)];
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        out.push(StateMark {
            kind: if is_stable {
                StateKind::Stable
            } else {
                StateKind::Varying
            },
            interval: (a, end),
            mean_db: mean,
        });
    }
    Ok(out)
}

/// A (pre-stable, varying, post-stable) movement candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovementTriple {
    pub pre: StateMark,
    pub varying: StateMark,
    pub post: StateMark,
}

/// Keep the consecutive (Stable, Varying, Stable) triples whose stable
/// means differ by more than the state threshold; anything smaller is a
/// dynamic-channel effect and is discarded.
pub fn select_movement_states(
    states: &[StateMark],
    params: &PipelineParams,
) -> Vec<MovementTriple> {
    let mut out = Vec::new();
    for w in states.windows(3) {
        let (pre, varying, post) = (w[0], w[1], w[2]);
        if pre.kind == StateKind::Stable
            && varying.kind == StateKind::Varying
            && post.kind == StateKind::Stable
            && (pre.mean_db - post.mean_db).abs() > params.state_diff_threshold_db
        {
            out.push(MovementTriple { pre, varying, post });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::trace::slopes;

    fn trace_of(values: Vec<f64>) -> MainPathTrace {
        MainPathTrace {
            values,
            detection_values: None,
            window: 6,
        }
    }

    fn params() -> PipelineParams {
        PipelineParams::default()
    }

    #[test]
    fn all_quiet_series_is_one_stable_mark() {
        let t = trace_of(vec![-60.0; 50]);
        let s = slopes(&t, 2).unwrap();
        let marks = detect_states(&s, &t, &params()).unwrap();
        assert_eq!(marks.len(), 1);
        assert_eq!(marks[0].kind, StateKind::Stable);
        assert_eq!(marks[0].interval, (0, 50));
        assert!((marks[0].mean_db - (-60.0)).abs() < 1e-12);
    }

    #[test]
    fn single_burst_yields_stable_varying_stable() {
        // 14 dB step in the middle of an otherwise flat trace.
        let mut v = vec![-60.0; 25];
        v.extend(vec![-46.0; 25]);
        let t = trace_of(v);
        let s = slopes(&t, 2).unwrap();
        let marks = detect_states(&s, &t, &params()).unwrap();
        let kinds: Vec<StateKind> = marks.iter().map(|m| m.kind).collect();
        assert_eq!(
            kinds,
            vec![StateKind::Stable, StateKind::Varying, StateKind::Stable],
            "marks: {marks:?}"
        );
        assert_eq!(marks.last().unwrap().interval.1, 50);
        // Intervals tile without overlap.
        let mut cursor = 0;
        for m in &marks {
            assert_eq!(m.interval.0, cursor);
            cursor = m.interval.1;
        }
        assert_eq!(cursor, 50);
    }

    #[test]
    fn matches_brute_force_scan_on_random_series() {
        use crate::rng::stream_rng;
        use rand::Rng;
        let p = params();
        let mut rng = stream_rng(777, 0);
        for _ in 0..200 {
            let len = rng.random_range(12..120usize);
            let values: Vec<f64> = (0..len)
                .map(|_| {
                    if rng.random::<f64>() < 0.3 {
                        rng.random_range(-90.0..-20.0)
                    } else {
                        -60.0
                    }
                })
                .collect();
            let t = trace_of(values);
            let n_int = rng.random_range(1..4usize);
            if t.values.len() < 2 * n_int + 1 {
                continue;
            }
            let s = slopes(&t, n_int).unwrap();
            let got = detect_states(&s, &t, &p).unwrap();

            // Reference: mark every index stable iff it belongs to a
            // maximal sub-threshold run of length > min_stable_intervals.
            let wmd = &s.window_mean_diff;
            let mut stable_ref = vec![false; wmd.len()];
            let mut i = 0;
            while i < wmd.len() {
                if wmd[i] < p.slope_threshold_db {
                    let mut j = i;
                    while j < wmd.len() && wmd[j] < p.slope_threshold_db {
                        j += 1;
                    }
                    if j - i >= p.min_stable_intervals + 1 {
                        for s in stable_ref.iter_mut().take(j).skip(i) {
                            *s = true;
                        }
                    }
                    i = j;
                } else {
                    i += 1;
                }
            }
            let mut got_flags = vec![false; wmd.len()];
            for m in &got {
                for k in m.interval.0..m.interval.1.min(wmd.len()) {
                    got_flags[k] = m.kind == StateKind::Stable;
                }
            }
            assert_eq!(got_flags, stable_ref);
        }
    }

    #[test]
    fn triples_filtered_by_mean_difference() {
        let mk = |kind, a, b, mean| StateMark {
            kind,
            interval: (a, b),
            mean_db: mean,
        };
        let p = params();
        // 6 dB apart: kept.
        let states = vec![
            mk(StateKind::Stable, 0, 10, -60.0),
            mk(StateKind::Varying, 10, 12, -57.0),
            mk(StateKind::Stable, 12, 22, -54.0),
        ];
        assert_eq!(select_movement_states(&states, &p).len(), 1);
        // 2 dB apart: discarded as a dynamic effect.
        let states = vec![
            mk(StateKind::Stable, 0, 10, -60.0),
            mk(StateKind::Varying, 10, 12, -59.0),
            mk(StateKind::Stable, 12, 22, -58.0),
        ];
        assert!(select_movement_states(&states, &p).is_empty());
        // No varying mark at all: empty.
        let states = vec![mk(StateKind::Stable, 0, 22, -60.0)];
        assert!(select_movement_states(&states, &p).is_empty());
    }
}
