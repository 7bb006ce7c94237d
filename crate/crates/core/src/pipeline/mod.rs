//! The authentication pipeline: smoothing, backscatter/trace extraction,
//! movement-state determination, segmentation, and the attacker defenses.

pub mod backscatter;
pub mod params;
pub mod segments;
pub mod smooth;
pub mod states;
pub mod trace;
pub mod verdict;

pub use backscatter::{extract_backscatter, BackscatterStream, BitGrid};
pub use params::PipelineParams;
pub use segments::{segment_and_group, segment_variance, SegmentGroup};
pub use smooth::{smooth, SmoothedSeries};
pub use states::{detect_states, select_movement_states, MovementTriple, StateKind, StateMark};
pub use trace::{extract_trace, slopes, MainPathTrace, SlopeSeries};
pub use verdict::{
    authenticate_group, classify_powerful, majority_vote, FinalVerdict, GroupVerdict,
    SegmentSpeed, Verdict,
};

use crate::error::{Error, Result};
use crate::scenario::TrafficModel;
use crate::series::SampleSeries;
use crate::synth::packet_gating;

/// What the pipeline needs to know about the link it is authenticating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuthConfig {
    pub bitrate_bps: u32,
    pub traffic: TrafficModel,
}

impl AuthConfig {
    pub fn continuous(bitrate_bps: u32) -> Self {
        Self {
            bitrate_bps,
            traffic: TrafficModel::Continuous,
        }
    }
}

/// Full result of one authentication run.
#[derive(Debug, Clone)]
pub struct AuthOutcome {
    pub verdict: Verdict,
    pub groups: Vec<SegmentGroup>,
    /// Detected movement spans in sample coordinates of the analyzed
    /// (traffic-compacted) series.
    pub detected_movements: Vec<(usize, usize)>,
    pub stream: Option<BackscatterStream>,
    pub diagnostics: Vec<String>,
}

impl AuthOutcome {
    fn inconclusive(diagnostics: Vec<String>) -> Self {
        Self {
            verdict: majority_vote(&[]),
            groups: Vec::new(),
            detected_movements: Vec::new(),
            stream: None,
            diagnostics,
        }
    }
}

/// Remove carrier-off gaps of packetized traffic. Returns the compacted
/// samples plus the bit grid of fully-on bit intervals in compact
/// coordinates.
fn compact_for_traffic(
    series: &SampleSeries,
    cfg: &AuthConfig,
    params: &PipelineParams,
) -> Result<(Vec<f64>, BitGrid)> {
    let spb = (series.sample_rate_hz / cfg.bitrate_bps) as usize;
    if spb < 10 {
        return Err(Error::invalid_config(format!(
            "sample_rate/bitrate gives {spb} samples per bit; need at least 10"
        )));
    }
    match cfg.traffic {
        TrafficModel::Continuous => Ok((
            series.samples.clone(),
            BitGrid::continuous(series.len(), spb, params.smooth_window),
        )),
        TrafficModel::Packets {
            rate_pkt_s,
            packet_duration_s,
        } => {
            let mask = packet_gating(rate_pkt_s, packet_duration_s, series.len(), series.sample_rate_hz)?;
            let mut compact = Vec::with_capacity(series.len());
            // Compact position of each original sample.
            let mut pos = vec![usize::MAX; series.len()];
            for (i, &v) in series.samples.iter().enumerate() {
                if mask[i] {
                    pos[i] = compact.len();
                    compact.push(v);
                }
            }
            let mut intervals = Vec::new();
            let n_bits = series.len() / spb;
            for k in 0..n_bits {
                let (a, b) = (k * spb, (k + 1) * spb);
                if mask[a..b].iter().all(|&m| m) {
                    intervals.push((pos[a], pos[b - 1] + 1));
                }
            }
            Ok((
                compact,
                BitGrid {
                    intervals,
                    edge_trim: BitGrid::trim_for(spb, params.smooth_window),
                },
            ))
        }
    }
}

/// Run the full authentication chain over a series.
///
/// Failure to expose a backscatter boundary or to detect any movement
/// yields an inconclusive verdict with a diagnostic rather than an error;
/// structurally unusable inputs (too short, bad configuration) error out.
pub fn authenticate(
    series: &SampleSeries,
    cfg: &AuthConfig,
    params: &PipelineParams,
) -> Result<AuthOutcome> {
    series.validate()?;
    params.validate()?;
    let n_int = params.slope_interval(series.sample_rate_hz, cfg.bitrate_bps)?;

    let (compact, grid) = compact_for_traffic(series, cfg, params)?;
    let compact_series = SampleSeries {
        sample_rate_hz: series.sample_rate_hz,
        samples: compact,
        start_time_s: series.start_time_s,
    };
    let smoothed = smooth(&compact_series, params)?;

    let mut diagnostics = Vec::new();
    let (stream, residual) = match extract_backscatter(&smoothed, &grid) {
        Ok(v) => v,
        Err(Error::NoBackscatterDetected(msg)) => {
            diagnostics.push(format!("no backscatter detected: {msg}"));
            return Ok(AuthOutcome::inconclusive(diagnostics));
        }
        Err(e) => return Err(e),
    };

    let mut trace = extract_trace(&residual, params.trace_window)?;
    if let Some(det) = &smoothed.detection {
        // Reapply the reflection subtraction to the drift-screened track.
        let delta: Vec<f64> = smoothed
            .samples
            .iter()
            .zip(&residual)
            .map(|(s, r)| s - r)
            .collect();
        let det_residual: Vec<f64> = det.iter().zip(&delta).map(|(d, x)| d - x).collect();
        trace.detection_values = Some(extract_trace(&det_residual, params.trace_window)?.values);
    }

    let slope = slopes(&trace, n_int)?;
    let marks = detect_states(&slope, &trace, params)?;
    let triples = select_movement_states(&marks, params);
    if triples.is_empty() {
        diagnostics.push("no movement-induced state triples detected".into());
        return Ok(AuthOutcome::inconclusive(diagnostics));
    }

    let groups = segment_and_group(&stream, &triples, params.trace_window, n_int, &mut diagnostics);
    let detected_movements = groups.iter().map(|g| g.movement_samples).collect();
    let per_group: Vec<GroupVerdict> = groups
        .iter()
        .map(|g| authenticate_group(g, params))
        .collect();
    Ok(AuthOutcome {
        verdict: majority_vote(&per_group),
        groups,
        detected_movements,
        stream: Some(stream),
        diagnostics,
    })
}
