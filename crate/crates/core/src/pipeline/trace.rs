//! Main-path trace extraction and the normalized slope series.

use crate::error::{Error, Result};

/// Windowed-average RSS of the residual main path.
#[derive(Debug, Clone, PartialEq)]
pub struct MainPathTrace {
    /// One mean per non-overlapping window (last window may be partial).
    pub values: Vec<f64>,
    /// Same windows over the drift-screened residual, when the screen was
    /// engaged. Movement detection runs on these; means always come from
    /// `values`.
    pub detection_values: Option<Vec<f64>>,
    /// Window length, samples.
    pub window: usize,
}

impl MainPathTrace {
    pub fn detection(&self) -> &[f64] {
        self.detection_values.as_deref().unwrap_or(&self.values)
    }
}

/// Non-overlapping window means of the residual.
pub fn extract_trace(residual: &[f64], trace_window: usize) -> Result<MainPathTrace> {
    if trace_window == 0 {
        return Err(Error::invalid_config("trace_window must be >= 1"));
    }
    if residual.len() < trace_window {
        return Err(Error::SeriesTooShort {
            need: trace_window,
            got: residual.len(),
        });
    }
    let values = window_means(residual, trace_window);
    Ok(MainPathTrace {
        values,
        detection_values: None,
        window: trace_window,
    })
}

pub(crate) fn window_means(samples: &[f64], window: usize) -> Vec<f64> {
    samples
        .chunks(window)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect()
}

/// Normalized slope of the trace plus the physical quantities behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeSeries {
    /// |sum(x[n+N..=n+2N]) - sum(x[n..=n+N])| / N^2 over |x|.
    pub raw: Vec<f64>,
    /// raw * N: the difference of the two N-wide window means, dB. The
    /// movement-state threshold compares against this.
    pub window_mean_diff: Vec<f64>,
    /// Min-max normalized `raw`, for reporting.
    pub normalized: Vec<f64>,
    /// Slope interval N, trace points.
    pub interval: usize,
}

/// Slope of the trace at every position, over the detection values.
///
/// Index `n` compares the |x| sums of `[n, n+N]` and `[n+N, n+2N]`
/// (inclusive); with the shared center sample cancelling, `raw * N` is
/// exactly the difference of the two flanking N-point window means.
pub fn slopes(trace: &MainPathTrace, interval: usize) -> Result<SlopeSeries> {
    let x = trace.detection();
    let n_int = interval;
    if n_int == 0 {
        return Err(Error::invalid_config("slope interval must be >= 1"));
    }
    if x.len() < 2 * n_int + 1 {
        return Err(Error::SeriesTooShort {
            need: 2 * n_int + 1,
            got: x.len(),
        });
    }
    let count = x.len() - 2 * n_int;
    let mut raw = Vec::with_capacity(count);
    for n in 0..count {
        let mut first = 0.0;
        for i in n..=n + n_int {
            first += x[i].abs();
        }
        let mut second = 0.0;
        for i in n + n_int..=n + 2 * n_int {
            second += x[i].abs();
        }
        raw.push((second - first).abs() / (n_int * n_int) as f64);
    }
    let (lo, hi) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
            (l.min(v), h.max(v))
        });
    let span = hi - lo;
    let normalized = raw
        .iter()
        .map(|&v| if span > 0.0 { (v - lo) / span } else { 0.0 })
        .collect();
    let window_mean_diff = raw.iter().map(|&v| v * n_int as f64).collect();
    Ok(SlopeSeries {
        raw,
        window_mean_diff,
        normalized,
        interval: n_int,
    })
}
