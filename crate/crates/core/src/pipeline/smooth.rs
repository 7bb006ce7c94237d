//! Data smoothing: drift screening plus fast-variation removal.

use crate::error::{Error, Result};
use crate::pipeline::PipelineParams;
use crate::series::SampleSeries;

/// How fast the level must drift before the low-frequency screen engages,
/// dB per second.
pub const DRIFT_TRIGGER_DB_PER_S: f64 = 0.5;

/// Drift-screen window as a multiple of the smoothing window.
pub const DRIFT_WINDOW_FACTOR: usize = 50;

/// Smoothed series. `samples` is the moving-average output whose levels all
/// differential comparisons run on; `detection` additionally has the slow
/// circuit-drift component screened out and feeds movement detection. The
/// two coincide unless the series actually drifts, so segment-mean tests
/// keep their physical meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedSeries {
    pub sample_rate_hz: u32,
    pub samples: Vec<f64>,
    pub detection: Option<Vec<f64>>,
}

impl SmoothedSeries {
    pub fn detection_samples(&self) -> &[f64] {
        self.detection.as_deref().unwrap_or(&self.samples)
    }
}

/// Centered moving average with shrunken windows at the edges; output
/// length equals input length.
pub fn moving_average(samples: &[f64], window: usize) -> Vec<f64> {
    let w = window.max(1);
    let n = samples.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &v in samples {
        acc += v;
        prefix.push(acc);
    }
    let left = w / 2;
    let right = w - 1 - left;
    (0..n)
        .map(|i| {
            let a = i.saturating_sub(left);
            let b = (i + right + 1).min(n);
            (prefix[b] - prefix[a]) / (b - a) as f64
        })
        .collect()
}

/// Least-squares level drift of the series: (dB per second, fit R^2).
///
/// Movement staircases also have a nonzero net slope, so the rate alone
/// cannot identify circuit drift; only a series a line actually explains
/// counts as drifting.
fn drift_fit(samples: &[f64], sample_rate_hz: u32) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean_t = (n - 1.0) / 2.0;
    let mean_v = samples.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (i, &v) in samples.iter().enumerate() {
        let dt = i as f64 - mean_t;
        sxy += dt * (v - mean_v);
        sxx += dt * dt;
        syy += (v - mean_v) * (v - mean_v);
    }
    if sxx == 0.0 || syy == 0.0 {
        return (0.0, 0.0);
    }
    let slope = sxy / sxx;
    let r2 = (sxy * sxy) / (sxx * syy);
    (slope * sample_rate_hz as f64, r2)
}

/// Linear-fit quality required before a sloped series counts as drift.
const DRIFT_MIN_R2: f64 = 0.9;

/// Smooth a series: screen out circuit drift when present, then remove the
/// fast-varying component with a centered moving average.
pub fn smooth(series: &SampleSeries, params: &PipelineParams) -> Result<SmoothedSeries> {
    params.validate()?;
    series.validate()?;
    if series.len() < params.smooth_window {
        return Err(Error::SeriesTooShort {
            need: params.smooth_window,
            got: series.len(),
        });
    }
    let samples = moving_average(&series.samples, params.smooth_window);
    let (rate, r2) = drift_fit(&series.samples, series.sample_rate_hz);
    let detection = if rate.abs() > DRIFT_TRIGGER_DB_PER_S && r2 > DRIFT_MIN_R2 {
        let window = (DRIFT_WINDOW_FACTOR * params.smooth_window)
            .max(series.sample_rate_hz as usize / 2)
            .min(series.len());
        let long = moving_average(&series.samples, window);
        Some(
            samples
                .iter()
                .zip(&long)
                .map(|(s, l)| s - l)
                .collect::<Vec<f64>>(),
        )
    } else {
        None
    };
    Ok(SmoothedSeries {
        sample_rate_hz: series.sample_rate_hz,
        samples,
        detection,
    })
}
