//! RSS sample series and ground-truth labeling.
//!
//! A [`SampleSeries`] is the universal currency between the synthesizer and
//! the detection pipeline: uniformly sampled received signal strength in dB
//! with sample-rate metadata. A [`LabeledSeries`] pairs it with per-sample
//! ground truth so the harness can score verdicts.

use crate::error::{Error, Result};
use crate::scenario::ScenarioSpec;

/// Uniformly sampled RSS values in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSeries {
    /// Sampling rate in Hz.
    pub sample_rate_hz: u32,
    /// RSS samples in dB. Non-empty and finite for all pipeline inputs.
    pub samples: Vec<f64>,
    /// Time offset of the first sample, in seconds.
    pub start_time_s: f64,
}

impl SampleSeries {
    pub fn new(sample_rate_hz: u32, samples: Vec<f64>) -> Result<Self> {
        let s = Self {
            sample_rate_hz,
            samples,
            start_time_s: 0.0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_rate_hz == 0 {
            return Err(Error::invalid_config("sample_rate_hz must be positive"));
        }
        if self.samples.is_empty() {
            return Err(Error::invalid_config("series must be non-empty"));
        }
        if let Some(i) = self.samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid_config(format!(
                "non-finite sample at index {i}"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration covered by the samples, in seconds.
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz as f64
    }
}

/// Which emitter produced the backscatter content of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceLabel {
    /// Only the transmitter-to-receiver path is present.
    MainOnly,
    /// The genuine on-body tag is reflecting during this sample.
    GenuineReflect,
    /// An attacker emission is present during this sample.
    AttackerReflect,
}

/// A sample series plus per-sample ground truth for scoring.
#[derive(Debug, Clone)]
pub struct LabeledSeries {
    pub series: SampleSeries,
    /// One label per sample.
    pub source_labels: Vec<SourceLabel>,
    /// Transmitter-movement intervals as `[start, end)` sample ranges.
    pub movement_intervals: Vec<(usize, usize)>,
    /// The scenario that produced this series.
    pub scenario: ScenarioSpec,
}

impl LabeledSeries {
    pub fn validate(&self) -> Result<()> {
        self.series.validate()?;
        if self.source_labels.len() != self.series.len() {
            return Err(Error::invalid_config(format!(
                "label count {} != sample count {}",
                self.source_labels.len(),
                self.series.len()
            )));
        }
        for &(a, b) in &self.movement_intervals {
            if a >= b || b > self.series.len() {
                return Err(Error::invalid_config(format!(
                    "movement interval ({a},{b}) out of bounds"
                )));
            }
        }
        Ok(())
    }

    /// True transmitted bit for each bit interval, or `None` where the
    /// interval is not fully covered by one label.
    pub fn truth_bits(&self, samples_per_bit: usize) -> Vec<Option<bool>> {
        let n = self.series.len() / samples_per_bit;
        (0..n)
            .map(|k| {
                let s = &self.source_labels[k * samples_per_bit..(k + 1) * samples_per_bit];
                if s.iter().all(|&l| l == SourceLabel::MainOnly) {
                    Some(false)
                } else if s.iter().all(|&l| l != SourceLabel::MainOnly) {
                    Some(true)
                } else {
                    None
                }
            })
            .collect()
    }
}
