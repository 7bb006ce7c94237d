use crate::error::{Error, Result};

/// Tunables of the detection chain. Defaults are the operating points the
/// method was designed around; [`PipelineParams::calibrated`] adapts the
/// smoothing span to the desk-scale sample-rate/bitrate ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineParams {
    /// Moving-average span for fast-variation removal, samples.
    pub smooth_window: usize,
    /// Slope-interval coefficient `w`.
    pub w_coeff: f64,
    /// Movement-state slope threshold, dB.
    pub slope_threshold_db: f64,
    /// Minimum stable-state mean difference caused by a real movement, dB.
    pub state_diff_threshold_db: f64,
    /// Fast/slow segment discrimination threshold, dB.
    pub variance_threshold_db: f64,
    /// On-body authentication threshold on segment mean difference, dB.
    pub auth_threshold_db: f64,
    /// Sub-threshold intervals required ahead of a value before its run
    /// counts as stable.
    pub min_stable_intervals: usize,
    /// Non-overlapping window of the main-path trace, samples.
    pub trace_window: usize,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            smooth_window: 50,
            w_coeff: 1.2,
            slope_threshold_db: 10.0,
            state_diff_threshold_db: 4.0,
            variance_threshold_db: 2.5,
            auth_threshold_db: 4.5,
            min_stable_intervals: 3,
            trace_window: 6,
        }
    }
}

impl PipelineParams {
    /// Desk-scale operating point: at 10 samples per bit the default
    /// 50-sample smoother would span five bit intervals and erase the
    /// reflection square wave, so the span drops to half a bit. All
    /// thresholds keep their default values.
    pub fn calibrated() -> Self {
        Self {
            smooth_window: 5,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.smooth_window < 2 {
            return Err(Error::invalid_config("smooth_window must be >= 2"));
        }
        if self.min_stable_intervals < 1 {
            return Err(Error::invalid_config("min_stable_intervals must be >= 1"));
        }
        if self.trace_window < 1 {
            return Err(Error::invalid_config("trace_window must be >= 1"));
        }
        for (name, v) in [
            ("w_coeff", self.w_coeff),
            ("slope_threshold_db", self.slope_threshold_db),
            ("state_diff_threshold_db", self.state_diff_threshold_db),
            ("variance_threshold_db", self.variance_threshold_db),
            ("auth_threshold_db", self.auth_threshold_db),
        ] {
            if !(v > 0.0) {
                return Err(Error::invalid_config(format!("{name} must be > 0")));
            }
        }
        Ok(())
    }

    /// Slope interval N in trace coordinates:
    /// round(w * sample_rate / bitrate / trace_window), at least 1.
    pub fn slope_interval(&self, sample_rate_hz: u32, bitrate_bps: u32) -> Result<usize> {
        self.validate()?;
        let n = (self.w_coeff * sample_rate_hz as f64
            / bitrate_bps as f64
            / self.trace_window as f64)
            .round() as i64;
        if n < 1 {
            return Err(Error::invalid_config(format!(
                "slope interval rounds to {n}; lower trace_window or raise w_coeff"
            )));
        }
        Ok(n as usize)
    }
}
