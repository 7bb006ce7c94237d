//! Backscatter separation: per-bit two-level classification and removal of
//! the reflection contribution from the smoothed data.

use crate::error::{Error, Result};
use crate::pipeline::smooth::SmoothedSeries;

/// Bit intervals available for demodulation, as `[start, end)` sample
/// ranges of the (possibly traffic-compacted) series. Only intervals fully
/// covered by carrier-on samples belong to the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BitGrid {
    pub intervals: Vec<(usize, usize)>,
    /// Samples trimmed from each interval edge when collecting level
    /// statistics, so smoothing smear at bit boundaries stays out of the
    /// clusters.
    pub edge_trim: usize,
}

impl BitGrid {
    /// Grid for continuous traffic: back-to-back intervals of
    /// `samples_per_bit`.
    pub fn continuous(series_len: usize, samples_per_bit: usize, smooth_window: usize) -> Self {
        let n = series_len / samples_per_bit;
        Self {
            intervals: (0..n)
                .map(|k| (k * samples_per_bit, (k + 1) * samples_per_bit))
                .collect(),
            edge_trim: Self::trim_for(samples_per_bit, smooth_window),
        }
    }

    /// Edge trim that removes boundary smear while keeping at least a third
    /// of the interval.
    pub fn trim_for(samples_per_bit: usize, smooth_window: usize) -> usize {
        let trim = smooth_window / 2;
        if 3 * trim * 2 >= 2 * samples_per_bit {
            samples_per_bit / 3
        } else {
            trim
        }
    }

    fn interior(&self, k: usize) -> (usize, usize) {
        let (s0, s1) = self.intervals[k];
        let trim = self.edge_trim.min((s1 - s0).saturating_sub(2) / 2);
        (s0 + trim, s1 - trim)
    }
}

/// Separated backscatter stream: per-interval reflection level estimate,
/// the decoded bit, and the interval boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct BackscatterStream {
    /// Estimated reflected-path contribution per bit interval, dB
    /// (high-level minus low-level of the local two-level fit). Defined for
    /// every interval whether or not the tag reflected during it.
    pub reflection_power: Vec<f64>,
    pub decoded_bits: Vec<bool>,
    /// Start sample of each interval plus the end of the last one;
    /// strictly increasing.
    pub bit_boundaries: Vec<usize>,
    /// Whether the interval's own context exposed both levels; carried
    /// centroids were used where false.
    pub separable: Vec<bool>,
}

/// Bits of context on each side of an interval for the two-level fit.
const CONTEXT_BITS: usize = 8;
/// Required ratio of inter-centroid gap to pooled intra-cluster std.
const SEPARABILITY_RATIO: f64 = 3.0;
/// Fraction of intervals that must expose a separable boundary before the
/// stream counts as backscatter at all.
const MIN_SEPARABLE_FRACTION: f64 = 0.2;
/// Reflection switches at bit boundaries, so a genuine two-level fit
/// assigns nearly all samples of any one interval to the same cluster;
/// sample-level noise splits do not. Minimum within-interval agreement.
const MIN_BIT_ALIGNMENT: f64 = 0.9;
/// A backscatter boundary separates levels that alternate from bit to bit.
/// A transmitter-movement step also yields two clean levels, but with a
/// single low/high transition; such fits must not win.
const MIN_CLUSTER_TRANSITIONS: usize = 2;
/// Numeric floor on cluster spread, dB. Keeps float dust in noiseless data
/// from forming zero-spread "clusters".
const INTRA_STD_FLOOR: f64 = 1e-9;
const KMEANS_MAX_ITERS: usize = 32;

#[derive(Debug, Clone, Copy)]
struct LevelFit {
    lo: f64,
    hi: f64,
    intra_std: f64,
}

/// Two-level (k=2) fit of a 1-D sample collection; `None` when a side ends
/// up empty or the window is degenerate.
fn two_level_fit(values: &[f64]) -> Option<LevelFit> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !(hi > lo) {
        return None;
    }
    let (mut c_lo, mut c_hi) = (lo, hi);
    for _ in 0..KMEANS_MAX_ITERS {
        let mid = 0.5 * (c_lo + c_hi);
        let (mut s_lo, mut n_lo, mut s_hi, mut n_hi) = (0.0, 0usize, 0.0, 0usize);
        for &v in values {
            if v <= mid {
                s_lo += v;
                n_lo += 1;
            } else {
                s_hi += v;
                n_hi += 1;
            }
        }
        if n_lo == 0 || n_hi == 0 {
            return None;
        }
        let new_lo = s_lo / n_lo as f64;
        let new_hi = s_hi / n_hi as f64;
        if new_lo == c_lo && new_hi == c_hi {
            break;
        }
        c_lo = new_lo;
        c_hi = new_hi;
    }
    let mid = 0.5 * (c_lo + c_hi);
    let mut ss = 0.0;
    for &v in values {
        let c = if v <= mid { c_lo } else { c_hi };
        ss += (v - c) * (v - c);
    }
    Some(LevelFit {
        lo: c_lo,
        hi: c_hi,
        intra_std: (ss / values.len() as f64).sqrt(),
    })
}

fn separable(fit: &LevelFit) -> bool {
    fit.hi - fit.lo > SEPARABILITY_RATIO * fit.intra_std.max(INTRA_STD_FLOOR)
}

/// Gap-to-spread quality of a fit.
fn fit_quality(fit: &LevelFit) -> f64 {
    (fit.hi - fit.lo) / fit.intra_std.max(INTRA_STD_FLOOR)
}

/// Best separable fit of bit `k` among the full context and its two
/// halves, judged by gap-to-spread quality. Contexts that straddle a
/// transmitter-movement step mix four levels and lose quality, so the half
/// that stays on one side of the step wins there; everywhere else the full
/// context wins over occasional noise-split fits in a half.
fn fit_bit(samples: &[f64], grid: &BitGrid, k: usize, scratch: &mut Vec<f64>) -> Option<LevelFit> {
    let n_bits = grid.intervals.len();
    let c0 = k.saturating_sub(CONTEXT_BITS);
    let c1 = (k + CONTEXT_BITS + 1).min(n_bits);
    let collect = |a: usize, b: usize, scratch: &mut Vec<f64>| {
        scratch.clear();
        for j in a..b {
            let (i0, i1) = grid.interior(j);
            scratch.extend_from_slice(&samples[i0..i1]);
        }
    };
    let mut best: Option<(f64, LevelFit)> = None;
    for (a, b) in [(c0, c1), (c0, k + 1), (k, c1)] {
        if b - a < 3 {
            continue;
        }
        collect(a, b, scratch);
        if let Some(fit) = two_level_fit(scratch) {
            let shape = cluster_shape(samples, grid, a, b, &fit);
            if separable(&fit)
                && shape.alignment >= MIN_BIT_ALIGNMENT
                && shape.transitions >= MIN_CLUSTER_TRANSITIONS
            {
                let q = fit_quality(&fit);
                if best.is_none_or(|(bq, _)| q > bq) {
                    best = Some((q, fit));
                }
            }
        }
    }
    best.map(|(_, fit)| fit)
}

struct ClusterShape {
    /// Fraction of interior samples siding with their own interval's
    /// majority cluster.
    alignment: f64,
    /// Low/high flips between consecutive interval majorities.
    transitions: usize,
}

fn cluster_shape(samples: &[f64], grid: &BitGrid, a: usize, b: usize, fit: &LevelFit) -> ClusterShape {
    let mid = 0.5 * (fit.lo + fit.hi);
    let mut agree = 0usize;
    let mut total = 0usize;
    let mut transitions = 0usize;
    let mut prev_high: Option<bool> = None;
    for j in a..b {
        let (i0, i1) = grid.interior(j);
        let high = samples[i0..i1].iter().filter(|&&v| v > mid).count();
        let n = i1 - i0;
        agree += high.max(n - high);
        total += n;
        let is_high = 2 * high > n;
        if prev_high.is_some_and(|p| p != is_high) {
            transitions += 1;
        }
        prev_high = Some(is_high);
    }
    ClusterShape {
        alignment: if total == 0 {
            0.0
        } else {
            agree as f64 / total as f64
        },
        transitions,
    }
}

/// Separate the backscatter stream from the smoothed data.
///
/// Per bit interval, a two-level fit over the surrounding context yields a
/// local low/high boundary; the interval's interior mean against that
/// boundary decodes the bit, and the centroid gap is the interval's
/// reflection-power estimate. Intervals with no separable context inherit
/// the most recent separable fit. The residual is the smoothed series with
/// reflecting intervals lowered to their local low level, leaving only the
/// main-path signal.
pub fn extract_backscatter(
    smoothed: &SmoothedSeries,
    grid: &BitGrid,
) -> Result<(BackscatterStream, Vec<f64>)> {
    let samples = &smoothed.samples;
    let n_bits = grid.intervals.len();
    if n_bits == 0 {
        return Err(Error::NoBackscatterDetected(
            "no usable bit intervals".into(),
        ));
    }

    let mut scratch = Vec::new();
    let fits: Vec<Option<LevelFit>> = (0..n_bits)
        .map(|k| fit_bit(samples, grid, k, &mut scratch))
        .collect();
    let n_separable = fits.iter().filter(|f| f.is_some()).count();
    if (n_separable as f64) < MIN_SEPARABLE_FRACTION * n_bits as f64 {
        return Err(Error::NoBackscatterDetected(format!(
            "only {n_separable} of {n_bits} bit intervals expose a two-level boundary"
        )));
    }

    // Carry the nearest earlier separable fit into unseparable intervals
    // (and the first separable one backwards over the head).
    let first = fits.iter().position(|f| f.is_some()).unwrap();
    let mut carried = fits[first].unwrap();
    let mut resolved = Vec::with_capacity(n_bits);
    let mut separable_flags = Vec::with_capacity(n_bits);
    for fit in &fits {
        match fit {
            Some(f) => {
                carried = *f;
                resolved.push(*f);
                separable_flags.push(true);
            }
            None => {
                resolved.push(carried);
                separable_flags.push(false);
            }
        }
    }
    for k in (0..first).rev() {
        resolved[k] = resolved[first];
    }

    let mut reflection_power = Vec::with_capacity(n_bits);
    let mut decoded_bits = Vec::with_capacity(n_bits);
    let mut residual = samples.clone();
    let mut bit_boundaries = Vec::with_capacity(n_bits + 1);

    for (k, &(s0, s1)) in grid.intervals.iter().enumerate() {
        let fit = resolved[k];
        let (i0, i1) = grid.interior(k);
        let mean = samples[i0..i1].iter().sum::<f64>() / (i1 - i0) as f64;
        let bit = mean > 0.5 * (fit.lo + fit.hi);
        decoded_bits.push(bit);
        reflection_power.push(fit.hi - fit.lo);
        if bit {
            for v in &mut residual[s0..s1] {
                *v -= fit.hi - fit.lo;
            }
        }
        bit_boundaries.push(s0);
    }
    bit_boundaries.push(grid.intervals[n_bits - 1].1);

    Ok((
        BackscatterStream {
            reflection_power,
            decoded_bits,
            bit_boundaries,
            separable: separable_flags,
        },
        residual,
    ))
}
