//! Labeled RSS series synthesis.
//!
//! [`synthesize`] composes the main-path level (link model plus movement
//! schedule), the reflection stream from the genuine tag or an attacker,
//! body dynamics, the fast-varying transmitter component, and measurement
//! noise into one labeled series. Everything is a pure function of
//! `(scenario, seed)`.

use crate::error::{Error, Result};
use crate::rng::{component, stream_rng};
use crate::scenario::{
    AttackerConfig, AttackerKind, DynamicsProfile, ScenarioModel, ScenarioSpec, TrafficModel,
};
use crate::series::{LabeledSeries, SampleSeries, SourceLabel};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::PI;

/// Level below which a sample is considered carrier-off (packet gaps).
pub const CARRIER_OFF_DB: f64 = -150.0;

fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// Generate the complete labeled series for a scenario.
pub fn synthesize(spec: &ScenarioSpec, seed: u64) -> Result<LabeledSeries> {
    let model = ScenarioModel::build(spec)?;
    let fs = spec.sample_rate_hz;
    let n = (spec.effective_duration_s() * fs as f64).round() as usize;
    let spb = spec.samples_per_bit();

    let (movement, movement_intervals) = spec.movement_script().offsets(n, fs);
    let jitter = body_dynamics(n, spec.dynamics, fs, seed)?;
    let ripple = fast_ripple(n, spec.fast_ripple_amp_db, fs, seed);
    let bits = tag_bits(n / spb, spec.backscatter.bit_source, seed);

    // Per-sample level of the reflector as received: the genuine tag's path
    // follows the transmitter movement harder than the main path does;
    // attacker emissions are computed from their own radio's behavior.
    let genuine = spec.attacker.kind == AttackerKind::None;
    let reflector_rx_db: Vec<f64> = if genuine {
        let depth0 = model.tag_depth_base_db.expect("genuine model has tag depth");
        // Baseline tag-path level consistent with the configured depth.
        let tag_rx0 = model.main_base_db + lin_to_db(db_to_lin(depth0) - 1.0);
        movement
            .iter()
            .map(|&m| tag_rx0 + model.tag_movement_coupling * m)
            .collect()
    } else {
        let monitored = SampleSeries {
            sample_rate_hz: fs,
            samples: movement.iter().map(|&m| model.main_base_db + m).collect(),
            start_time_s: 0.0,
        };
        let mut level = attacker_reflection(&spec.attacker, &monitored, seed)?;
        let base = model.attacker_base_rx_db.expect("attacker model has level");
        let shift = base - level.samples[0];
        for v in &mut level.samples {
            *v += shift;
        }
        // Slow scatter from the placement plus body-coupled proximity jitter.
        let sigma =
            (model.attacker_scatter_std_db.powi(2) + model.attacker_proximity_std_db.powi(2)).sqrt();
        if sigma > 0.0 {
            let slow = slow_jitter(n, sigma, 0.4, fs, seed, component::PROXIMITY);
            for (v, j) in level.samples.iter_mut().zip(slow) {
                *v += j;
            }
        }
        level.samples
    };

    let mask = match spec.traffic {
        TrafficModel::Continuous => vec![true; n],
        TrafficModel::Packets {
            rate_pkt_s,
            packet_duration_s,
        } => packet_gating(rate_pkt_s, packet_duration_s, n, fs)?,
    };

    let mut noise_rng = stream_rng(seed, component::NOISE);
    let noise = Normal::new(0.0, spec.noise_std_db.max(f64::MIN_POSITIVE)).unwrap();

    let mut samples = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let reflect_label = if genuine {
        SourceLabel::GenuineReflect
    } else {
        SourceLabel::AttackerReflect
    };

    for i in 0..n {
        if !mask[i] {
            samples.push(CARRIER_OFF_DB);
            labels.push(SourceLabel::MainOnly);
            continue;
        }
        let main_db = model.main_base_db + movement[i] + jitter[i];
        let bit = i / spb < bits.len() && bits[i / spb];
        let (mut rss, label) = if bit {
            let total = db_to_lin(main_db) + db_to_lin(reflector_rx_db[i]);
            (lin_to_db(total), reflect_label)
        } else {
            (main_db, SourceLabel::MainOnly)
        };
        rss += ripple[i];
        if spec.noise_std_db > 0.0 {
            rss += noise.sample(&mut noise_rng);
        }
        samples.push(rss);
        labels.push(label);
    }

    let out = LabeledSeries {
        series: SampleSeries {
            sample_rate_hz: fs,
            samples,
            start_time_s: 0.0,
        },
        source_labels: labels,
        movement_intervals,
        scenario: spec.clone(),
    };
    out.validate()?;
    Ok(out)
}

/// Emission level of an attacker as received, per sample, in dB.
///
/// Constant-power and tag attackers hold a fixed level. The powerful
/// attacker watches `monitored_main_db`; whenever the monitored level drifts
/// more than its trigger threshold from the last level it reacted to, it
/// retunes after its reaction latency. Its control loop reruns every latency
/// period and each power step carries a fresh tracking error, which is what
/// leaves fast variation inside otherwise stable segments.
pub fn attacker_reflection(
    attacker: &AttackerConfig,
    monitored_main_db: &SampleSeries,
    seed: u64,
) -> Result<SampleSeries> {
    if attacker.kind == AttackerKind::None {
        return Err(Error::invalid_config(
            "attacker_reflection requires an attacker kind",
        ));
    }
    attacker.validate()?;
    monitored_main_db.validate()?;
    let n = monitored_main_db.len();
    let fs = monitored_main_db.sample_rate_hz;

    let samples = match attacker.kind {
        AttackerKind::ConstantPowerActive | AttackerKind::TagAttacker => vec![0.0; n],
        AttackerKind::PowerfulActive => {
            let latency = ((attacker.reaction_latency_s * fs as f64).round() as usize).max(1);
            let mut rng = stream_rng(seed, component::ATTACKER);
            let step_noise = Normal::new(0.0, attacker.power_step_noise_db.max(f64::MIN_POSITIVE))
                .unwrap();
            let mon = &monitored_main_db.samples;
            let mut out = vec![0.0; n];
            let mut reference = mon[0]; // level the radio believes is current
            let mut pending: Option<(usize, f64)> = None; // (apply_at, new_ref)
            let mut dither = 0.0;
            for i in 0..n {
                if let Some((at, new_ref)) = pending {
                    if i >= at {
                        reference = new_ref;
                        pending = None;
                    }
                }
                if pending.is_none() && (mon[i] - reference).abs() > attacker.monitor_threshold_db {
                    pending = Some((i + latency, mon[i]));
                }
                if i % latency == 0 && attacker.power_step_noise_db > 0.0 {
                    dither = step_noise.sample(&mut rng);
                }
                out[i] = (reference - mon[0]) + dither;
            }
            out
        }
        AttackerKind::None => unreachable!(),
    };

    Ok(SampleSeries {
        sample_rate_hz: fs,
        samples,
        start_time_s: monitored_main_db.start_time_s,
    })
}

/// Periodic on/off transmission mask for packetized traffic.
pub fn packet_gating(
    traffic_rate_pkt_s: f64,
    packet_duration_s: f64,
    series_len: usize,
    sample_rate_hz: u32,
) -> Result<Vec<bool>> {
    if !(traffic_rate_pkt_s > 0.0) || !(packet_duration_s > 0.0) {
        return Err(Error::invalid_config("rate and duration must be > 0"));
    }
    if traffic_rate_pkt_s * packet_duration_s > 1.0 + 1e-12 {
        return Err(Error::invalid_config(format!(
            "duty cycle {} exceeds 1",
            traffic_rate_pkt_s * packet_duration_s
        )));
    }
    let fs = sample_rate_hz as f64;
    let period = fs / traffic_rate_pkt_s;
    let on_len = packet_duration_s * fs;
    let mut mask = vec![false; series_len];
    let mut k = 0usize;
    loop {
        let start = (k as f64 * period).round() as usize;
        if start >= series_len {
            break;
        }
        let end = ((k as f64 * period + on_len).round() as usize).min(series_len);
        for m in mask.iter_mut().take(end).skip(start) {
            *m = true;
        }
        k += 1;
    }
    Ok(mask)
}

/// Additive body-dynamics jitter in dB, one value per sample.
pub fn body_dynamics(
    series_len: usize,
    profile: DynamicsProfile,
    sample_rate_hz: u32,
    seed: u64,
) -> Result<Vec<f64>> {
    match profile {
        DynamicsProfile::Static => Ok(vec![0.0; series_len]),
        DynamicsProfile::SlightMotion => {
            // A few band-limited tones in the 0.5-4 Hz range.
            let mut rng = stream_rng(seed, component::DYNAMICS);
            let fs = sample_rate_hz as f64;
            let tones: Vec<(f64, f64, f64)> = (0..3)
                .map(|_| {
                    let f = rng.random_range(0.5..4.0);
                    let amp = rng.random_range(0.2..0.45);
                    let phase = rng.random_range(0.0..2.0 * PI);
                    (f, amp, phase)
                })
                .collect();
            Ok((0..series_len)
                .map(|i| {
                    let t = i as f64 / fs;
                    tones
                        .iter()
                        .map(|&(f, a, p)| a * (2.0 * PI * f * t + p).sin())
                        .sum()
                })
                .collect())
        }
        DynamicsProfile::WalkersNearby(distance_m) => {
            let sigma = crate::propagation::proximity_coupling_std_db(distance_m)?;
            Ok(slow_jitter(
                series_len,
                sigma,
                0.4,
                sample_rate_hz,
                seed,
                component::DYNAMICS,
            ))
        }
    }
}

/// Slowly varying Gaussian process: AR(1) on a 100 Hz grid with the given
/// stationary std and correlation time, linearly interpolated to sample rate.
fn slow_jitter(
    series_len: usize,
    sigma_db: f64,
    corr_time_s: f64,
    sample_rate_hz: u32,
    seed: u64,
    tag: u64,
) -> Vec<f64> {
    if sigma_db <= 0.0 || series_len == 0 {
        return vec![0.0; series_len];
    }
    let fs = sample_rate_hz as f64;
    let grid_hz = 100.0;
    let step = (fs / grid_hz).max(1.0) as usize;
    let n_grid = series_len / step + 2;
    let rho = (-1.0 / (grid_hz * corr_time_s)).exp();
    let innovation = sigma_db * (1.0 - rho * rho).sqrt();
    let mut rng = stream_rng(seed, tag);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut grid = Vec::with_capacity(n_grid);
    let mut x = sigma_db * normal.sample(&mut rng);
    grid.push(x);
    for _ in 1..n_grid {
        x = rho * x + innovation * normal.sample(&mut rng);
        grid.push(x);
    }
    (0..series_len)
        .map(|i| {
            let pos = i as f64 / step as f64;
            let k = pos.floor() as usize;
            let frac = pos - k as f64;
            grid[k] * (1.0 - frac) + grid[k + 1] * frac
        })
        .collect()
}

/// Fast-varying transmitter component: high-frequency ripple plus a small
/// white term, both well above the tag bit rate.
fn fast_ripple(series_len: usize, amp_db: f64, sample_rate_hz: u32, seed: u64) -> Vec<f64> {
    if amp_db <= 0.0 {
        return vec![0.0; series_len];
    }
    let mut rng = stream_rng(seed, component::RIPPLE);
    let fs = sample_rate_hz as f64;
    let f = fs * 0.285; // near Nyquist, incommensurate with the bit grid
    let phase: f64 = rng.random_range(0.0..2.0 * PI);
    let normal = Normal::new(0.0, amp_db * 0.3).unwrap();
    (0..series_len)
        .map(|i| {
            let t = i as f64 / fs;
            amp_db * (2.0 * PI * f * t + phase).sin() + normal.sample(&mut rng)
        })
        .collect()
}

/// Seeded pseudo-random tag payload, one bool per bit interval.
fn tag_bits(n_bits: usize, bit_source: u64, seed: u64) -> Vec<bool> {
    let mut rng = stream_rng(seed ^ bit_source, component::BITS);
    (0..n_bits).map(|_| rng.random::<bool>()).collect()
}
