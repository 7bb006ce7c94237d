//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`.

use scatterguard_core::harness::{
    latency_study, movements_match, run_trial, run_trials, sweep, SweepAxis,
};
use scatterguard_core::pipeline::{
    authenticate, segment_variance, slopes, AuthConfig, FinalVerdict, MainPathTrace,
    PipelineParams,
};
use scatterguard_core::rng::stream_rng;
use scatterguard_core::scenario::{
    AttackerConfig, DynamicsProfile, ScenarioSpec, TrafficModel,
};
use scatterguard_core::series::SampleSeries;
use scatterguard_core::synth::synthesize;
use rand::Rng;
use std::time::Instant;

fn calibrated() -> PipelineParams {
    PipelineParams::calibrated()
}

fn auth_cfg(spec: &ScenarioSpec) -> AuthConfig {
    AuthConfig {
        bitrate_bps: spec.backscatter.bitrate_bps,
        traffic: spec.traffic,
    }
}

fn pass(criterion: &str) {
    println!("criterion {criterion}: PASS");
}

/// 1. Slope and segment-variance implementations match naive brute-force
///    oracles exactly on 1000 random inputs, in under 5 seconds.
#[test]
fn criterion_1_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = stream_rng(0xACCE97, 1);
    for case in 0..1000 {
        let len = rng.random_range(16..300usize);
        let n_int = rng.random_range(1..6usize);
        if len < 2 * n_int + 1 {
            continue;
        }
        let values: Vec<f64> = (0..len).map(|_| rng.random_range(-95.0..-15.0)).collect();
        let trace = MainPathTrace {
            values: values.clone(),
            detection_values: None,
            window: 6,
        };
        let got = slopes(&trace, n_int).unwrap();

        // Brute-force double-loop oracle for the slope form.
        for n in 0..len - 2 * n_int {
            let mut first = 0.0;
            for i in n..=n + n_int {
                first += values[i].abs();
            }
            let mut second = 0.0;
            for i in n + n_int..=n + 2 * n_int {
                second += values[i].abs();
            }
            let expected = (second - first).abs() / (n_int * n_int) as f64;
            let denom = expected.abs().max(1e-300);
            assert!(
                ((got.raw[n] - expected) / denom).abs() <= 1e-12,
                "case {case}: slope[{n}] {} vs oracle {expected}",
                got.raw[n]
            );
        }

        // Brute-force two-pass oracle for the variance form.
        let seg_len = rng.random_range(2..400usize);
        let seg: Vec<f64> = (0..seg_len).map(|_| rng.random_range(-5.0..25.0)).collect();
        let got_var = segment_variance(&seg).unwrap();
        let mean = seg.iter().map(|v| v.abs()).sum::<f64>() / seg_len as f64;
        let expected: f64 = seg
            .iter()
            .map(|v| (v.abs() - mean) * (v.abs() - mean))
            .sum::<f64>()
            / seg_len as f64;
        let denom = expected.abs().max(1e-300);
        assert!(
            ((got_var - expected) / denom).abs() <= 1e-12,
            "case {case}: variance {got_var} vs oracle {expected}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "oracle check took {elapsed:?}");
    pass("1 (oracle equivalence, slope and variance forms)");
}

/// 2. Demodulation: zero bit errors on a noiseless series; bit-error rate
///    below 1e-3 at a 10 dB reflection-to-noise ratio over 100 seeds, in
///    under 30 seconds. The reflection-to-noise ratio is
///    20*log10(reflection depth / noise std), both in dB units.
#[test]
fn criterion_2_demodulation_round_trip() {
    let started = Instant::now();

    // Noiseless: every decoded bit equals the transmitted bit.
    let mut quiet = ScenarioSpec::genuine_static();
    quiet.noise_std_db = 0.0;
    quiet.fast_ripple_amp_db = 0.0;
    let run = run_trial(&quiet, &calibrated(), 7, 0).unwrap();
    let stream = run.outcome.stream.as_ref().expect("stream");
    let truth = run.labeled.truth_bits(quiet.samples_per_bit());
    assert_eq!(stream.decoded_bits.len(), truth.len());
    for (k, (&got, want)) in stream.decoded_bits.iter().zip(&truth).enumerate() {
        assert_eq!(Some(got), *want, "noiseless bit {k} decoded wrong");
    }

    // 10 dB reflection-to-noise ratio: depth 3 dB, noise std 3*10^(-0.5).
    let mut noisy = ScenarioSpec::genuine_static();
    noisy.backscatter.reflection_depth_db = Some(3.0);
    noisy.noise_std_db = 3.0 * 10f64.powf(-0.5);
    noisy.fast_ripple_amp_db = 0.0;
    let mut errors = 0usize;
    let mut total = 0usize;
    for seed in 0..100 {
        let run = run_trial(&noisy, &calibrated(), 0xBE5, seed).unwrap();
        let stream = run.outcome.stream.as_ref().expect("stream");
        let truth = run.labeled.truth_bits(noisy.samples_per_bit());
        for (&got, want) in stream.decoded_bits.iter().zip(&truth) {
            if let Some(want) = want {
                total += 1;
                if got != *want {
                    errors += 1;
                }
            }
        }
    }
    let ber = errors as f64 / total as f64;
    assert!(
        ber < 1e-3,
        "bit-error rate {ber:.2e} ({errors}/{total}) exceeds 1e-3"
    );
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "demodulation check took {elapsed:?}");
    pass(&format!(
        "2 (demodulation round-trip; ber {ber:.2e} at 10 dB reflection-to-noise)"
    ));
}

/// 3. Movement detection recovers every scripted movement with boundaries
///    within +/-2N samples and no spurious triples, over 100 seeds of the
///    static profile.
#[test]
fn criterion_3_movement_detection() {
    let spec = ScenarioSpec::genuine_static();
    let params = calibrated();
    let n_samples = params
        .slope_interval(spec.sample_rate_hz, spec.backscatter.bitrate_bps)
        .unwrap()
        * params.trace_window;
    let tol = 2 * n_samples;
    for seed in 0..100 {
        let run = run_trial(&spec, &params, 0x30E, seed).unwrap();
        assert!(
            movements_match(
                &run.labeled.movement_intervals,
                &run.outcome.detected_movements,
                tol
            ),
            "seed {seed}: truth {:?} vs detected {:?} (tol {tol})",
            run.labeled.movement_intervals,
            run.outcome.detected_movements
        );
    }
    pass(&format!(
        "3 (movement detection within +/-{tol} samples, zero spurious, 100 seeds)"
    ));
}

/// 4. Calibrated static scenario: genuine TP >= 0.94; constant-power and
///    tag attackers at 0.5 m FP <= 0.05; 100 trials each, fixed master
///    seed, under 2 minutes.
#[test]
fn criterion_4_calibrated_static_rates() {
    let started = Instant::now();
    let params = calibrated();

    let genuine = ScenarioSpec::genuine_static();
    let r = run_trials(&genuine, &params, 100, 0x5747).unwrap();
    let tp = r.tp_rate.expect("genuine trials ran");
    assert!(tp >= 0.94, "genuine TP {tp} below 0.94");

    let mut constant = ScenarioSpec::genuine_static();
    constant.attacker = AttackerConfig::constant_power(0.5);
    let r = run_trials(&constant, &params, 100, 0x5747).unwrap();
    let fp_const = r.fp_rate.expect("attacker trials ran");
    assert!(fp_const <= 0.05, "constant-power FP {fp_const} above 0.05");

    let mut tag = ScenarioSpec::genuine_static();
    tag.attacker = AttackerConfig::tag_attacker(0.5);
    let r = run_trials(&tag, &params, 100, 0x5747).unwrap();
    let fp_tag = r.fp_rate.expect("attacker trials ran");
    assert!(fp_tag <= 0.05, "tag-attacker FP {fp_tag} above 0.05");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "static rates took {elapsed:?}");
    pass(&format!(
        "4 (calibrated static: TP {tp:.3}, const FP {fp_const:.3}, tag FP {fp_tag:.3})"
    ));
}

/// 5. Majority vote: trial-level TP non-decreasing over 1/3/5 movements on
///    matched seeds, and TP(5) >= 0.99.
#[test]
fn criterion_5_majority_vote_trend() {
    let genuine = ScenarioSpec::genuine_static();
    let rows = sweep(
        &genuine,
        &calibrated(),
        SweepAxis::MovementCount,
        &["1".into(), "3".into(), "5".into()],
        100,
        0x0705,
    )
    .unwrap();
    let tps: Vec<f64> = rows
        .iter()
        .map(|(_, r)| r.trial_tp_rate.expect("genuine trials"))
        .collect();
    assert!(
        tps.windows(2).all(|w| w[1] >= w[0]),
        "vote TP not non-decreasing: {tps:?}"
    );
    assert!(tps[2] >= 0.99, "TP(5) {} below 0.99", tps[2]);
    pass(&format!(
        "5 (majority vote: TP {:.3} -> {:.3} -> {:.3} over 1/3/5 movements)",
        tps[0], tps[1], tps[2]
    ));
}

/// 6. Powerful-attacker defense: FP <= 0.07 for a tracking attacker with
///    50 ms reaction latency, and genuine TP >= 0.92, both under the
///    slight-motion profile.
#[test]
fn criterion_6_powerful_attacker_defense() {
    let params = calibrated();

    let mut powerful = ScenarioSpec::genuine_static();
    powerful.dynamics = DynamicsProfile::SlightMotion;
    powerful.attacker = AttackerConfig::powerful(0.5, 0.05);
    let r = run_trials(&powerful, &params, 100, 0x70F).unwrap();
    let fp = r.fp_rate.expect("attacker trials ran");
    assert!(fp <= 0.07, "powerful-attacker FP {fp} above 0.07");

    let mut genuine = ScenarioSpec::genuine_static();
    genuine.dynamics = DynamicsProfile::SlightMotion;
    let r = run_trials(&genuine, &params, 100, 0x70F).unwrap();
    let tp = r.tp_rate.expect("genuine trials ran");
    assert!(tp >= 0.92, "slight-motion TP {tp} below 0.92");

    pass(&format!(
        "6 (powerful attacker: FP {fp:.3} at 50 ms latency, TP {tp:.3} under slight motion)"
    ));
}

/// 7. Latency: TP non-decreasing in segment length, and TP >= 0.92 with
///    150 ms segments.
#[test]
fn criterion_7_latency_trend() {
    let genuine = ScenarioSpec::genuine_static();
    let rows = latency_study(
        &genuine,
        &calibrated(),
        &[30.0, 60.0, 150.0, 300.0],
        100,
        0x1A7,
    )
    .unwrap();
    let tps: Vec<f64> = rows
        .iter()
        .map(|(_, r)| r.tp_rate.expect("genuine trials"))
        .collect();
    assert!(
        tps.windows(2).all(|w| w[1] >= w[0]),
        "latency TP not non-decreasing: {tps:?}"
    );
    let at_150 = rows
        .iter()
        .find(|(ms, _)| *ms == 150.0)
        .map(|(_, r)| r.tp_rate.unwrap())
        .unwrap();
    assert!(at_150 >= 0.92, "TP at 150 ms {at_150} below 0.92");
    pass(&format!(
        "7 (latency: TP {tps:?} over 30/60/150/300 ms segments)"
    ));
}

/// 8. Level-shift equivariance: a constant offset in [-20, +20] dB leaves
///    decoded bits, group structure, and the final verdict identical, over
///    50 random scenarios.
#[test]
fn criterion_8_level_shift_equivariance() {
    let params = calibrated();
    let mut rng = stream_rng(0x5F1F7, 0);
    for case in 0..50 {
        let mut spec = ScenarioSpec::genuine_static();
        spec.movement_count = rng.random_range(1..4);
        spec.dynamics = if rng.random::<bool>() {
            DynamicsProfile::Static
        } else {
            DynamicsProfile::SlightMotion
        };
        match rng.random_range(0..4) {
            0 => {}
            1 => spec.attacker = AttackerConfig::constant_power(rng.random_range(0.3..1.5)),
            2 => spec.attacker = AttackerConfig::tag_attacker(rng.random_range(0.3..1.5)),
            _ => spec.attacker = AttackerConfig::powerful(rng.random_range(0.3..1.5), 0.05),
        }
        let seed = rng.random::<u64>();
        let offset = rng.random_range(-20.0..20.0);

        let labeled = synthesize(&spec, seed).unwrap();
        let base = authenticate(&labeled.series, &auth_cfg(&spec), &params).unwrap();

        let shifted = SampleSeries {
            sample_rate_hz: labeled.series.sample_rate_hz,
            samples: labeled.series.samples.iter().map(|v| v + offset).collect(),
            start_time_s: labeled.series.start_time_s,
        };
        let moved = authenticate(&shifted, &auth_cfg(&spec), &params).unwrap();

        let base_stream = base.stream.as_ref().map(|s| &s.decoded_bits);
        let moved_stream = moved.stream.as_ref().map(|s| &s.decoded_bits);
        assert_eq!(base_stream, moved_stream, "case {case}: decoded bits changed");
        let structure = |o: &scatterguard_core::pipeline::AuthOutcome| {
            o.groups
                .iter()
                .map(|g| (g.pre_bits, g.post_bits, g.movement_samples))
                .collect::<Vec<_>>()
        };
        assert_eq!(
            structure(&base),
            structure(&moved),
            "case {case}: group structure changed under {offset:+.1} dB"
        );
        assert_eq!(
            base.verdict.per_group, moved.verdict.per_group,
            "case {case}: group verdicts changed"
        );
        assert_eq!(
            base.verdict.final_verdict, moved.verdict.final_verdict,
            "case {case}: final verdict changed under {offset:+.1} dB"
        );
    }
    pass("8 (level-shift equivariance over 50 random scenarios)");
}

/// 9. Determinism: identical inputs reproduce byte-identical artifacts.
#[test]
fn criterion_9_byte_determinism() {
    use scatterguard_core::harness::export_report;
    use scatterguard_core::io::{write_labels, write_series, SeriesMeta};

    let dir = tempfile::tempdir().unwrap();
    let spec = ScenarioSpec::genuine_static();
    let params = calibrated();

    let render = |tag: &str| {
        let labeled = synthesize(&spec, 424_242).unwrap();
        let series_path = dir.path().join(format!("series_{tag}.rss"));
        let labels_path = dir.path().join(format!("series_{tag}.labels"));
        write_series(
            &series_path,
            &labeled.series,
            &SeriesMeta {
                bitrate_bps: Some(spec.backscatter.bitrate_bps),
                seed: Some(424_242),
            },
        )
        .unwrap();
        write_labels(&labels_path, &labeled).unwrap();
        let report = run_trials(&spec, &params, 10, 77).unwrap();
        let report_path = dir.path().join(format!("report_{tag}.csv"));
        export_report(&[("all".into(), report)], &report_path).unwrap();
        (
            std::fs::read(series_path).unwrap(),
            std::fs::read(labels_path).unwrap(),
            std::fs::read(report_path).unwrap(),
        )
    };
    let a = render("a");
    let b = render("b");
    assert_eq!(a.0, b.0, "series bytes differ between identical runs");
    assert_eq!(a.1, b.1, "label bytes differ between identical runs");
    assert_eq!(a.2, b.2, "report bytes differ between identical runs");
    pass("9 (byte-identical reruns for series, labels, and reports)");
}

/// Gated traffic keeps working end to end (supporting check for the
/// non-continuous traffic axis).
#[test]
fn supporting_gated_traffic_end_to_end() {
    let mut spec = ScenarioSpec::genuine_static();
    spec.traffic = TrafficModel::packets_half_duty(40.0, spec.backscatter.bitrate_bps);
    let r = run_trials(&spec, &calibrated(), 20, 0xB1E).unwrap();
    let tp = r.tp_rate.expect("genuine trials ran");
    assert!(tp >= 0.9, "gated-traffic TP {tp} below 0.9");
    pass(&format!("supporting (40 pkt/s gated traffic: TP {tp:.3})"));
}
