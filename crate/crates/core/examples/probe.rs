//! Scratch diagnostic: dump pipeline internals for one scenario.

use scatterguard_core::pipeline::{
    self, detect_states, extract_backscatter, extract_trace, select_movement_states, slopes,
    smooth, AuthConfig, BitGrid, PipelineParams,
};
use scatterguard_core::scenario::{AttackerConfig, ScenarioModel, ScenarioSpec};
use scatterguard_core::synth::synthesize;

fn main() {
    let mut spec = ScenarioSpec::genuine_static();
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "const" => spec.attacker = AttackerConfig::constant_power(0.5),
        "powerful" => spec.attacker = AttackerConfig::powerful(0.5, 0.05),
        _ => {}
    }
    spec.movement_count = 3;
    let model = ScenarioModel::build(&spec).unwrap();
    println!("model: {model:#?}");

    let out = synthesize(&spec, 1001).unwrap();
    println!("samples: {}", out.series.len());
    println!("movement truth: {:?}", out.movement_intervals);

    let params = PipelineParams::calibrated();
    let n_int = params
        .slope_interval(spec.sample_rate_hz, spec.backscatter.bitrate_bps)
        .unwrap();
    println!("slope interval N = {n_int} trace points, trace_window = {}", params.trace_window);

    let smoothed = smooth(&out.series, &params).unwrap();
    let grid = BitGrid::continuous(out.series.len(), spec.samples_per_bit(), params.smooth_window);
    let (stream, residual) = extract_backscatter(&smoothed, &grid).unwrap();
    let n_sep = stream.separable.iter().filter(|&&s| s).count();
    println!(
        "bits: {} decoded, {} separable; reflection power head: {:?}",
        stream.decoded_bits.len(),
        n_sep,
        &stream.reflection_power[..6]
    );
    let mid = stream.reflection_power.len() / 2;
    println!("reflection power mid: {:?}", &stream.reflection_power[mid..mid + 6]);

    // Reflection-power profile through the post-down-step segment.
    for probe in [7990, 7995, 8000, 8010, 8050, 8500, 9000, 10000, 11000, 11900] {
        if probe < stream.reflection_power.len() {
            println!(
                "  bit {probe}: power {:.2} separable {}",
                stream.reflection_power[probe], stream.separable[probe]
            );
        }
    }
    let seg = &stream.reflection_power[7992..12000.min(stream.reflection_power.len())];
    let hot = seg.iter().filter(|&&p| p > 7.0).count();
    println!("post-segment bits with power > 7 dB: {hot} of {}", seg.len());

    let trace = extract_trace(&residual, params.trace_window).unwrap();
    let slope = slopes(&trace, n_int).unwrap();
    println!("trace around the second step (true step at trace 13333.3):");
    for n in (13310..13350).step_by(2) {
        println!(
            "  n {n}: trace {:8.2} wmd {:8.2}",
            trace.values[n],
            slope.window_mean_diff.get(n).copied().unwrap_or(f64::NAN)
        );
    }
    let max_wmd = slope
        .window_mean_diff
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    println!("max window_mean_diff = {max_wmd:.2} dB");
    let marks = detect_states(&slope, &trace, &params).unwrap();
    println!("marks ({}):", marks.len());
    for m in &marks {
        println!(
            "  {:?} trace [{}, {}) samples [{}, {}) mean {:.2}",
            m.kind,
            m.interval.0,
            m.interval.1,
            m.interval.0 * params.trace_window,
            m.interval.1 * params.trace_window,
            m.mean_db
        );
    }
    let triples = select_movement_states(&marks, &params);
    println!("triples: {}", triples.len());
    let mut diags = Vec::new();
    let groups = pipeline::segment_and_group(&stream, &triples, params.trace_window, n_int, &mut diags);
    println!("direct groups: {} diags {:?}", groups.len(), diags);
    for g in &groups {
        println!(
            "  direct group: pre_bits {:?} post_bits {:?} pre {:.2} post {:.2} var {:.3}/{:.3}",
            g.pre_bits, g.post_bits, g.pre_mean_db, g.post_mean_db, g.pre_var, g.post_var
        );
    }

    let cfg = AuthConfig {
        bitrate_bps: spec.backscatter.bitrate_bps,
        traffic: spec.traffic,
    };
    let res = pipeline::authenticate(&out.series, &cfg, &params).unwrap();
    println!("verdict: {:?}", res.verdict);
    for g in &res.groups {
        println!(
            "  group: pre {:.2} dB post {:.2} dB var {:.3}/{:.3} movement {:?}",
            g.pre_mean_db, g.post_mean_db, g.pre_var, g.post_var, g.movement_samples
        );
    }
    println!("diagnostics: {:?}", res.diagnostics);
}
