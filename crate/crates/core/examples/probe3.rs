//! Scratch diagnostic: noiseless single trial.

use scatterguard_core::harness::run_trial;
use scatterguard_core::pipeline::PipelineParams;
use scatterguard_core::scenario::ScenarioSpec;

fn main() {
    let mut spec = ScenarioSpec::genuine_static();
    spec.noise_std_db = 0.0;
    spec.fast_ripple_amp_db = 0.0;
    let run = run_trial(&spec, &PipelineParams::calibrated(), 5, 0).unwrap();
    println!("verdict: {:?}", run.outcome.verdict);
    for g in &run.outcome.groups {
        println!(
            "group: pre {:.3} post {:.3} var {:.4}/{:.4} bits {:?}/{:?} movement {:?}",
            g.pre_mean_db, g.post_mean_db, g.pre_var, g.post_var, g.pre_bits, g.post_bits,
            g.movement_samples
        );
    }
    println!("diags: {:?}", run.outcome.diagnostics);
    println!("truth: {:?}", run.labeled.movement_intervals);

    let stream = run.outcome.stream.as_ref().unwrap();
    let spb = spec.samples_per_bit();
    for k in 11994..12030 {
        let lvl = run.labeled.series.samples[k * spb + 5];
        println!(
            "  bit {k}: decoded {} power {:6.2} sep {} level {:7.2}",
            stream.decoded_bits[k], stream.reflection_power[k], stream.separable[k], lvl
        );
    }
}
