//! Scratch diagnostic for decode anomalies.

use scatterguard_core::harness::run_trial;
use scatterguard_core::pipeline::PipelineParams;
use scatterguard_core::scenario::ScenarioSpec;

fn main() {
    let params = PipelineParams::calibrated();

    // Criterion-2 noiseless case, bit 8871.
    let mut quiet = ScenarioSpec::genuine_static();
    quiet.noise_std_db = 0.0;
    quiet.fast_ripple_amp_db = 0.0;
    let run = run_trial(&quiet, &params, 7, 0).unwrap();
    let stream = run.outcome.stream.as_ref().unwrap();
    let truth = run.labeled.truth_bits(quiet.samples_per_bit());
    let errs: Vec<usize> = stream
        .decoded_bits
        .iter()
        .zip(&truth)
        .enumerate()
        .filter(|(_, (&g, w))| Some(g) != **w)
        .map(|(k, _)| k)
        .collect();
    println!("noiseless decode errors at bits: {errs:?}");
    for &e in errs.iter().take(3) {
        let a = e.saturating_sub(12);
        let b = (e + 12).min(truth.len());
        println!("around bit {e}:");
        for k in a..b {
            let spb = quiet.samples_per_bit();
            let lvl = run.labeled.series.samples[k * spb + 5];
            println!(
                "  bit {k}: truth {:?} decoded {} power {:6.2} sep {} level {:7.2}",
                truth[k], stream.decoded_bits[k], stream.reflection_power[k],
                stream.separable[k], lvl
            );
        }
    }

    // Criterion-3 seed 36 third movement.
    let spec = ScenarioSpec::genuine_static();
    let run = run_trial(&spec, &params, 0x30E, 36).unwrap();
    println!(
        "seed 36: truth {:?} detected {:?}",
        run.labeled.movement_intervals, run.outcome.detected_movements
    );
    let stream = run.outcome.stream.as_ref().unwrap();
    let spb = spec.samples_per_bit();
    for k in 11990..12016 {
        let lvl = run.labeled.series.samples[k * spb + 5];
        println!(
            "  bit {k}: decoded {} power {:6.2} sep {} level {:7.2}",
            stream.decoded_bits[k], stream.reflection_power[k], stream.separable[k], lvl
        );
    }
}
