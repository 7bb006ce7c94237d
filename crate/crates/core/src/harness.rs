//! Seeded scenario sweeps, verdict scoring, and metric reports.
//!
//! A trial synthesizes one scenario with a seed derived from
//! `(master_seed, trial_index)`, runs the pipeline, and scores the group
//! verdicts against the trial's ground truth: a group is a true positive
//! when a genuine trial's group is judged on-body, a false positive when an
//! attacker trial's group is judged on-body. Trials run concurrently but
//! are folded in trial order, so reports are byte-reproducible.

use crate::error::{Error, Result};
use crate::pipeline::{
    self, authenticate_group, majority_vote, segment_variance, AuthConfig, AuthOutcome,
    FinalVerdict, GroupVerdict, PipelineParams, SegmentGroup,
};
use crate::rng::derive_seed;
use crate::scenario::{
    AttackerKind, AttackerPlace, Band, DynamicsProfile, ScenarioSpec, TagPosition, TrafficModel,
};
use crate::synth::synthesize;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// TP/FP rates and bookkeeping of one trial batch.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// Fraction of genuine-trial groups judged on-body; absent when the
    /// batch has no genuine trials.
    pub tp_rate: Option<f64>,
    /// Fraction of attacker-trial groups judged on-body; absent when the
    /// batch has no attacker trials.
    pub fp_rate: Option<f64>,
    pub n_trials: usize,
    pub genuine_trials: usize,
    pub attacker_trials: usize,
    pub genuine_groups: usize,
    pub attacker_groups: usize,
    pub tp_groups: usize,
    pub fp_groups: usize,
    /// Fraction of genuine trials whose majority vote lands on-body.
    pub trial_tp_rate: Option<f64>,
    /// Fraction of attacker trials whose majority vote lands on-body.
    pub trial_fp_rate: Option<f64>,
    pub mean_groups_per_trial: f64,
    /// Samples per truncated segment in a latency study.
    pub latency_samples_used: Option<usize>,
    /// Axis value -> (tp_rate, fp_rate) of the batch(es) behind this report.
    pub per_axis_breakdown: BTreeMap<String, (Option<f64>, Option<f64>)>,
}

#[derive(Default)]
struct Tally {
    genuine_trials: usize,
    attacker_trials: usize,
    genuine_groups: usize,
    attacker_groups: usize,
    tp_groups: usize,
    fp_groups: usize,
    trial_tp: usize,
    trial_fp: usize,
    total_groups: usize,
}

impl Tally {
    fn absorb(&mut self, genuine: bool, per_group: &[GroupVerdict], final_verdict: FinalVerdict) {
        let on_body = per_group
            .iter()
            .filter(|&&v| v == GroupVerdict::OnBody)
            .count();
        self.total_groups += per_group.len();
        if genuine {
            self.genuine_trials += 1;
            self.genuine_groups += per_group.len();
            self.tp_groups += on_body;
            if final_verdict == FinalVerdict::OnBody {
                self.trial_tp += 1;
            }
        } else {
            self.attacker_trials += 1;
            self.attacker_groups += per_group.len();
            self.fp_groups += on_body;
            if final_verdict == FinalVerdict::OnBody {
                self.trial_fp += 1;
            }
        }
    }

    fn report(self, n_trials: usize, label: &str, latency: Option<usize>) -> MetricsReport {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                None
            } else {
                Some(num as f64 / den as f64)
            }
        };
        let tp_rate = ratio(self.tp_groups, self.genuine_groups);
        let fp_rate = ratio(self.fp_groups, self.attacker_groups);
        let mut per_axis_breakdown = BTreeMap::new();
        per_axis_breakdown.insert(label.to_string(), (tp_rate, fp_rate));
        MetricsReport {
            tp_rate,
            fp_rate,
            n_trials,
            genuine_trials: self.genuine_trials,
            attacker_trials: self.attacker_trials,
            genuine_groups: self.genuine_groups,
            attacker_groups: self.attacker_groups,
            tp_groups: self.tp_groups,
            fp_groups: self.fp_groups,
            trial_tp_rate: ratio(self.trial_tp, self.genuine_trials),
            trial_fp_rate: ratio(self.trial_fp, self.attacker_trials),
            mean_groups_per_trial: self.total_groups as f64 / n_trials as f64,
            latency_samples_used: latency,
            per_axis_breakdown,
        }
    }
}

/// One authenticated trial, before scoring.
pub struct TrialRun {
    pub outcome: AuthOutcome,
    pub labeled: crate::series::LabeledSeries,
}

/// Synthesize and authenticate trial `index` of a batch.
pub fn run_trial(
    template: &ScenarioSpec,
    params: &PipelineParams,
    master_seed: u64,
    index: usize,
) -> Result<TrialRun> {
    let seed = derive_seed(master_seed, index as u64);
    let labeled = synthesize(template, seed)?;
    let cfg = AuthConfig {
        bitrate_bps: template.backscatter.bitrate_bps,
        traffic: template.traffic,
    };
    let outcome = pipeline::authenticate(&labeled.series, &cfg, params)?;
    Ok(TrialRun { outcome, labeled })
}

fn run_batch(
    template: &ScenarioSpec,
    params: &PipelineParams,
    n_trials: usize,
    master_seed: u64,
    label: &str,
    truncate_bits: Option<usize>,
) -> Result<MetricsReport> {
    if n_trials < 1 {
        return Err(Error::invalid_config("n_trials must be >= 1"));
    }
    template.validate()?;
    let genuine = template.attacker.kind == AttackerKind::None;
    let runs: Vec<(Vec<GroupVerdict>, FinalVerdict)> = (0..n_trials)
        .into_par_iter()
        .map(|i| {
            let run = run_trial(template, params, master_seed, i)?;
            let verdict = match truncate_bits {
                None => run.outcome.verdict,
                Some(bits) => truncated_vote(&run.outcome, bits, params),
            };
            Ok((verdict.per_group, verdict.final_verdict))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::default();
    for (per_group, final_verdict) in &runs {
        tally.absorb(genuine, per_group, *final_verdict);
    }
    let spb = (template.sample_rate_hz / template.backscatter.bitrate_bps) as usize;
    Ok(tally.report(n_trials, label, truncate_bits.map(|b| b * spb)))
}

/// Run `n_trials` seeded trials of one scenario and score them.
pub fn run_trials(
    template: &ScenarioSpec,
    params: &PipelineParams,
    n_trials: usize,
    master_seed: u64,
) -> Result<MetricsReport> {
    run_batch(template, params, n_trials, master_seed, "all", None)
}

/// Re-vote a trial with each group's segments truncated to `max_bits` bit
/// intervals: the tail of the pre segment and the head of the post segment,
/// i.e. the data nearest the movement, as a latency-bound receiver would
/// hold.
fn truncated_vote(outcome: &AuthOutcome, max_bits: usize, params: &PipelineParams) -> pipeline::Verdict {
    let Some(stream) = &outcome.stream else {
        return majority_vote(&[]);
    };
    let per_group: Vec<GroupVerdict> = outcome
        .groups
        .iter()
        .filter_map(|g| {
            let pre0 = g.pre_bits.1.saturating_sub(max_bits).max(g.pre_bits.0);
            let post1 = (g.post_bits.0 + max_bits).min(g.post_bits.1);
            let pre = &stream.reflection_power[pre0..g.pre_bits.1];
            let post = &stream.reflection_power[g.post_bits.0..post1];
            if pre.len() < 2 || post.len() < 2 {
                return None;
            }
            let truncated = SegmentGroup {
                pre_bits: (pre0, g.pre_bits.1),
                post_bits: (g.post_bits.0, post1),
                movement_samples: g.movement_samples,
                pre_mean_db: pre.iter().sum::<f64>() / pre.len() as f64,
                post_mean_db: post.iter().sum::<f64>() / post.len() as f64,
                pre_var: segment_variance(pre).expect("len checked"),
                post_var: segment_variance(post).expect("len checked"),
                pre_var_norm: 0.0,
                post_var_norm: 0.0,
            };
            Some(authenticate_group(&truncated, params))
        })
        .collect();
    majority_vote(&per_group)
}

/// Evaluation axes mirroring the scenario dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    AttackerDistance,
    AttackerDirection,
    MovementCount,
    BodyDynamics,
    TagPosition,
    Band,
    TrafficRate,
    TagAngle,
    LatencySamples,
}

impl SweepAxis {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name.to_ascii_lowercase().as_str() {
            "attacker-distance" | "distance" => SweepAxis::AttackerDistance,
            "attacker-direction" | "direction" => SweepAxis::AttackerDirection,
            "movement-count" | "movements" => SweepAxis::MovementCount,
            "body-dynamics" | "dynamics" => SweepAxis::BodyDynamics,
            "tag-position" | "position" => SweepAxis::TagPosition,
            "band" => SweepAxis::Band,
            "traffic-rate" | "pkt-rate" => SweepAxis::TrafficRate,
            "tag-angle" | "angle" => SweepAxis::TagAngle,
            "latency-samples" | "latency" => SweepAxis::LatencySamples,
            other => {
                return Err(Error::invalid_config(format!("unknown sweep axis '{other}'")))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::AttackerDistance => "attacker-distance",
            SweepAxis::AttackerDirection => "attacker-direction",
            SweepAxis::MovementCount => "movement-count",
            SweepAxis::BodyDynamics => "body-dynamics",
            SweepAxis::TagPosition => "tag-position",
            SweepAxis::Band => "band",
            SweepAxis::TrafficRate => "traffic-rate",
            SweepAxis::TagAngle => "tag-angle",
            SweepAxis::LatencySamples => "latency-samples",
        }
    }
}

fn parse_f64(axis: SweepAxis, value: &str) -> Result<f64> {
    value.parse().map_err(|_| {
        Error::invalid_config(format!("axis {}: bad numeric value '{value}'", axis.name()))
    })
}

/// Apply one axis value to a copy of the template. Latency values return
/// the per-segment truncation instead of touching the scenario.
fn apply_axis(
    template: &ScenarioSpec,
    axis: SweepAxis,
    value: &str,
) -> Result<(ScenarioSpec, Option<usize>)> {
    let mut spec = template.clone();
    let mut truncate = None;
    match axis {
        SweepAxis::AttackerDistance => {
            if spec.attacker.kind == AttackerKind::None {
                return Err(Error::invalid_config(
                    "attacker-distance sweep needs an attacker template",
                ));
            }
            spec.attacker.distance_m = parse_f64(axis, value)?;
        }
        SweepAxis::AttackerDirection => {
            if spec.attacker.kind == AttackerKind::None {
                return Err(Error::invalid_config(
                    "attacker-direction sweep needs an attacker template",
                ));
            }
            let idx: u8 = value
                .parse()
                .map_err(|_| Error::invalid_config(format!("bad direction '{value}'")))?;
            spec.attacker.direction = AttackerPlace::from_index(idx)?;
        }
        SweepAxis::MovementCount => {
            spec.movement_count = value
                .parse()
                .map_err(|_| Error::invalid_config(format!("bad movement count '{value}'")))?;
            spec.duration_s = 0.0; // re-derive to fit the schedule
        }
        SweepAxis::BodyDynamics => {
            spec.dynamics = parse_dynamics(value)?;
        }
        SweepAxis::TagPosition => {
            spec.tag_position = parse_position(value)?;
        }
        SweepAxis::Band => {
            spec.band = parse_band(value)?;
        }
        SweepAxis::TrafficRate => {
            spec.traffic = if value.eq_ignore_ascii_case("continuous") {
                TrafficModel::Continuous
            } else {
                TrafficModel::packets_half_duty(
                    parse_f64(axis, value)?,
                    spec.backscatter.bitrate_bps,
                )
            };
        }
        SweepAxis::TagAngle => {
            spec.tag_angle_deg = parse_f64(axis, value)?;
        }
        SweepAxis::LatencySamples => {
            let ms = parse_f64(axis, value)?;
            truncate = Some(latency_bits(&spec, ms)?);
        }
    }
    spec.validate()?;
    Ok((spec, truncate))
}

pub fn parse_dynamics(value: &str) -> Result<DynamicsProfile> {
    let v = value.to_ascii_lowercase();
    if v == "static" {
        Ok(DynamicsProfile::Static)
    } else if v == "slight" || v == "slight-motion" {
        Ok(DynamicsProfile::SlightMotion)
    } else if let Some(d) = v.strip_prefix("walkers:") {
        let dist: f64 = d
            .parse()
            .map_err(|_| Error::invalid_config(format!("bad walkers distance '{d}'")))?;
        Ok(DynamicsProfile::WalkersNearby(dist))
    } else {
        Err(Error::invalid_config(format!("unknown dynamics '{value}'")))
    }
}

pub fn parse_position(value: &str) -> Result<TagPosition> {
    Ok(match value.to_ascii_lowercase().as_str() {
        "chest" => TagPosition::Chest,
        "waist" => TagPosition::Waist,
        "wrist" => TagPosition::Wrist,
        "neck" => TagPosition::Neck,
        other => return Err(Error::invalid_config(format!("unknown position '{other}'"))),
    })
}

pub fn parse_band(value: &str) -> Result<Band> {
    Ok(match value.to_ascii_lowercase().as_str() {
        "900mhz" | "900" => Band::Mhz900,
        "2.4ghz" | "2400mhz" | "2.4" => Band::Ghz24,
        other => return Err(Error::invalid_config(format!("unknown band '{other}'"))),
    })
}

fn latency_bits(spec: &ScenarioSpec, segment_ms: f64) -> Result<usize> {
    let bits = (segment_ms / 1000.0 * spec.backscatter.bitrate_bps as f64).floor() as i64;
    if bits < 1 {
        return Err(Error::invalid_config(format!(
            "segment length {segment_ms} ms is shorter than one bit interval"
        )));
    }
    Ok(bits as usize)
}

/// Run one batch per axis value, substituting only that field.
pub fn sweep(
    template: &ScenarioSpec,
    params: &PipelineParams,
    axis: SweepAxis,
    values: &[String],
    n_trials: usize,
    master_seed: u64,
) -> Result<Vec<(String, MetricsReport)>> {
    if values.is_empty() {
        return Err(Error::invalid_config("sweep needs at least one value"));
    }
    let mut out = Vec::with_capacity(values.len());
    for value in values {
        let (spec, truncate) = apply_axis(template, axis, value)?;
        let report = run_batch(&spec, params, n_trials, master_seed, value, truncate)?;
        out.push((value.clone(), report));
    }
    Ok(out)
}

/// Score trials with group segments truncated to each requested duration.
pub fn latency_study(
    template: &ScenarioSpec,
    params: &PipelineParams,
    segment_lengths_ms: &[f64],
    n_trials: usize,
    master_seed: u64,
) -> Result<Vec<(f64, MetricsReport)>> {
    let mut out = Vec::with_capacity(segment_lengths_ms.len());
    for &ms in segment_lengths_ms {
        if !(ms > 0.0) {
            return Err(Error::invalid_config("segment lengths must be positive"));
        }
        let bits = latency_bits(template, ms)?;
        let report = run_batch(
            template,
            params,
            n_trials,
            master_seed,
            &format!("{ms}"),
            Some(bits),
        )?;
        out.push((ms, report));
    }
    Ok(out)
}

/// Write sweep rows as CSV; see [`crate::io::write_report`].
pub fn export_report(rows: &[(String, MetricsReport)], path: &std::path::Path) -> Result<()> {
    crate::io::write_report(path, rows)
}

/// Match detected movement spans against ground truth. Returns true when
/// every truth interval has exactly one detected span within `tol` samples
/// at both ends and nothing spurious remains.
pub fn movements_match(
    truth: &[(usize, usize)],
    detected: &[(usize, usize)],
    tol: usize,
) -> bool {
    if truth.len() != detected.len() {
        return false;
    }
    truth.iter().zip(detected).all(|(&(t0, t1), &(d0, d1))| {
        (d0 as i64 - t0 as i64).unsigned_abs() as usize <= tol
            && (d1 as i64 - t1 as i64).unsigned_abs() as usize <= tol
    })
}
