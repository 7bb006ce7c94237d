//! Per-group authentication and the majority-vote verdict.

use crate::pipeline::segments::SegmentGroup;
use crate::pipeline::PipelineParams;

/// Fast/slow classification of one stable segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentSpeed {
    Fast,
    Slow,
}

/// Authentication outcome of one segment group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupVerdict {
    OnBody,
    Attacker,
    PowerfulAttacker,
}

/// Aggregate decision of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinalVerdict {
    OnBody,
    Attacker,
    Inconclusive,
}

/// Per-group and aggregate authentication decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub per_group: Vec<GroupVerdict>,
    pub final_verdict: FinalVerdict,
    pub groups_used: usize,
}

/// Fast/slow classification of both segments: a segment whose reflection
/// power varies by more than the variance threshold (in std terms) is
/// fast-varying, the signature of a powerful attacker's tracking loop.
pub fn classify_powerful(group: &SegmentGroup, params: &PipelineParams) -> (SegmentSpeed, SegmentSpeed) {
    let speed = |var: f64| {
        if var.sqrt() > params.variance_threshold_db {
            SegmentSpeed::Fast
        } else {
            SegmentSpeed::Slow
        }
    };
    (speed(group.pre_var), speed(group.post_var))
}

/// Authenticate one group: fast variation in either segment flags a
/// powerful attacker; otherwise the reflected level must have moved with
/// the transmitter by more than the authentication threshold to count as
/// on-body.
pub fn authenticate_group(group: &SegmentGroup, params: &PipelineParams) -> GroupVerdict {
    let (pre, post) = classify_powerful(group, params);
    if pre == SegmentSpeed::Fast || post == SegmentSpeed::Fast {
        return GroupVerdict::PowerfulAttacker;
    }
    if (group.pre_mean_db - group.post_mean_db).abs() > params.auth_threshold_db {
        GroupVerdict::OnBody
    } else {
        GroupVerdict::Attacker
    }
}

/// Majority vote over the group verdicts; ties and empty runs are
/// inconclusive (fail-safe reject).
pub fn majority_vote(per_group: &[GroupVerdict]) -> Verdict {
    let on_body = per_group
        .iter()
        .filter(|&&v| v == GroupVerdict::OnBody)
        .count();
    let attacker = per_group.len() - on_body;
    let final_verdict = if per_group.is_empty() || on_body == attacker {
        FinalVerdict::Inconclusive
    } else if on_body > attacker {
        FinalVerdict::OnBody
    } else {
        FinalVerdict::Attacker
    };
    Verdict {
        per_group: per_group.to_vec(),
        final_verdict,
        groups_used: per_group.len(),
    }
}
