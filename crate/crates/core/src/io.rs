//! On-disk formats: RSS series (text and binary), ground-truth labels,
//! verdict records, and metric reports.
//!
//! The text series format is line-oriented for inspectability: `#`-prefixed
//! `key=value` headers (`sample_rate_hz`, optional `bitrate_bps`, `seed`,
//! `start_time_s`), then one decimal RSS value in dB per line. Floats are
//! written in shortest round-trip form, so write-then-read is exact. The
//! binary variant carries a fixed 32-byte header followed by little-endian
//! 64-bit floats.

use crate::error::{Error, Result};
use crate::harness::MetricsReport;
use crate::pipeline::{AuthOutcome, FinalVerdict, GroupVerdict};
use crate::series::{LabeledSeries, SampleSeries, SourceLabel};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

/// Series metadata carried in file headers.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SeriesMeta {
    pub bitrate_bps: Option<u32>,
    pub seed: Option<u64>,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Write a series in the text format.
pub fn write_series(path: &Path, series: &SampleSeries, meta: &SeriesMeta) -> Result<()> {
    series.validate()?;
    let mut out = String::with_capacity(series.len() * 20 + 64);
    let _ = writeln!(out, "# sample_rate_hz={}", series.sample_rate_hz);
    if let Some(b) = meta.bitrate_bps {
        let _ = writeln!(out, "# bitrate_bps={b}");
    }
    if let Some(s) = meta.seed {
        let _ = writeln!(out, "# seed={s}");
    }
    if series.start_time_s != 0.0 {
        let _ = writeln!(out, "# start_time_s={}", series.start_time_s);
    }
    for v in &series.samples {
        let _ = writeln!(out, "{v}");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a series in the text format.
pub fn read_series(path: &Path) -> Result<(SampleSeries, SeriesMeta)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut sample_rate: Option<u32> = None;
    let mut meta = SeriesMeta::default();
    let mut start_time_s = 0.0;
    let mut samples = Vec::new();
    let mut in_header = true;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if !in_header {
                return Err(parse_err(path, lineno, "header line after data"));
            }
            let (key, value) = rest
                .trim()
                .split_once('=')
                .ok_or_else(|| parse_err(path, lineno, "malformed header, expected key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "sample_rate_hz" => {
                    sample_rate = Some(value.parse().map_err(|_| {
                        parse_err(path, lineno, format!("bad sample_rate_hz '{value}'"))
                    })?)
                }
                "bitrate_bps" => {
                    meta.bitrate_bps = Some(value.parse().map_err(|_| {
                        parse_err(path, lineno, format!("bad bitrate_bps '{value}'"))
                    })?)
                }
                "seed" => {
                    meta.seed = Some(
                        value
                            .parse()
                            .map_err(|_| parse_err(path, lineno, format!("bad seed '{value}'")))?,
                    )
                }
                "start_time_s" => {
                    start_time_s = value.parse().map_err(|_| {
                        parse_err(path, lineno, format!("bad start_time_s '{value}'"))
                    })?
                }
                other => {
                    return Err(parse_err(path, lineno, format!("unknown header key '{other}'")))
                }
            }
            continue;
        }
        if in_header {
            if sample_rate.is_none() {
                return Err(parse_err(path, 1, "missing sample_rate_hz header"));
            }
            in_header = false;
        }
        let v: f64 = trimmed
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("bad RSS value '{trimmed}'")))?;
        if !v.is_finite() {
            return Err(parse_err(path, lineno, format!("non-finite RSS value '{trimmed}'")));
        }
        samples.push(v);
    }
    let sample_rate =
        sample_rate.ok_or_else(|| parse_err(path, 1, "missing sample_rate_hz header"))?;
    if samples.is_empty() {
        return Err(parse_err(path, 1, "no samples in file"));
    }
    let mut series = SampleSeries::new(sample_rate, samples)?;
    series.start_time_s = start_time_s;
    Ok((series, meta))
}

const BINARY_MAGIC: &[u8; 6] = b"SGRSS1";
const FLAG_BITRATE: u8 = 0x01;
const FLAG_SEED: u8 = 0x02;

/// Write a series in the binary format: 32-byte header, then little-endian
/// f64 samples.
pub fn write_series_binary(path: &Path, series: &SampleSeries, meta: &SeriesMeta) -> Result<()> {
    series.validate()?;
    let mut header = [0u8; 32];
    header[..6].copy_from_slice(BINARY_MAGIC);
    let mut flags = 0u8;
    if meta.bitrate_bps.is_some() {
        flags |= FLAG_BITRATE;
    }
    if meta.seed.is_some() {
        flags |= FLAG_SEED;
    }
    header[6] = flags;
    header[8..12].copy_from_slice(&series.sample_rate_hz.to_le_bytes());
    header[12..16].copy_from_slice(&meta.bitrate_bps.unwrap_or(0).to_le_bytes());
    header[16..24].copy_from_slice(&series.start_time_s.to_le_bytes());
    header[24..32].copy_from_slice(&meta.seed.unwrap_or(0).to_le_bytes());
    let mut file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    file.write_all(&header)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut buf = Vec::with_capacity(series.len() * 8);
    for v in &series.samples {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    file.write_all(&buf)
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a series in the binary format.
pub fn read_series_binary(path: &Path) -> Result<(SampleSeries, SeriesMeta)> {
    let mut file =
        std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    if bytes.len() < 32 || &bytes[..6] != BINARY_MAGIC {
        return Err(parse_err(path, 1, "not a binary series file"));
    }
    if (bytes.len() - 32) % 8 != 0 {
        return Err(parse_err(path, 1, "truncated sample data"));
    }
    let flags = bytes[6];
    let sample_rate = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    let bitrate = u32::from_le_bytes(bytes[12..16].try_into().unwrap());
    let start_time = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let seed = u64::from_le_bytes(bytes[24..32].try_into().unwrap());
    let samples: Vec<f64> = bytes[32..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let mut series = SampleSeries::new(sample_rate, samples)?;
    series.start_time_s = start_time;
    Ok((
        series,
        SeriesMeta {
            bitrate_bps: (flags & FLAG_BITRATE != 0).then_some(bitrate),
            seed: (flags & FLAG_SEED != 0).then_some(seed),
        },
    ))
}

fn label_str(l: SourceLabel) -> &'static str {
    match l {
        SourceLabel::MainOnly => "main",
        SourceLabel::GenuineReflect => "genuine",
        SourceLabel::AttackerReflect => "attacker",
    }
}

fn label_from(s: &str) -> Option<SourceLabel> {
    match s {
        "main" => Some(SourceLabel::MainOnly),
        "genuine" => Some(SourceLabel::GenuineReflect),
        "attacker" => Some(SourceLabel::AttackerReflect),
        _ => None,
    }
}

/// Write the ground-truth sidecar: CSV `index,source,in_movement`.
pub fn write_labels(path: &Path, labeled: &LabeledSeries) -> Result<()> {
    labeled.validate()?;
    let mut in_movement = vec![false; labeled.series.len()];
    for &(a, b) in &labeled.movement_intervals {
        for m in in_movement.iter_mut().take(b).skip(a) {
            *m = true;
        }
    }
    let mut out = String::with_capacity(labeled.series.len() * 12 + 32);
    out.push_str("index,source,in_movement\n");
    for (i, &l) in labeled.source_labels.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{}", label_str(l), u8::from(in_movement[i]));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read the label sidecar back as (labels, in_movement flags).
pub fn read_labels(path: &Path) -> Result<(Vec<SourceLabel>, Vec<bool>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut labels = Vec::new();
    let mut movement = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if idx == 0 {
            if line.trim() != "index,source,in_movement" {
                return Err(parse_err(path, 1, "bad label header"));
            }
            continue;
        }
        let mut parts = line.split(',');
        let (i, src, mv) = (parts.next(), parts.next(), parts.next());
        let (Some(i), Some(src), Some(mv)) = (i, src, mv) else {
            return Err(parse_err(path, lineno, "expected index,source,in_movement"));
        };
        let i: usize = i
            .parse()
            .map_err(|_| parse_err(path, lineno, "bad index"))?;
        if i != labels.len() {
            return Err(parse_err(path, lineno, format!("index {i} out of order")));
        }
        labels.push(
            label_from(src).ok_or_else(|| parse_err(path, lineno, format!("bad source '{src}'")))?,
        );
        movement.push(match mv {
            "0" => false,
            "1" => true,
            other => return Err(parse_err(path, lineno, format!("bad in_movement '{other}'"))),
        });
    }
    Ok((labels, movement))
}

fn group_verdict_str(v: GroupVerdict) -> &'static str {
    match v {
        GroupVerdict::OnBody => "OnBody",
        GroupVerdict::Attacker => "Attacker",
        GroupVerdict::PowerfulAttacker => "PowerfulAttacker",
    }
}

pub fn final_verdict_str(v: FinalVerdict) -> &'static str {
    match v {
        FinalVerdict::OnBody => "OnBody",
        FinalVerdict::Attacker => "Attacker",
        FinalVerdict::Inconclusive => "Inconclusive",
    }
}

/// Process exit code contract: 0 on-body, 1 attacker, 2 inconclusive.
pub fn verdict_exit_code(v: FinalVerdict) -> i32 {
    match v {
        FinalVerdict::OnBody => 0,
        FinalVerdict::Attacker => 1,
        FinalVerdict::Inconclusive => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictFormat {
    Human,
    Csv,
}

/// Render an authentication outcome. CSV rows are
/// `group_index,group_verdict,pre_mean_db,post_mean_db,pre_var,post_var`
/// with a trailing `FINAL,<verdict>,groups_used,,,` row.
pub fn emit_verdict(outcome: &AuthOutcome, format: VerdictFormat) -> String {
    let v = &outcome.verdict;
    match format {
        VerdictFormat::Csv => {
            let mut out =
                String::from("group_index,group_verdict,pre_mean_db,post_mean_db,pre_var,post_var\n");
            for (i, (g, gv)) in outcome.groups.iter().zip(&v.per_group).enumerate() {
                let _ = writeln!(
                    out,
                    "{i},{},{},{},{},{}",
                    group_verdict_str(*gv),
                    g.pre_mean_db,
                    g.post_mean_db,
                    g.pre_var,
                    g.post_var
                );
            }
            let _ = writeln!(
                out,
                "FINAL,{},{},,,",
                final_verdict_str(v.final_verdict),
                v.groups_used
            );
            out
        }
        VerdictFormat::Human => {
            let mut out = String::new();
            for (i, (g, gv)) in outcome.groups.iter().zip(&v.per_group).enumerate() {
                let _ = writeln!(
                    out,
                    "group {i}: {:<16} pre {:7.2} dB  post {:7.2} dB  var {:.3}/{:.3} dB^2",
                    group_verdict_str(*gv),
                    g.pre_mean_db,
                    g.post_mean_db,
                    g.pre_var,
                    g.post_var
                );
            }
            for d in &outcome.diagnostics {
                let _ = writeln!(out, "note: {d}");
            }
            let _ = writeln!(
                out,
                "final: {} ({} group{})",
                final_verdict_str(v.final_verdict),
                v.groups_used,
                if v.groups_used == 1 { "" } else { "s" }
            );
            out
        }
    }
}

const REPORT_HEADER: &str = "label,n_trials,genuine_trials,attacker_trials,genuine_groups,attacker_groups,tp_groups,fp_groups,tp_rate,fp_rate,trial_tp_rate,trial_fp_rate,mean_groups_per_trial,latency_samples";

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Write metric rows as CSV, one row per axis value, in sweep order.
pub fn write_report(path: &Path, rows: &[(String, MetricsReport)]) -> Result<()> {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for (label, r) in rows {
        let _ = writeln!(
            out,
            "{label},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n_trials,
            r.genuine_trials,
            r.attacker_trials,
            r.genuine_groups,
            r.attacker_groups,
            r.tp_groups,
            r.fp_groups,
            opt_f64(r.tp_rate),
            opt_f64(r.fp_rate),
            opt_f64(r.trial_tp_rate),
            opt_f64(r.trial_fp_rate),
            r.mean_groups_per_trial,
            r.latency_samples_used
                .map(|v| v.to_string())
                .unwrap_or_default()
        );
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a report CSV back; exact inverse of [`write_report`].
pub fn read_report(path: &Path) -> Result<Vec<(String, MetricsReport)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if idx == 0 {
            if line.trim() != REPORT_HEADER {
                return Err(parse_err(path, 1, "bad report header"));
            }
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 14 {
            return Err(parse_err(path, lineno, format!("expected 14 columns, got {}", parts.len())));
        }
        let label = parts[0].to_string();
        let usize_at = |i: usize| -> Result<usize> {
            parts[i]
                .parse()
                .map_err(|_| parse_err(path, lineno, format!("bad count '{}'", parts[i])))
        };
        let opt_at = |i: usize| -> Result<Option<f64>> {
            if parts[i].is_empty() {
                Ok(None)
            } else {
                parts[i]
                    .parse()
                    .map(Some)
                    .map_err(|_| parse_err(path, lineno, format!("bad rate '{}'", parts[i])))
            }
        };
        let tp_rate = opt_at(8)?;
        let fp_rate = opt_at(9)?;
        let mut per_axis_breakdown = BTreeMap::new();
        per_axis_breakdown.insert(label.clone(), (tp_rate, fp_rate));
        rows.push((
            label,
            MetricsReport {
                n_trials: usize_at(1)?,
                genuine_trials: usize_at(2)?,
                attacker_trials: usize_at(3)?,
                genuine_groups: usize_at(4)?,
                attacker_groups: usize_at(5)?,
                tp_groups: usize_at(6)?,
                fp_groups: usize_at(7)?,
                tp_rate,
                fp_rate,
                trial_tp_rate: opt_at(10)?,
                trial_fp_rate: opt_at(11)?,
                mean_groups_per_trial: parts[12]
                    .parse()
                    .map_err(|_| parse_err(path, lineno, "bad mean_groups_per_trial"))?,
                latency_samples_used: if parts[13].is_empty() {
                    None
                } else {
                    Some(usize_at(13)?)
                },
                per_axis_breakdown,
            },
        ));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn series() -> SampleSeries {
        SampleSeries::new(100_000, vec![-57.25, -60.5, -58.123456789]).unwrap()
    }

    #[test]
    fn text_round_trip_is_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.rss");
        let meta = SeriesMeta {
            bitrate_bps: Some(10_000),
            seed: Some(42),
        };
        write_series(&path, &series(), &meta).unwrap();
        let (back, meta2) = read_series(&path).unwrap();
        assert_eq!(back, series());
        assert_eq!(meta2, meta);
    }

    #[test]
    fn missing_sample_rate_errors_at_line_one() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.rss");
        std::fs::write(&path, "# bitrate_bps=10000\n-57.0\n").unwrap();
        let err = read_series(&path).unwrap_err();
        assert!(
            matches!(err, Error::Parse { line: 1, .. }),
            "unexpected: {err}"
        );
    }

    #[test]
    fn nan_token_cites_its_line() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.rss");
        let mut text = String::from("# sample_rate_hz=100000\n");
        for i in 0..5 {
            text.push_str(&format!("-{i}.5\n"));
        }
        text.push_str("NaN\n-3.0\n");
        std::fs::write(&path, text).unwrap();
        let err = read_series(&path).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 7),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn unknown_header_key_is_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.rss");
        std::fs::write(&path, "# sample_rate_hz=1000\n# voltage=5\n-1.0\n").unwrap();
        assert!(matches!(
            read_series(&path),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.rssb");
        let meta = SeriesMeta {
            bitrate_bps: None,
            seed: Some(7),
        };
        write_series_binary(&path, &series(), &meta).unwrap();
        let (back, meta2) = read_series_binary(&path).unwrap();
        assert_eq!(back, series());
        assert_eq!(meta2, meta);
        let size = std::fs::metadata(&path).unwrap().len();
        assert_eq!(size, 32 + 3 * 8);
    }

    #[test]
    fn label_round_trip() {
        use crate::scenario::ScenarioSpec;
        let spec = ScenarioSpec::genuine_static();
        let labeled = crate::synth::synthesize(&spec, 3).unwrap();
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.labels");
        write_labels(&path, &labeled).unwrap();
        let (labels, movement) = read_labels(&path).unwrap();
        assert_eq!(labels, labeled.source_labels);
        assert_eq!(movement.len(), labeled.series.len());
        let count = labeled
            .movement_intervals
            .iter()
            .map(|&(a, b)| b - a)
            .sum::<usize>();
        assert_eq!(movement.iter().filter(|&&m| m).count(), count);
    }

    #[test]
    fn report_round_trip_preserves_values() {
        use crate::harness::{run_trials, MetricsReport};
        use crate::pipeline::PipelineParams;
        use crate::scenario::ScenarioSpec;
        let spec = ScenarioSpec::genuine_static();
        let r = run_trials(&spec, &PipelineParams::calibrated(), 3, 11).unwrap();
        let rows: Vec<(String, MetricsReport)> = vec![("all".into(), r)];
        let dir = tempdir().unwrap();
        let path = dir.path().join("report.csv");
        write_report(&path, &rows).unwrap();
        let back = read_report(&path).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn empty_report_is_header_only() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("report.csv");
        write_report(&path, &[]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(read_report(&path).unwrap().is_empty());
    }
}
