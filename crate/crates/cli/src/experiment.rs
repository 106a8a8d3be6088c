use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fbcsf_core::chord_arc::{check_minimum_conditions, extended_profile, ComparisonFunction, ConditionRecord, ProfileReport};
use fbcsf_core::curve::DiscreteCurve;
use fbcsf_core::flow::{self, Classification, Diagnostics, ExtinctionEstimate, FlowTrace};
use fbcsf_core::verification::{self, CheckReport, CheckStatus};
use fbcsf_core::ConvexDomain;
use serde::Serialize;

use crate::config::{ExperimentConfig, Built};
use crate::svg;

#[derive(Serialize)]
struct SnapshotRecord<'a> {
    t: f64,
    vertices: Vec<[f64; 2]>,
    diagnostics: &'a Diagnostics<f64>,
}

#[derive(Serialize)]
pub struct ProfileArtifact<'a> {
    pub report: &'a ProfileReport<f64>,
    pub conditions: Option<ConditionRecord<f64>>,
}

#[derive(Serialize)]
struct CheckLine {
    check: &'static str,
    status: CheckStatus,
    pass: bool,
}

#[derive(Serialize)]
struct Summary {
    classification: Option<Classification>,
    steps: usize,
    t_final: Option<f64>,
    initial_length: f64,
    final_length: Option<f64>,
    extinction: Option<ExtinctionEstimate<f64>>,
    failure: Option<String>,
    checks: Vec<CheckLine>,
    all_checks_passed: bool,
    error: Option<String>,
}

pub fn check_passes(report: &CheckReport<f64>) -> bool {
    matches!(report.status, CheckStatus::Pass | CheckStatus::Inapplicable)
}

fn write(path: PathBuf, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_json(path: PathBuf, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(path, text)
}

/// Profile CSV and JSON report for one curve.
pub fn write_profile(
    dir: &Path,
    stem: &str,
    curve: &DiscreteCurve<f64>,
    domain: &ConvexDomain,
    bins: usize,
    phi: Option<&ComparisonFunction<f64>>,
) -> Result<ProfileReport<f64>> {
    let report = extended_profile(curve, domain, bins, phi)?;
    let conditions = match phi {
        Some(p) => Some(check_minimum_conditions(curve, domain, p, &report)?),
        None => None,
    };
    write(dir.join(format!("{stem}.csv")), report.csv())?;
    write_json(dir.join(format!("{stem}.json")), &ProfileArtifact { report: &report, conditions })?;
    Ok(report)
}

fn run_checks(config: &ExperimentConfig, trace: &FlowTrace<f64>) -> Result<Vec<CheckReport<f64>>> {
    let c = &config.checks;
    let mut out = Vec::new();
    if c.grayson {
        out.push(verification::check_grayson_dichotomy(trace)?);
    }
    if c.monotonicity {
        out.push(verification::check_monotonicity(trace));
    }
    if c.neumann {
        out.push(verification::check_neumann(trace));
    }
    if c.crude_bound {
        out.push(verification::check_crude_bound(trace)?);
    }
    if let Some(upper) = c.type_one {
        out.push(verification::check_type_one(trace, upper));
    }
    if let Some(factor) = c.boundary_avoidance {
        out.push(verification::check_boundary_avoidance(trace, factor)?);
    }
    if let Some(tol) = c.altschuler {
        out.push(verification::check_altschuler(trace, tol));
    }
    if let Some(b) = &c.barrier {
        out.push(verification::check_barrier_preservation(trace, b)?);
    }
    Ok(out)
}

fn write_snapshots(dir: &Path, trace: &FlowTrace<f64>) -> Result<()> {
    let path = dir.join("snapshots.ndjson");
    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = std::io::BufWriter::new(file);
    for s in &trace.snapshots {
        let record = SnapshotRecord {
            t: s.t,
            vertices: s.curve.vertices().iter().map(|p| p.to_f64()).collect(),
            diagnostics: &s.diagnostics,
        };
        serde_json::to_writer(&mut w, &record)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn write_frames(dir: &Path, trace: &FlowTrace<f64>, frames: usize) -> Result<()> {
    let frame_dir = dir.join("frames");
    fs::create_dir_all(&frame_dir)?;
    let n = trace.snapshots.len();
    let bounds = svg::frame_bounds(&trace.domain, &trace.snapshots[0]);
    let mut picks: Vec<usize> = (0..frames).map(|k| if frames == 1 { n - 1 } else { k * (n - 1) / (frames - 1) }).collect();
    picks.dedup();
    for (k, &i) in picks.iter().enumerate() {
        let s = &trace.snapshots[i];
        let rescaled = trace.extinction.and_then(|e| {
            let r = flow::rescale(&s.curve, &trace.domain, e.point, e.time, s.t).ok()?;
            let (frame, _) = trace.domain.project(e.point).ok()?;
            Some((r.vertices, frame.outward_normal))
        });
        let svg = svg::frame(&trace.domain, s, bounds, rescaled.as_ref().map(|(v, n)| (v.as_slice(), *n)));
        write(frame_dir.join(format!("frame_{k:04}.svg")), svg)?;
    }
    Ok(())
}

/// Runs the experiment and writes its artifacts. Returns whether every
/// requested check passed or was inapplicable.
pub fn run(config: &ExperimentConfig, built: Built) -> Result<bool> {
    let dir = config.output_dir();
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let Built { domain, curve, phi } = built;
    let mut summary = Summary {
        classification: None,
        steps: 0,
        t_final: None,
        initial_length: curve.length(),
        final_length: None,
        extinction: None,
        failure: None,
        checks: Vec::new(),
        all_checks_passed: false,
        error: None,
    };
    let result = execute(config, &dir, &domain, &curve, phi.as_ref(), &mut summary);
    if let Err(e) = &result {
        summary.error = Some(format!("{e:#}"));
    }
    write_json(dir.join("summary.json"), &summary)?;
    result
}

fn execute(
    config: &ExperimentConfig,
    dir: &Path,
    domain: &ConvexDomain,
    curve: &DiscreteCurve<f64>,
    phi: Option<&ComparisonFunction<f64>>,
    summary: &mut Summary,
) -> Result<bool> {
    let trace = flow::run(curve, domain, &config.flow, phi)?;
    let last = trace.last();
    summary.classification = Some(trace.classification);
    summary.steps = trace.steps;
    summary.t_final = Some(last.t);
    summary.final_length = Some(last.diagnostics.length);
    summary.extinction = trace.extinction;
    summary.failure = trace.failure.clone();
    write_snapshots(dir, &trace)?;
    if config.profile.enabled {
        write_profile(dir, "profile_initial", &trace.snapshots[0].curve, domain, config.profile.bins, phi)?;
        if last.curve.vertices().len() >= 9 {
            write_profile(dir, "profile_final", &last.curve, domain, config.profile.bins, phi)?;
        }
    }
    let reports = run_checks(config, &trace)?;
    write_json(dir.join("checks.json"), &reports)?;
    summary.checks = reports
        .iter()
        .map(|r| CheckLine { check: r.check, status: r.status, pass: check_passes(r) })
        .collect();
    summary.all_checks_passed = summary.checks.iter().all(|c| c.pass);
    if config.svg.frames > 0 {
        write_frames(dir, &trace, config.svg.frames)?;
    }
    for line in &summary.checks {
        println!("{:<22} {:?}", line.check, line.status);
    }
    println!(
        "{:?} after {} steps at t = {:.6}; outputs in {}",
        trace.classification,
        trace.steps,
        last.t,
        dir.display()
    );
    Ok(summary.all_checks_passed)
}
