use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde_json::json;
use yyknot::yangyang::{
    airy_flow_settings, gradient_flow, horizontal_path, stokes_scan, thimble_flows, FlowEnd,
    FlowError, FlowSettings, FlowTrace, StokesPoint,
};
use yyknot::Exec;

use crate::bethe::{load_problem, seeds_for, solve};
use crate::output::{complex, complex_list, json_doc, parse_points};
use crate::{FlowArgs, Format, Report, StartAt};

const THIMBLE_NAMES: [&str; 2] = ["P+", "P-"];

fn write_csv(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

/// Several traces in one CSV with a leading `flow` label column.
fn labelled_csv(traces: &[(String, &FlowTrace)]) -> String {
    let mut out = String::new();
    for (i, (label, trace)) in traces.iter().enumerate() {
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        let header = lines.next().unwrap_or_default();
        if i == 0 {
            let _ = writeln!(out, "flow,{header}");
        }
        for line in lines {
            let _ = writeln!(out, "{label},{line}");
        }
    }
    out
}

fn end_text(e: &FlowEnd) -> String {
    match e {
        FlowEnd::Valley(k) => format!("valley {k}"),
        FlowEnd::Critical(i) => format!("reaches {}", THIMBLE_NAMES[*i]),
        FlowEnd::Incomplete(why) => format!("incomplete ({why})"),
    }
}

fn point_text(s: &mut String, p: &StokesPoint) {
    let _ = writeln!(s, "lambda = {}", complex(p.lambda));
    let _ = writeln!(s, "  Im f(P+) = {}, Im f(P-) = {}", p.im_plus, p.im_minus);
    for (name, t) in THIMBLE_NAMES.iter().zip(&p.thimbles) {
        let _ = writeln!(
            s,
            "  thimble {name}: {}, {}",
            end_text(&t.ends[0]),
            end_text(&t.ends[1])
        );
    }
    let _ = writeln!(s, "  max im_drift = {:.3e}", p.max_im_drift);
    let verdict = if p.connection {
        "connection detected (Stokes ray)"
    } else {
        "no connection"
    };
    let _ = writeln!(s, "  {verdict}");
}

fn settings(args: &FlowArgs, base: FlowSettings) -> Result<FlowSettings> {
    if !(args.tol.is_finite() && args.tol > 0.0 && args.t_max.is_finite() && args.t_max > 0.0) {
        bail!("--tol and --t-max must be positive");
    }
    Ok(FlowSettings {
        tol: args.tol,
        t_max: args.t_max,
        ascend: args.ascend,
        ..base
    })
}

fn airy(args: &FlowArgs, a: f64, b: f64, format: Format, exec: Exec) -> Result<Report> {
    let lambda = Complex64::new(a, b);
    let s = settings(args, airy_flow_settings())?;
    let report = stokes_scan(&[lambda], &s, exec)?;
    let point = &report.points[0];
    if let Some(path) = &args.out {
        let flows = thimble_flows(lambda, &s)?;
        let mut traces = Vec::new();
        for (name, pair) in THIMBLE_NAMES.iter().zip(&flows) {
            for (k, r) in pair.iter().enumerate() {
                let trace = match r {
                    Ok(t) => Some(t),
                    Err(e) => e.partial_trace(),
                };
                if let Some(t) = trace {
                    traces.push((format!("{name}/{k}"), t));
                }
            }
        }
        write_csv(path, &labelled_csv(&traces))?;
    }
    let complete = point
        .thimbles
        .iter()
        .all(|t| t.ends.iter().all(|e| !matches!(e, FlowEnd::Incomplete(_))));
    let ok = point.conserved && complete;
    let text = match format {
        Format::Text => {
            let mut s = String::new();
            point_text(&mut s, point);
            s
        }
        Format::Json => json_doc("flow", json!({ "airy": point, "ok": ok })),
    };
    Ok(Report { text, ok })
}

fn airy_scan(args: &FlowArgs, v: &[f64], format: Format, exec: Exec) -> Result<Report> {
    let samples = v[3];
    if samples < 2.0 || samples.fract() != 0.0 {
        bail!("SAMPLES must be an integer of at least 2");
    }
    let path = horizontal_path(v[0], v[1], v[2], samples as usize);
    if path.iter().any(|l| l.norm() == 0.0) {
        bail!("the scan path passes through lambda = 0");
    }
    let s = settings(args, airy_flow_settings())?;
    let report = stokes_scan(&path, &s, exec)?;
    let ok = report.passed();
    let text = match format {
        Format::Text => {
            let mut s = String::new();
            for p in &report.points {
                point_text(&mut s, p);
            }
            for c in &report.crossings {
                let names: Vec<&str> = c.changed.iter().map(|&i| THIMBLE_NAMES[i]).collect();
                let _ = writeln!(
                    s,
                    "crossing between samples {} and {}: changed [{}]",
                    c.before,
                    c.after,
                    names.join(", ")
                );
            }
            let _ = writeln!(
                s,
                "connection iff Re lambda = 0: {}",
                report.connection_iff_tie
            );
            let _ = writeln!(
                s,
                "exactly one thimble changes per crossing: {}",
                report.one_thimble_changes
            );
            let _ = writeln!(s, "stokes verdict: {}", if ok { "PASS" } else { "FAIL" });
            s
        }
        Format::Json => json_doc("flow", json!({ "scan": report, "ok": ok })),
    };
    Ok(Report { text, ok })
}

fn problem_flow(args: &FlowArgs, path: &Path, format: Format, exec: Exec) -> Result<Report> {
    let p = load_problem(path, args.c)?;
    let start = match (&args.start, args.start_at) {
        (Some(s), None) => parse_points(s)?,
        (None, Some(StartAt::Critical)) => {
            let seeds = seeds_for(&p, &[], &[], 8, 0)?;
            let out = solve(&p, &seeds, None, exec)?;
            match out.points.into_iter().next() {
                Some(cp) => cp.w,
                None => bail!("no critical point found to start from"),
            }
        }
        _ => bail!("give exactly one of --start or --start-at"),
    };
    let s = settings(args, FlowSettings::default())?;
    let (trace, failure) = match gradient_flow(&p, &start, &s) {
        Ok(t) => (t, None),
        Err(FlowError::Start(e)) => return Err(e.into()),
        Err(e) => (
            e.partial_trace()
                .cloned()
                .expect("integration errors keep their trace"),
            Some(e.to_string()),
        ),
    };
    if let Some(out) = &args.out {
        write_csv(out, &trace.to_csv())?;
    }
    let conserved = trace.conserves_im();
    let ok = failure.is_none() && conserved;
    let text = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "start: {}", complex_list(&trace.start().w));
            let _ = writeln!(
                s,
                "end: {} at t = {}",
                complex_list(&trace.end().w),
                trace.end().t
            );
            let _ = writeln!(s, "samples: {}", trace.samples.len());
            match &failure {
                Some(why) => {
                    let _ = writeln!(s, "failed: {why}; last good sample shown as end");
                }
                None => {
                    let _ = writeln!(s, "stop: {:?}", trace.stop);
                }
            }
            let _ = writeln!(
                s,
                "im_drift: {:.3e} (bound {:.3e}, {})",
                trace.im_drift,
                trace.im_tolerance(),
                if conserved { "conserved" } else { "VIOLATED" }
            );
            s
        }
        Format::Json => json_doc(
            "flow",
            json!({
                "start": trace.start().w,
                "end": trace.end().w,
                "t_end": trace.end().t,
                "samples": trace.samples.len(),
                "stop": trace.stop,
                "failure": failure,
                "im_drift": trace.im_drift,
                "im_tolerance": trace.im_tolerance(),
                "ok": ok,
            }),
        ),
    };
    Ok(Report { text, ok })
}

pub fn run(args: &FlowArgs, format: Format, exec: Exec) -> Result<Report> {
    if let Some(v) = &args.airy {
        return airy(args, v[0], v[1], format, exec);
    }
    if let Some(v) = &args.airy_scan {
        return airy_scan(args, v, format, exec);
    }
    match &args.problem {
        Some(path) => problem_flow(args, path, format, exec),
        None => bail!("give a problem file, --airy A B, or --airy-scan A0 A1 B SAMPLES"),
    }
}
