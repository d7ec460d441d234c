use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use yyknot::yangyang::{
    bethe_closed_form_two_punctures, solve_bethe, Seeds, SolveOutcome, SolveSettings, YYProblem,
};
use yyknot::Exec;

use crate::output::{complex_list, json_doc, parse_points};
use crate::{BetheArgs, Format, Report};

pub fn load_problem(path: &Path, c: Option<f64>) -> Result<YYProblem> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let p = YYProblem::from_json(&text).with_context(|| format!("loading {}", path.display()))?;
    Ok(match c {
        Some(c) => p.with_breaking(c)?,
        None => p,
    })
}

/// Random starts in the disc around the punctures' centroid.
fn random_starts(p: &YYProblem, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let zs: Vec<Complex64> = p.punctures().iter().map(|q| q.z).collect();
    let center = if zs.is_empty() {
        Complex64::new(0.0, 0.0)
    } else {
        zs.iter().sum::<Complex64>() / zs.len() as f64
    };
    let radius = zs.iter().map(|z| (z - center).norm()).fold(0.0, f64::max) + p.puncture_scale();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..p.variables())
                .map(|_| {
                    center
                        + Complex64::from_polar(
                            radius * rng.random::<f64>().sqrt(),
                            rng.random::<f64>() * std::f64::consts::TAU,
                        )
                })
                .collect()
        })
        .collect()
}

/// Explicit starts, else cluster seeds when broken, else random starts.
pub fn seeds_for(
    p: &YYProblem,
    starts: &[String],
    splits: &[usize],
    count: usize,
    seed: u64,
) -> Result<Seeds> {
    if !starts.is_empty() {
        return Ok(Seeds::Points(
            starts
                .iter()
                .map(|s| parse_points(s))
                .collect::<Result<_>>()?,
        ));
    }
    if p.breaking() > 0.0 {
        let m = p.variables();
        let d = p.punctures().len();
        if d == 0 {
            bail!("cluster seeds need at least one puncture");
        }
        if d == 2 {
            let Seeds::Clusters(all) = Seeds::two_puncture_splits(m) else {
                unreachable!()
            };
            let chosen = all
                .into_iter()
                .filter(|a| {
                    splits.is_empty() || splits.contains(&a.iter().filter(|&&x| x == 0).count())
                })
                .collect();
            return Ok(Seeds::Clusters(chosen));
        }
        let total = d.checked_pow(m as u32).filter(|&t| t <= 4096);
        let Some(total) = total else {
            bail!("too many cluster assignments; pass --start")
        };
        let assignments = (0..total)
            .map(|mut code| {
                (0..m)
                    .map(|_| {
                        let a = code % d;
                        code /= d;
                        a
                    })
                    .collect()
            })
            .collect();
        return Ok(Seeds::Clusters(assignments));
    }
    Ok(Seeds::Points(random_starts(p, count, seed)))
}

/// Closed form applies when c = 0, two punctures, and no two roots interact.
fn closed_form(p: &YYProblem) -> Option<Vec<Complex64>> {
    let m = p.variables();
    let free = (0..m).all(|j| (0..m).all(|s| s == j || p.color_color(j, s) == 0.0));
    if free && m > 0 {
        bethe_closed_form_two_punctures(p).ok()
    } else {
        None
    }
}

pub fn solve(
    p: &YYProblem,
    seeds: &Seeds,
    continue_from: Option<f64>,
    exec: Exec,
) -> Result<SolveOutcome> {
    let settings = SolveSettings {
        continue_from,
        ..SolveSettings::default()
    };
    Ok(solve_bethe(p, seeds, &settings, exec)?)
}

pub fn run(args: &BetheArgs, format: Format, exec: Exec) -> Result<Report> {
    let p = load_problem(&args.problem, args.c)?;
    let seeds = seeds_for(&p, &args.start, &args.split, args.starts, args.seed)?;
    let out = solve(&p, &seeds, args.continue_from, exec)?;

    let exact = closed_form(&p);
    let closed_gap = exact.as_ref().map(|w| {
        out.points
            .iter()
            .map(|cp| {
                cp.w.iter()
                    .zip(w)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    });
    let closed_ok = closed_gap.is_none_or(|g| g < 1e-10);
    let ok = (p.variables() == 0 || !out.points.is_empty()) && closed_ok;

    let nearest = |w: Complex64| -> usize {
        (0..p.punctures().len())
            .min_by(|&a, &b| {
                (w - p.punctures()[a].z)
                    .norm()
                    .total_cmp(&(w - p.punctures()[b].z).norm())
            })
            .unwrap_or(0)
    };

    let text = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "problem: rank {}, {} punctures, {} roots, c = {}",
                p.rank(),
                p.punctures().len(),
                p.variables(),
                p.breaking()
            );
            if p.variables() == 0 {
                let _ = writeln!(s, "no roots: nothing to solve");
            }
            for (i, cp) in out.points.iter().enumerate() {
                let index = cp
                    .hessian_index
                    .map_or("degenerate".to_string(), |k| k.to_string());
                let _ = writeln!(s, "point {i}: w = {}", complex_list(&cp.w));
                let _ = writeln!(s, "  residual {:.3e}, index {index}", cp.residual_norm);
                if p.breaking() > 0.0 && !p.punctures().is_empty() {
                    let near: Vec<String> =
                        cp.w.iter()
                            .map(|w| format!("z{}", nearest(*w) + 1))
                            .collect();
                    let _ = writeln!(s, "  clusters: {}", near.join(" "));
                }
            }
            for f in &out.failures {
                let _ = writeln!(s, "seed {} failed: {}", f.seed, f.reason);
            }
            if let (Some(w), Some(gap)) = (&exact, closed_gap) {
                let _ = writeln!(s, "closed form: {}", complex_list(w));
                let _ = writeln!(
                    s,
                    "closed form gap: {gap:.3e} ({})",
                    if closed_ok { "match" } else { "MISMATCH" }
                );
            }
            s
        }
        Format::Json => json_doc(
            "bethe",
            json!({
                "rank": p.rank(),
                "c": p.breaking(),
                "points": out.points,
                "failures": out.failures,
                "closed_form": exact,
                "closed_form_gap": closed_gap,
                "ok": ok,
            }),
        ),
    };
    Ok(Report { text, ok })
}
