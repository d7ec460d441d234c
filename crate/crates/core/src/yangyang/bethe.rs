use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use super::hessian::{hessian_index, CRITICAL_RESIDUAL};
use super::{norm2, Holomorphic, YYError, YYProblem};
use crate::exec::Exec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub w: Vec<Complex64>,
    pub residual_norm: f64,
    pub hessian_index: Option<usize>,
}

/// Where Newton starts.
#[derive(Clone, Debug, PartialEq)]
pub enum Seeds {
    Points(Vec<Vec<Complex64>>),
    /// One assignment per seed: the puncture each variable clusters at.
    Clusters(Vec<Vec<usize>>),
}

impl Seeds {
    /// All `(s, p − s)` splits: the first `s` variables at puncture 0, the rest at 1.
    pub fn two_puncture_splits(variables: usize) -> Self {
        Seeds::Clusters(
            (0..=variables)
                .rev()
                .map(|s| (0..variables).map(|j| usize::from(j >= s)).collect())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveSettings {
    pub max_iter: usize,
    /// Solve first at this breaking value and walk to the problem's own.
    pub continue_from: Option<f64>,
    pub ratio: f64,
    /// Minimum distance to punctures and between roots, relative to the puncture scale.
    pub admissible_tol: f64,
    /// Points this close (relative) after sorting same-colored roots are duplicates.
    pub dedup_tol: f64,
}

impl Default for SolveSettings {
    fn default() -> Self {
        Self {
            max_iter: 200,
            continue_from: None,
            ratio: 0.7,
            admissible_tol: 1e-9,
            dedup_tol: 1e-8,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("Newton diverged")]
    Diverged,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("line search stalled at residual {0:e}")]
    Stalled(f64),
    #[error("iterate became inadmissible (collision distance {0:e})")]
    Inadmissible(f64),
    #[error(transparent)]
    Problem(#[from] YYError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedFailure {
    pub seed: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveOutcome {
    pub points: Vec<CriticalPoint>,
    pub failures: Vec<SeedFailure>,
}

/// `w_j = ((α,λ₂) z₁ + (α,λ₁) z₂) / ((α,λ₁) + (α,λ₂))`, the unbroken two-puncture
/// solution. It solves the Bethe system only when the roots do not interact
/// (one root, or mutually orthogonal colors).
pub fn bethe_closed_form_two_punctures(p: &YYProblem) -> Result<Vec<Complex64>, YYError> {
    if p.breaking() != 0.0 || p.punctures().len() != 2 {
        return Err(YYError::NotTwoPuncture);
    }
    let (z1, z2) = (p.punctures()[0].z, p.punctures()[1].z);
    let mut w = Vec::with_capacity(p.variables());
    for j in 0..p.variables() {
        let (k1, k2) = (p.color_weight(j, 0), p.color_weight(j, 1));
        if k1 + k2 == 0.0 {
            return Err(YYError::ZeroDenominator(j));
        }
        let wj = (k2 * z1 + k1 * z2) / (k1 + k2);
        if wj == z1 || wj == z2 {
            return Err(YYError::Singular(format!("w{j} lands on a puncture")));
        }
        w.push(wj);
    }
    Ok(w)
}

/// Seeds on circles of radius `(min puncture distance)/100` around the assigned punctures.
pub fn cluster_seeds(p: &YYProblem, assignment: &[usize]) -> Result<Vec<Complex64>, YYError> {
    if assignment.len() != p.variables() {
        return Err(YYError::Arity {
            expected: p.variables(),
            got: assignment.len(),
        });
    }
    let radius = p.puncture_scale() / 100.0;
    let mut w = vec![Complex64::new(0.0, 0.0); assignment.len()];
    for (a, puncture) in p.punctures().iter().enumerate() {
        let members: Vec<usize> = (0..assignment.len())
            .filter(|&j| assignment[j] == a)
            .collect();
        let m = members.len() as f64;
        for (k, &j) in members.iter().enumerate() {
            let angle = 0.3 + std::f64::consts::TAU * k as f64 / m;
            w[j] = puncture.z + Complex64::from_polar(radius, angle);
        }
    }
    if let Some(&bad) = assignment.iter().find(|&&a| a >= p.punctures().len()) {
        return Err(YYError::Singular(format!(
            "cluster target {bad} is not a puncture"
        )));
    }
    Ok(w)
}

/// `F_j = ∂_jW · Π_a (w_j − z_a)`, its Jacobian, and `∂W` itself.
///
/// Clearing the puncture poles keeps `|F|` growing at infinity, so a line
/// search on `|F|` cannot be lured outward the way one on `|∂W|` can.
/// `(F, ∂F/∂w, ∂W/∂w)` at `w`.
type Cleared = (Vec<Complex64>, DMatrix<Complex64>, Vec<Complex64>);

fn cleared(p: &YYProblem, w: &[Complex64]) -> Result<Cleared, YYError> {
    let g = p.gradient(w)?;
    let mut jac = p.jacobian(w)?;
    let m = w.len();
    let mut f = Vec::with_capacity(m);
    for j in 0..m {
        let prod: Complex64 = p.punctures().iter().map(|q| w[j] - q.z).product();
        let log_deriv: Complex64 = p.punctures().iter().map(|q| 1.0 / (w[j] - q.z)).sum();
        for k in 0..m {
            jac[(j, k)] *= prod;
        }
        jac[(j, j)] += g[j] * prod * log_deriv;
        f.push(g[j] * prod);
    }
    Ok((f, jac, g))
}

/// Damped Newton on `∂W = 0`, stepping on the pole-cleared system.
pub fn newton(
    p: &YYProblem,
    start: &[Complex64],
    settings: &SolveSettings,
) -> Result<CriticalPoint, SolveError> {
    let scale = p.puncture_scale();
    let min_dist = settings.admissible_tol * scale;
    let far = 1e6 * scale + p.punctures().iter().map(|q| q.z.norm()).fold(0.0, f64::max);
    let mut w = start.to_vec();
    let (mut f, mut jac, g) = cleared(p, &w)?;
    let mut merit = norm2(&f);
    let mut residual = norm2(&g);
    let mut polish = 0;
    for _ in 0..settings.max_iter {
        if residual < CRITICAL_RESIDUAL {
            // A couple of extra steps pin the root to full precision.
            polish += 1;
            if polish > 2 {
                break;
            }
        }
        if w.is_empty() {
            break;
        }
        let rhs = DVector::from_iterator(w.len(), f.iter().map(|z| -z));
        let Some(delta) = jac.clone().lu().solve(&rhs) else {
            return Err(SolveError::Stalled(residual));
        };
        let mut t = 1.0;
        let mut next = None;
        for _ in 0..40 {
            let trial: Vec<Complex64> =
                w.iter().zip(delta.iter()).map(|(a, d)| a + t * d).collect();
            if p.singular_distance(&trial) > min_dist {
                if let Ok(state) = cleared(p, &trial) {
                    let mt = norm2(&state.0);
                    if mt < (1.0 - 1e-4 * t) * merit || (polish > 0 && mt <= merit) {
                        next = Some((trial, state, mt));
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        match next {
            Some((trial, (ft, jt, gt), mt)) => {
                w = trial;
                f = ft;
                jac = jt;
                merit = mt;
                residual = norm2(&gt);
            }
            None if residual < CRITICAL_RESIDUAL => break,
            None => return Err(SolveError::Stalled(residual)),
        }
        if w.iter().any(|z| z.norm() > far) {
            return Err(SolveError::Diverged);
        }
    }
    if residual >= CRITICAL_RESIDUAL {
        return Err(SolveError::NoConvergence {
            iterations: settings.max_iter,
            residual,
        });
    }
    let dist = p.singular_distance(&w);
    if dist <= min_dist {
        return Err(SolveError::Inadmissible(dist));
    }
    Ok(CriticalPoint {
        w,
        residual_norm: residual,
        hessian_index: None,
    })
}

fn schedule(from: f64, to: f64, ratio: f64) -> Vec<f64> {
    let mut out = vec![from];
    let mut c = from;
    if from > to {
        let floor = if to > 0.0 { to } else { from * 1e-4 };
        while c * ratio > floor {
            c *= ratio;
            out.push(c);
        }
    } else {
        while c / ratio < to {
            c /= ratio;
            out.push(c);
        }
    }
    if *out.last().expect("nonempty") != to {
        out.push(to);
    }
    out
}

fn solve_one(
    p: &YYProblem,
    start: &[Complex64],
    settings: &SolveSettings,
) -> Result<CriticalPoint, SolveError> {
    let Some(c_high) = settings.continue_from else {
        return newton(p, start, settings);
    };
    let mut w = start.to_vec();
    let mut last = None;
    for c in schedule(c_high, p.breaking(), settings.ratio) {
        let stage = p.with_breaking(c)?;
        let cp = newton(&stage, &w, settings)?;
        w = cp.w.clone();
        last = Some(cp);
    }
    Ok(last.expect("schedule is nonempty"))
}

fn canonical(p: &YYProblem, w: &[Complex64]) -> Vec<Complex64> {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| {
        p.colors()[a]
            .cmp(&p.colors()[b])
            .then(w[a].re.total_cmp(&w[b].re))
            .then(w[a].im.total_cmp(&w[b].im))
    });
    order.into_iter().map(|j| w[j]).collect()
}

/// Newton from every seed, optionally by continuation in the breaking
/// parameter, then deduplicated up to permutations of same-colored roots.
pub fn solve_bethe(
    p: &YYProblem,
    seeds: &Seeds,
    settings: &SolveSettings,
    exec: Exec,
) -> Result<SolveOutcome, YYError> {
    if p.variables() == 0 {
        return Ok(SolveOutcome {
            points: Vec::new(),
            failures: Vec::new(),
        });
    }
    let starts: Vec<Vec<Complex64>> = match seeds {
        Seeds::Points(points) => {
            for s in points {
                if s.len() != p.variables() {
                    return Err(YYError::Arity {
                        expected: p.variables(),
                        got: s.len(),
                    });
                }
            }
            points.clone()
        }
        Seeds::Clusters(assignments) => assignments
            .iter()
            .map(|a| cluster_seeds(p, a))
            .collect::<Result<_, _>>()?,
    };
    let results = exec.map(&starts, |s| {
        solve_one(p, s, settings).map(|mut cp| {
            cp.hessian_index = hessian_index(p, &cp.w).ok().and_then(|r| r.index());
            cp
        })
    });

    let scale = p.puncture_scale();
    let mut points: Vec<CriticalPoint> = Vec::new();
    let mut keys: Vec<Vec<Complex64>> = Vec::new();
    let mut failures = Vec::new();
    for (seed, r) in results.into_iter().enumerate() {
        match r {
            Ok(cp) => {
                let key = canonical(p, &cp.w);
                let dup = keys.iter().any(|k| {
                    k.iter()
                        .zip(&key)
                        .all(|(a, b)| (a - b).norm() <= settings.dedup_tol * (scale + a.norm()))
                });
                if !dup {
                    keys.push(key);
                    points.push(cp);
                }
            }
            Err(e) => failures.push(SeedFailure {
                seed,
                reason: e.to_string(),
            }),
        }
    }
    Ok(SolveOutcome { points, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two(n: usize, l1: &[i64], l2: &[i64], colors: &[usize], cb: f64) -> YYProblem {
        YYProblem::with_labels(n, &[(c(0.0, 1.0), l1), (c(0.0, -1.0), l2)], colors, cb).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let p = two(1, &[1], &[1], &[1], 0.0);
        let w = bethe_closed_form_two_punctures(&p).unwrap();
        assert!(w[0].norm() < 1e-15);
        assert!(p.gradient(&w).unwrap()[0].norm() <= 1e-12);

        let p = two(2, &[1, 0], &[0, 1], &[1], 0.0);
        assert!(matches!(
            bethe_closed_form_two_punctures(&p),
            Err(YYError::Singular(_))
        ));
        let p = two(2, &[0, 1], &[0, 1], &[1], 0.0);
        assert_eq!(
            bethe_closed_form_two_punctures(&p),
            Err(YYError::ZeroDenominator(0))
        );
        let p = two(1, &[1], &[1], &[1], 1.0);
        assert_eq!(
            bethe_closed_form_two_punctures(&p),
            Err(YYError::NotTwoPuncture)
        );
    }

    #[test]
    fn solver_matches_closed_form() {
        let p = YYProblem::with_labels(1, &[(c(0.3, 0.2), &[3]), (c(-1.0, 2.0), &[1])], &[1], 0.0)
            .unwrap();
        let out = solve_bethe(
            &p,
            &Seeds::Points(vec![vec![c(0.0, 0.5)]]),
            &SolveSettings::default(),
            Exec::Sequential,
        )
        .unwrap();
        let exact = bethe_closed_form_two_punctures(&p).unwrap();
        assert_eq!(out.points.len(), 1);
        assert!((out.points[0].w[0] - exact[0]).norm() < 1e-10);
        assert_eq!(out.points[0].hessian_index, Some(1));
    }

    #[test]
    fn single_pole_has_no_root() {
        let p = YYProblem::with_labels(1, &[(c(0.0, 0.0), &[1])], &[1], 0.0).unwrap();
        let seeds = Seeds::Points(vec![vec![c(0.5, 0.1)], vec![c(-2.0, 1.0)]]);
        let out = solve_bethe(&p, &seeds, &SolveSettings::default(), Exec::Sequential).unwrap();
        assert!(out.points.is_empty());
        assert_eq!(out.failures.len(), 2);
    }

    #[test]
    fn no_variables() {
        let p = two(1, &[1], &[1], &[], 0.0);
        let out = solve_bethe(
            &p,
            &Seeds::Clusters(vec![vec![]]),
            &SolveSettings::default(),
            Exec::Parallel,
        )
        .unwrap();
        assert!(out.points.is_empty() && out.failures.is_empty());
    }

    #[test]
    fn large_c_clusters() {
        let p = two(1, &[1], &[1], &[1, 1], 1e3 / 2.0);
        let settings = SolveSettings {
            continue_from: Some(50.0),
            ..SolveSettings::default()
        };
        let out = solve_bethe(
            &p,
            &Seeds::two_puncture_splits(2),
            &settings,
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(out.points.len(), 1, "{:?}", out.failures);
        let cp = &out.points[0];
        let mut near: Vec<usize> =
            cp.w.iter()
                .map(|w| {
                    if (w - c(0.0, 1.0)).norm() < (w - c(0.0, -1.0)).norm() {
                        0
                    } else {
                        1
                    }
                })
                .collect();
        near.sort();
        assert_eq!(near, vec![0, 1]);
        for w in &cp.w {
            let d = (w - c(0.0, 1.0)).norm().min((w - c(0.0, -1.0)).norm());
            assert!(d < 1e-2);
        }
        assert_eq!(cp.hessian_index, Some(2));
    }

    #[test]
    fn dedup_and_exec_modes_agree() {
        let p = two(1, &[2], &[1], &[1], 0.0);
        let seeds = Seeds::Points(vec![
            vec![c(0.1, 0.0)],
            vec![c(-0.1, 0.1)],
            vec![c(0.2, -0.2)],
        ]);
        let a = solve_bethe(&p, &seeds, &SolveSettings::default(), Exec::Sequential).unwrap();
        let b = solve_bethe(&p, &seeds, &SolveSettings::default(), Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.points.len(), 1);
    }

    #[test]
    fn schedules() {
        let s = schedule(10.0, 1.0, 0.7);
        assert_eq!(s.first(), Some(&10.0));
        assert_eq!(s.last(), Some(&1.0));
        assert!(s.windows(2).all(|w| w[1] < w[0]));
        let up = schedule(1.0, 10.0, 0.7);
        assert!(up.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(schedule(2.0, 2.0, 0.7), vec![2.0]);
        assert_eq!(*schedule(1.0, 0.0, 0.7).last().unwrap(), 0.0);
    }
}
