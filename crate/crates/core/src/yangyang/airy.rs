use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::flow::{gradient_flow, FlowError, FlowSettings, FlowTrace, StopReason};
use super::{Holomorphic, YYError};
use crate::exec::Exec;

/// `f(x) = iλ(x³/3 − x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Airy {
    lambda: Complex64,
}

pub fn airy_function(lambda: Complex64) -> Result<Airy, YYError> {
    if lambda == Complex64::new(0.0, 0.0) || !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(YYError::ZeroLambda);
    }
    Ok(Airy { lambda })
}

impl Airy {
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        Complex64::i() * self.lambda * (x * x * x / 3.0 - x)
    }

    pub fn derivative(&self, x: Complex64) -> Complex64 {
        Complex64::i() * self.lambda * (x * x - 1.0)
    }

    /// `[P₊, P₋] = [1, −1]`.
    pub fn critical_points(&self) -> [Complex64; 2] {
        [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]
    }

    /// `[Im f(P₊), Im f(P₋)] = [−(2/3) Re λ, (2/3) Re λ]`.
    pub fn im_at_critical(&self) -> [f64; 2] {
        let v = 2.0 * self.lambda.re / 3.0;
        [-v, v]
    }
}

impl Holomorphic for Airy {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, w: &[Complex64]) -> Result<Complex64, YYError> {
        one(w).map(|x| self.eval(x))
    }

    fn gradient(&self, w: &[Complex64]) -> Result<Vec<Complex64>, YYError> {
        one(w).map(|x| vec![self.derivative(x)])
    }

    fn jacobian(&self, w: &[Complex64]) -> Result<DMatrix<Complex64>, YYError> {
        let x = one(w)?;
        Ok(DMatrix::from_element(
            1,
            1,
            2.0 * Complex64::i() * self.lambda * x,
        ))
    }

    fn singular_distance(&self, _: &[Complex64]) -> f64 {
        f64::INFINITY
    }
}

fn one(w: &[Complex64]) -> Result<Complex64, YYError> {
    match w {
        [x] => Ok(*x),
        _ => Err(YYError::Arity {
            expected: 1,
            got: w.len(),
        }),
    }
}

/// Directions `arg x = (π/2 − arg λ + 2πk)/3`, `k = 0, 1, 2`, along which `Re f → −∞`.
///
/// Valleys are labelled by `k`, which varies continuously with `λ` away from
/// the negative real axis.
pub fn valley_directions(lambda: Complex64) -> [f64; 3] {
    let base = (FRAC_PI_2 - lambda.arg()) / 3.0;
    [0, 1, 2].map(|k| wrap(base + TAU * k as f64 / 3.0))
}

fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// Valley containing `x` within a 20° cone, if any.
pub fn classify_valley(lambda: Complex64, x: Complex64) -> Option<usize> {
    let cone = 20f64.to_radians();
    valley_directions(lambda)
        .iter()
        .position(|d| wrap(x.arg() - d).abs() <= cone)
}

/// How one descending flow from a critical point ended.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum FlowEnd {
    Valley(usize),
    /// Reached the other critical point (index into `[P₊, P₋]`).
    Critical(usize),
    Incomplete(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThimbleSignature {
    pub critical: Complex64,
    pub ends: [FlowEnd; 2],
}

impl ThimbleSignature {
    /// Sorted valley pair when both flows reached a valley.
    pub fn valleys(&self) -> Option<[usize; 2]> {
        match &self.ends {
            [FlowEnd::Valley(a), FlowEnd::Valley(b)] => {
                Some(if a <= b { [*a, *b] } else { [*b, *a] })
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StokesPoint {
    pub lambda: Complex64,
    pub im_plus: f64,
    pub im_minus: f64,
    /// `Im f(P₊) = Im f(P₋)` exactly.
    pub im_tie: bool,
    /// A descending flow from one critical point reaches the other.
    pub shadowing: bool,
    pub connection: bool,
    pub thimbles: [ThimbleSignature; 2],
    pub max_im_drift: f64,
    pub conserved: bool,
}

/// Signature changes between consecutive complete samples on either side of `Re λ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub before: usize,
    pub after: usize,
    /// Indices into `[P₊, P₋]` whose valley pair differs.
    pub changed: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StokesReport {
    pub points: Vec<StokesPoint>,
    pub crossings: Vec<Crossing>,
    /// Connection flagged exactly at the samples with `Re λ = 0`.
    pub connection_iff_tie: bool,
    /// Every crossing of `Re λ = 0` changes exactly one thimble.
    pub one_thimble_changes: bool,
}

impl StokesReport {
    pub fn passed(&self) -> bool {
        self.connection_iff_tie
            && self.one_thimble_changes
            && self.points.iter().all(|p| p.conserved)
    }
}

const LAUNCH_OFFSET: f64 = 1e-4;
const SHADOW_RADIUS: f64 = 1e-3;

/// Settings suited to Airy flows: escape at radius 10.
pub fn airy_flow_settings() -> FlowSettings {
    FlowSettings {
        escape_radius: 10.0,
        t_max: 100.0,
        ..FlowSettings::default()
    }
}

/// The two descending flows from each of `[P₊, P₋]`, launched along the
/// steepest-descent directions `(π − arg f″(P))/2` and its opposite.
pub fn thimble_flows(
    lambda: Complex64,
    settings: &FlowSettings,
) -> Result<[[Result<FlowTrace, FlowError>; 2]; 2], YYError> {
    let f = airy_function(lambda)?;
    Ok(f.critical_points().map(|p| {
        let curvature = 2.0 * Complex64::i() * lambda * p;
        let theta = (PI - curvature.arg()) / 2.0;
        [theta, theta + PI].map(|angle| {
            gradient_flow(
                &f,
                &[p + Complex64::from_polar(LAUNCH_OFFSET, angle)],
                settings,
            )
        })
    }))
}

fn scan_point(lambda: Complex64, settings: &FlowSettings) -> Result<StokesPoint, YYError> {
    let f = airy_function(lambda)?;
    let cps = f.critical_points();
    let [im_plus, im_minus] = f.im_at_critical();
    let flows = thimble_flows(lambda, settings)?;
    let mut max_drift = 0.0f64;
    let mut conserved = true;
    let mut shadowing = false;
    let mut thimbles = Vec::with_capacity(2);
    for (i, pair) in flows.iter().enumerate() {
        let ends = [0, 1].map(|k| match &pair[k] {
            Ok(trace) => {
                max_drift = max_drift.max(trace.im_drift);
                conserved &= trace.conserves_im();
                let end = trace.end().w[0];
                let other = 1 - i;
                if (end - cps[other]).norm() < SHADOW_RADIUS {
                    shadowing = true;
                    FlowEnd::Critical(other)
                } else if trace.stop == StopReason::Escaped {
                    classify_valley(lambda, end)
                        .map(FlowEnd::Valley)
                        .unwrap_or_else(|| {
                            FlowEnd::Incomplete(format!("end {end} outside every valley cone"))
                        })
                } else {
                    FlowEnd::Incomplete(format!("stopped ({:?}) at {end}", trace.stop))
                }
            }
            Err(e) => FlowEnd::Incomplete(e.to_string()),
        });
        thimbles.push(ThimbleSignature {
            critical: cps[i],
            ends,
        });
    }
    let thimbles: [ThimbleSignature; 2] = thimbles.try_into().expect("two critical points");
    let im_tie = im_plus == im_minus;
    Ok(StokesPoint {
        lambda,
        im_plus,
        im_minus,
        im_tie,
        shadowing,
        connection: im_tie && shadowing,
        thimbles,
        max_im_drift: max_drift,
        conserved,
    })
}

/// Descending flows from both sides of `P±` for each `λ` on the path.
pub fn stokes_scan(
    path: &[Complex64],
    settings: &FlowSettings,
    exec: Exec,
) -> Result<StokesReport, YYError> {
    if let Some(bad) = path.iter().find(|l| **l == Complex64::new(0.0, 0.0)) {
        return Err(airy_function(*bad).unwrap_err());
    }
    let points = exec
        .map(path, |l| scan_point(*l, settings))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let connection_iff_tie = points.iter().all(|p| p.connection == (p.lambda.re == 0.0));

    let complete: Vec<usize> = (0..points.len())
        .filter(|&i| {
            points[i].lambda.re != 0.0 && points[i].thimbles.iter().all(|t| t.valleys().is_some())
        })
        .collect();
    let mut crossings = Vec::new();
    for pair in complete.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let side = |i: usize| points[i].lambda.re.signum();
        if side(a) == side(b) {
            continue;
        }
        let changed = (0..2)
            .filter(|&k| points[a].thimbles[k].valleys() != points[b].thimbles[k].valleys())
            .collect();
        crossings.push(Crossing {
            before: a,
            after: b,
            changed,
        });
    }
    let one_thimble_changes =
        !crossings.is_empty() && crossings.iter().all(|c| c.changed.len() == 1);
    Ok(StokesReport {
        points,
        crossings,
        connection_iff_tie,
        one_thimble_changes,
    })
}

/// `λ = a + i b` for `a` from `a_start` to `a_end` in `samples` equal steps.
pub fn horizontal_path(a_start: f64, a_end: f64, b: f64, samples: usize) -> Vec<Complex64> {
    let last = samples.saturating_sub(1).max(1) as f64;
    (0..samples)
        .map(|k| {
            let s = k as f64 / last;
            // Endpoint-symmetric form keeps the midpoint exact for symmetric ranges.
            Complex64::new(a_start * (1.0 - s) + a_end * s, b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn critical_values() {
        assert_eq!(
            airy_function(c(1.0, 0.0)).unwrap().im_at_critical(),
            [-2.0 / 3.0, 2.0 / 3.0]
        );
        assert_eq!(
            airy_function(c(0.0, 1.0)).unwrap().im_at_critical(),
            [-0.0, 0.0]
        );
        assert_eq!(
            airy_function(c(-1.0, 0.0)).unwrap().im_at_critical()[0],
            2.0 / 3.0
        );
        assert_eq!(airy_function(c(0.0, 0.0)), Err(YYError::ZeroLambda));
        let f = airy_function(c(0.7, -0.4)).unwrap();
        for (p, im) in f.critical_points().iter().zip(f.im_at_critical()) {
            assert!(f.derivative(*p).norm() < 1e-15);
            assert!((f.eval(*p).im - im).abs() < 1e-15);
        }
    }

    #[test]
    fn valleys_send_re_f_down() {
        for lambda in [c(1.0, 1.0), c(0.0, 1.0), c(-2.0, 0.5), c(0.3, -1.0)] {
            let f = airy_function(lambda).unwrap();
            for d in valley_directions(lambda) {
                let x = Complex64::from_polar(50.0, d);
                assert!(f.eval(x).re < -1e4);
                assert_eq!(
                    classify_valley(lambda, x),
                    valley_directions(lambda).iter().position(|e| *e == d)
                );
            }
        }
        assert_eq!(classify_valley(c(0.0, 1.0), c(1.0, 0.0)), Some(0));
        assert_eq!(
            classify_valley(c(0.0, 1.0), Complex64::from_polar(1.0, PI / 3.0)),
            None
        );
    }

    #[test]
    fn tie_and_connection_at_imaginary_lambda() {
        let s = airy_flow_settings();
        let at = scan_point(c(0.0, 1.0), &s).unwrap();
        assert!(at.im_tie && at.shadowing && at.connection);
        assert_eq!(at.thimbles[0].ends[1], FlowEnd::Critical(1));
        let off = scan_point(c(1.0, 1.0), &s).unwrap();
        assert!(!off.im_tie && !off.connection);
        assert!(off.thimbles.iter().all(|t| t.valleys().is_some()));
        assert!(off.conserved);
    }

    #[test]
    fn scan_changes_one_thimble() {
        let path = horizontal_path(1.0, -1.0, 1.0, 11);
        assert_eq!(path[5].re, 0.0);
        let seq = stokes_scan(&path, &airy_flow_settings(), Exec::Sequential).unwrap();
        assert!(seq.passed(), "{:#?}", seq.crossings);
        assert_eq!(seq.crossings.len(), 1);
        assert_eq!(seq.crossings[0].changed, vec![0]);
        let par = stokes_scan(&path, &airy_flow_settings(), Exec::Parallel).unwrap();
        assert_eq!(seq, par);
    }
}
