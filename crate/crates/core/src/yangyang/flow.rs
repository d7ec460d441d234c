use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use super::{norm2, Holomorphic, YYError};

/// Integration controls for [`gradient_flow`].
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSettings {
    pub t_max: f64,
    /// Local error bound per step, relative to `1 + |w_j|`.
    pub tol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
    /// Gradient norm below which the flow has reached a critical point.
    pub critical_tol: f64,
    /// Stop once some `|w_j|` exceeds this.
    pub escape_radius: f64,
    /// Stop normally once this close to a singularity.
    pub singular_stop: f64,
    /// Closer than this is an error.
    pub singular_eps: f64,
    /// Flow up `Re W` instead of down.
    pub ascend: bool,
}

impl Default for FlowSettings {
    fn default() -> Self {
        Self {
            t_max: 50.0,
            tol: 1e-10,
            initial_step: 1e-3,
            min_step: 1e-14,
            max_step: 0.25,
            max_steps: 200_000,
            critical_tol: 1e-10,
            escape_radius: 1e3,
            singular_stop: 1e-4,
            singular_eps: 1e-12,
            ascend: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowSample {
    pub t: f64,
    pub w: Vec<Complex64>,
    /// `W` continued along the path from its principal value at the start.
    pub value: Complex64,
    /// Size of the step that produced this sample (0 for the start).
    pub step: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StopReason {
    TMax,
    Critical,
    Escaped,
    NearSingularity,
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowTrace {
    pub samples: Vec<FlowSample>,
    /// `max |Im W(t) − Im W(0)|` over the samples.
    pub im_drift: f64,
    pub stop: StopReason,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("invalid start: {0}")]
    Start(#[from] YYError),
    #[error("flow came within {distance:e} of a singularity at t = {t}")]
    SingularApproach {
        distance: f64,
        t: f64,
        trace: FlowTrace,
    },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64, trace: FlowTrace },
}

impl FlowError {
    /// Samples accumulated before the failure.
    pub fn partial_trace(&self) -> Option<&FlowTrace> {
        match self {
            FlowError::Start(_) => None,
            FlowError::SingularApproach { trace, .. } | FlowError::StepUnderflow { trace, .. } => {
                Some(trace)
            }
        }
    }
}

impl FlowTrace {
    pub fn start(&self) -> &FlowSample {
        &self.samples[0]
    }

    pub fn end(&self) -> &FlowSample {
        self.samples.last().expect("a trace has at least its start")
    }

    /// Conservation bound `1e−6 · (1 + |W(0)|)`.
    pub fn im_tolerance(&self) -> f64 {
        1e-6 * (1.0 + self.start().value.norm())
    }

    pub fn conserves_im(&self) -> bool {
        self.im_drift <= self.im_tolerance()
    }

    /// `Re W` monotone between consecutive samples in the flow direction, up to roundoff.
    pub fn is_monotone(&self, ascending: bool) -> bool {
        // Near a critical point consecutive values can agree to the last bit.
        self.samples.windows(2).all(|p| {
            let (a, b) = (p[0].value.re, p[1].value.re);
            let slack = 4.0 * f64::EPSILON * (1.0 + a.abs());
            if ascending {
                b >= a - slack
            } else {
                b <= a + slack
            }
        })
    }

    /// Columns `t, re_w1, im_w1, …, re_W, im_W, step`.
    pub fn to_csv(&self) -> String {
        let dim = self.start().w.len();
        let mut out = String::from("t");
        for j in 1..=dim {
            let _ = write!(out, ",re_w{j},im_w{j}");
        }
        out.push_str(",re_W,im_W,step\n");
        for s in &self.samples {
            let _ = write!(out, "{:e}", s.t);
            for z in &s.w {
                let _ = write!(out, ",{:e},{:e}", z.re, z.im);
            }
            let _ = writeln!(out, ",{:e},{:e},{:e}", s.value.re, s.value.im, s.step);
        }
        out
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683,
    0.538_469_310_105_683,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn velocity<F: Holomorphic + ?Sized>(
    f: &F,
    w: &[Complex64],
    sign: f64,
) -> Result<Vec<Complex64>, YYError> {
    Ok(f.gradient(w)?
        .into_iter()
        .map(|g| sign * g.conj())
        .collect())
}

/// `∫ dW` along the chord from `a` to `b` by 5-point Gauss-Legendre.
fn chord_integral<F: Holomorphic + ?Sized>(
    f: &F,
    a: &[Complex64],
    b: &[Complex64],
) -> Result<Complex64, YYError> {
    let delta: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS) {
        let s = 0.5 * (node + 1.0);
        let point: Vec<Complex64> = a.iter().zip(&delta).map(|(x, d)| x + s * d).collect();
        let g = f.gradient(&point)?;
        let dot: Complex64 = g.iter().zip(&delta).map(|(gj, dj)| gj * dj).sum();
        total += 0.5 * weight * dot;
    }
    Ok(total)
}

/// Integrate `dw/dt = ∓conj(∂W/∂w)` with Dormand-Prince 5(4) steps.
///
/// `W` is continued sample to sample by integrating `dW` along each step, so
/// `Im W` stays on one branch and its drift measures how well the path
/// follows the flow.
pub fn gradient_flow<F: Holomorphic + ?Sized>(
    f: &F,
    start: &[Complex64],
    settings: &FlowSettings,
) -> Result<FlowTrace, FlowError> {
    if start.len() != f.dim() {
        return Err(YYError::Arity {
            expected: f.dim(),
            got: start.len(),
        }
        .into());
    }
    let sign = if settings.ascend { 1.0 } else { -1.0 };
    let value0 = f.value(start)?;
    let mut k1 = velocity(f, start, sign)?;
    let mut trace = FlowTrace {
        samples: vec![FlowSample {
            t: 0.0,
            w: start.to_vec(),
            value: value0,
            step: 0.0,
        }],
        im_drift: 0.0,
        stop: StopReason::TMax,
    };
    let mut w = start.to_vec();
    let mut value = value0;
    let mut t = 0.0;
    let mut h = settings.initial_step.min(settings.max_step);
    let dim = w.len();

    loop {
        if norm2(&k1) < settings.critical_tol {
            trace.stop = StopReason::Critical;
            return Ok(trace);
        }
        let dist = f.singular_distance(&w);
        if dist < settings.singular_eps {
            return Err(FlowError::SingularApproach {
                distance: dist,
                t,
                trace,
            });
        }
        if dist < settings.singular_stop {
            trace.stop = StopReason::NearSingularity;
            return Ok(trace);
        }
        if w.iter().any(|z| z.norm() > settings.escape_radius) {
            trace.stop = StopReason::Escaped;
            return Ok(trace);
        }
        if t >= settings.t_max {
            trace.stop = StopReason::TMax;
            return Ok(trace);
        }
        if trace.samples.len() > settings.max_steps {
            trace.stop = StopReason::StepLimit;
            return Ok(trace);
        }

        // Keep each step well inside the singularity-free disc around w.
        let speed = norm2(&k1);
        if dist.is_finite() {
            h = h.min(0.25 * dist / speed);
        }
        h = h.min(settings.max_step).min(settings.t_max - t);

        let mut accepted = None;
        while accepted.is_none() {
            if h < settings.min_step {
                return Err(FlowError::StepUnderflow { t, trace });
            }
            match dp_step(f, &w, &k1, h, sign) {
                Ok((next, k7, err)) => {
                    let scale = w
                        .iter()
                        .zip(&err)
                        .map(|(z, e)| e.norm() / (1.0 + z.norm()))
                        .fold(0.0, f64::max);
                    if scale <= settings.tol {
                        let factor = if scale == 0.0 {
                            5.0
                        } else {
                            (0.9 * (settings.tol / scale).powf(0.2)).min(5.0)
                        };
                        accepted = Some((next, k7, h));
                        h *= factor;
                    } else {
                        h *= (0.9 * (settings.tol / scale).powf(0.2)).max(0.1);
                    }
                }
                Err(_) => h *= 0.25,
            }
        }
        let (next, k7, used) = accepted.expect("loop exits with a step");
        let dw = match chord_integral(f, &w, &next) {
            Ok(v) => v,
            Err(_) => {
                let distance = f.singular_distance(&next);
                return Err(FlowError::SingularApproach { distance, t, trace });
            }
        };
        value += dw;
        t += used;
        w = next;
        k1 = k7;
        trace.im_drift = trace.im_drift.max((value.im - value0.im).abs());
        trace.samples.push(FlowSample {
            t,
            w: w.clone(),
            value,
            step: used,
        });
        debug_assert_eq!(w.len(), dim);
    }
}

type StepResult = (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>);

fn dp_step<F: Holomorphic + ?Sized>(
    f: &F,
    w: &[Complex64],
    k1: &[Complex64],
    h: f64,
    sign: f64,
) -> Result<StepResult, YYError> {
    let dim = w.len();
    let mut ks: Vec<Vec<Complex64>> = Vec::with_capacity(7);
    ks.push(k1.to_vec());
    for stage in 1..7 {
        let point: Vec<Complex64> = (0..dim)
            .map(|j| {
                let mut z = w[j];
                for (s, k) in ks.iter().enumerate() {
                    z += h * A[stage][s] * k[j];
                }
                z
            })
            .collect();
        debug_assert!(C[stage] > 0.0);
        ks.push(velocity(f, &point, sign)?);
    }
    let next: Vec<Complex64> = (0..dim)
        .map(|j| w[j] + h * (0..7).map(|s| B5[s] * ks[s][j]).sum::<Complex64>())
        .collect();
    let err: Vec<Complex64> = (0..dim)
        .map(|j| {
            h * (0..7)
                .map(|s| (B5[s] - B4[s]) * ks[s][j])
                .sum::<Complex64>()
        })
        .collect();
    // FSAL: the seventh stage sits at `next`.
    let k7 = ks.pop().expect("seven stages");
    Ok((next, k7, err))
}
