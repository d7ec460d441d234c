//! Generalized Yang-Yang function: Bethe critical points, gradient flows that
//! keep `Im W` fixed, Hessian index, and the Airy wall-crossing scan.
//!
//! `W` is multivalued, so it is evaluated with principal logarithms only at a
//! flow's starting point. Everything else uses its single-valued derivatives,
//! and `W` along a path is obtained by integrating `dW`.

mod airy;
mod bethe;
mod flow;
mod hessian;
mod problem;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub use airy::{
    airy_flow_settings, airy_function, classify_valley, horizontal_path, stokes_scan,
    thimble_flows, valley_directions, Airy, Crossing, FlowEnd, StokesPoint, StokesReport,
    ThimbleSignature,
};
pub use bethe::{
    bethe_closed_form_two_punctures, cluster_seeds, newton, solve_bethe, CriticalPoint,
    SeedFailure, Seeds, SolveError, SolveOutcome, SolveSettings,
};
pub use flow::{gradient_flow, FlowError, FlowSample, FlowSettings, FlowTrace, StopReason};
pub use hessian::{hessian_index, real_hessian, IndexResult, CRITICAL_RESIDUAL};
pub use problem::{ProblemFile, Puncture, PunctureFile, YYProblem};

use crate::lie_an::LieError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum YYError {
    #[error("punctures {0} and {1} coincide")]
    CoincidentPunctures(usize, usize),
    #[error("color {color} of variable {index} is outside 1..={rank}")]
    BadColor {
        index: usize,
        color: usize,
        rank: usize,
    },
    #[error("puncture {index} has {got} Dynkin labels, expected {rank}")]
    BadWeight {
        index: usize,
        got: usize,
        rank: usize,
    },
    #[error("breaking parameter must be finite and nonnegative, got {0}")]
    BadBreaking(f64),
    #[error("expected {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("singular point: {0}")]
    Singular(String),
    #[error("closed form needs c = 0 and exactly two punctures")]
    NotTwoPuncture,
    #[error("closed form denominator vanishes for variable {0}")]
    ZeroDenominator(usize),
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("not a critical point: residual {0:e}")]
    NotCritical(f64),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("problem file: {0}")]
    File(String),
}

/// A holomorphic function of several complex variables with explicit derivatives.
pub trait Holomorphic: Sync {
    fn dim(&self) -> usize;

    /// Value on the principal branch; used only to seed path continuation.
    fn value(&self, w: &[Complex64]) -> Result<Complex64, YYError>;

    fn gradient(&self, w: &[Complex64]) -> Result<Vec<Complex64>, YYError>;

    /// Matrix of second holomorphic derivatives.
    fn jacobian(&self, w: &[Complex64]) -> Result<DMatrix<Complex64>, YYError>;

    /// Distance from `w` to the nearest singularity (infinite if entire).
    fn singular_distance(&self, w: &[Complex64]) -> f64;
}

pub(crate) fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
