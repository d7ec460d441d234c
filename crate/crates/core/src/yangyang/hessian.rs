use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{norm2, Holomorphic, YYError};

/// Residual below which a point counts as critical.
pub const CRITICAL_RESIDUAL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum IndexResult {
    /// Number of negative eigenvalues of the real Hessian of `Re W`.
    Index(usize),
    /// Smallest `|eigenvalue|` below `1e−8 ·` the largest; no index asserted.
    Degenerate { min_abs: f64, max_abs: f64 },
}

impl IndexResult {
    pub fn index(self) -> Option<usize> {
        match self {
            IndexResult::Index(k) => Some(k),
            IndexResult::Degenerate { .. } => None,
        }
    }
}

/// Real `2p × 2p` Hessian of `Re W` in coordinates `(x_1..x_p, y_1..y_p)`.
///
/// With `J` the holomorphic second derivatives, Cauchy-Riemann gives
/// `[[Re J, −Im J], [−Im J, −Re J]]`.
pub fn real_hessian<F: Holomorphic + ?Sized>(
    f: &F,
    w: &[Complex64],
) -> Result<DMatrix<f64>, YYError> {
    let jac = f.jacobian(w)?;
    let p = w.len();
    let mut h = DMatrix::zeros(2 * p, 2 * p);
    for j in 0..p {
        for k in 0..p {
            let z = jac[(j, k)];
            h[(j, k)] = z.re;
            h[(j, p + k)] = -z.im;
            h[(p + j, k)] = -z.im;
            h[(p + j, p + k)] = -z.re;
        }
    }
    Ok(h)
}

/// Morse index of `Re W` at a critical point.
pub fn hessian_index<F: Holomorphic + ?Sized>(
    f: &F,
    w: &[Complex64],
) -> Result<IndexResult, YYError> {
    let residual = norm2(&f.gradient(w)?);
    if residual >= CRITICAL_RESIDUAL {
        return Err(YYError::NotCritical(residual));
    }
    if w.is_empty() {
        return Ok(IndexResult::Index(0));
    }
    let eig = real_hessian(f, w)?.symmetric_eigen().eigenvalues;
    let max_abs = eig.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let min_abs = eig.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
    if min_abs < 1e-8 * max_abs || max_abs == 0.0 {
        return Ok(IndexResult::Degenerate { min_abs, max_abs });
    }
    Ok(IndexResult::Index(eig.iter().filter(|e| **e < 0.0).count()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::yangyang::{airy_function, YYProblem};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn airy_critical_points_have_index_one() {
        let f = airy_function(c(0.0, 1.0)).unwrap();
        for x in [1.0, -1.0] {
            assert_eq!(
                hessian_index(&f, &[c(x, 0.0)]).unwrap(),
                IndexResult::Index(1)
            );
        }
        assert!(matches!(
            hessian_index(&f, &[c(0.5, 0.0)]),
            Err(YYError::NotCritical(_))
        ));
    }

    #[test]
    fn hessian_matches_differences_of_re_w() {
        let p = YYProblem::with_labels(
            1,
            &[(c(0.0, 1.0), &[2]), (c(1.0, -1.0), &[1])],
            &[1, 1],
            0.4,
        )
        .unwrap();
        let w = [c(0.3, 0.2), c(-0.6, 0.9)];
        let h = real_hessian(&p, &w).unwrap();
        let re = |v: &[f64]| {
            let z: Vec<Complex64> = (0..2).map(|j| c(v[j], v[2 + j])).collect();
            p.value(&z).unwrap().re
        };
        let x0 = [w[0].re, w[1].re, w[0].im, w[1].im];
        let e = 1e-4;
        for a in 0..4 {
            for b in 0..4 {
                let shifted = |da: f64, db: f64| {
                    let mut v = x0;
                    v[a] += da;
                    v[b] += db;
                    re(&v)
                };
                let fd = (shifted(e, e) - shifted(e, -e) - shifted(-e, e) + shifted(-e, -e))
                    / (4.0 * e * e);
                assert!(
                    (fd - h[(a, b)]).abs() < 1e-5 * (1.0 + fd.abs()),
                    "{a},{b}: {fd} vs {}",
                    h[(a, b)]
                );
            }
        }
    }

    #[test]
    fn degenerate_reported() {
        struct Flat;
        impl Holomorphic for Flat {
            fn dim(&self) -> usize {
                1
            }
            fn value(&self, _: &[Complex64]) -> Result<Complex64, YYError> {
                Ok(c(0.0, 0.0))
            }
            fn gradient(&self, _: &[Complex64]) -> Result<Vec<Complex64>, YYError> {
                Ok(vec![c(0.0, 0.0)])
            }
            fn jacobian(&self, _: &[Complex64]) -> Result<DMatrix<Complex64>, YYError> {
                Ok(DMatrix::from_element(1, 1, c(0.0, 0.0)))
            }
            fn singular_distance(&self, _: &[Complex64]) -> f64 {
                f64::INFINITY
            }
        }
        assert!(matches!(
            hessian_index(&Flat, &[c(0.0, 0.0)]).unwrap(),
            IndexResult::Degenerate { .. }
        ));
    }
}
