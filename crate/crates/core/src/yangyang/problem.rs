use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{Holomorphic, YYError};
use crate::lie_an::{CartanData, WeightVector};

/// A marked point carrying a highest weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Puncture {
    pub z: Complex64,
    pub weight: WeightVector,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PunctureFile {
    pub re: f64,
    pub im: f64,
    pub dynkin_labels: Vec<i64>,
}

/// On-disk form of a problem.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProblemFile {
    pub rank: usize,
    pub punctures: Vec<PunctureFile>,
    #[serde(default)]
    pub colors: Vec<usize>,
    #[serde(default)]
    pub c: f64,
}

/// Yang-Yang data with all pairings precomputed in floating point.
///
/// `color_weight[j][a] = (α_{i_j}, λ_a)`, `color_color[j][s] = (α_{i_j}, α_{i_s})`.
#[derive(Clone, Debug)]
pub struct YYProblem {
    n: usize,
    punctures: Vec<Puncture>,
    colors: Vec<usize>,
    c: f64,
    color_weight: Vec<Vec<f64>>,
    color_color: Vec<Vec<f64>>,
    constant: Complex64,
}

impl YYProblem {
    pub fn new(
        n: usize,
        punctures: Vec<Puncture>,
        colors: Vec<usize>,
        c: f64,
    ) -> Result<Self, YYError> {
        let cartan = CartanData::new(n)?;
        if !(c.is_finite() && c >= 0.0) {
            return Err(YYError::BadBreaking(c));
        }
        for (index, p) in punctures.iter().enumerate() {
            if p.weight.rank() != n {
                return Err(YYError::BadWeight {
                    index,
                    got: p.weight.rank(),
                    rank: n,
                });
            }
        }
        for a in 0..punctures.len() {
            for b in a + 1..punctures.len() {
                if punctures[a].z == punctures[b].z {
                    return Err(YYError::CoincidentPunctures(a, b));
                }
            }
        }
        let mut roots = Vec::with_capacity(colors.len());
        for (index, &color) in colors.iter().enumerate() {
            if color < 1 || color > n {
                return Err(YYError::BadColor {
                    index,
                    color,
                    rank: n,
                });
            }
            roots.push(cartan.simple_root(color)?);
        }
        let f = |u: &WeightVector, v: &WeightVector| -> Result<f64, YYError> {
            Ok(cartan.inner(u, v)?.to_f64().unwrap_or(f64::NAN))
        };
        let mut color_weight = Vec::with_capacity(colors.len());
        let mut color_color = Vec::with_capacity(colors.len());
        for r in &roots {
            color_weight.push(
                punctures
                    .iter()
                    .map(|p| f(r, &p.weight))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            color_color.push(
                roots
                    .iter()
                    .map(|s| f(r, s))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }

        // w-independent part: −Σ_{a<b} (λ_a,λ_b) ln(z_a−z_b) + (c/2) Σ_a ‖λ_a‖ z_a
        let mut constant = Complex64::new(0.0, 0.0);
        for a in 0..punctures.len() {
            let norm = f(&punctures[a].weight, &punctures[a].weight)?
                .max(0.0)
                .sqrt();
            constant += 0.5 * c * norm * punctures[a].z;
            for b in a + 1..punctures.len() {
                let k = f(&punctures[a].weight, &punctures[b].weight)?;
                constant -= k * (punctures[a].z - punctures[b].z).ln();
            }
        }

        Ok(Self {
            n,
            punctures,
            colors,
            c,
            color_weight,
            color_color,
            constant,
        })
    }

    pub fn from_file(file: &ProblemFile) -> Result<Self, YYError> {
        let punctures = file
            .punctures
            .iter()
            .map(|p| Puncture {
                z: Complex64::new(p.re, p.im),
                weight: WeightVector::from_ints(&p.dynkin_labels),
            })
            .collect();
        Self::new(file.rank, punctures, file.colors.clone(), file.c)
    }

    pub fn from_json(text: &str) -> Result<Self, YYError> {
        let file: ProblemFile =
            serde_json::from_str(text).map_err(|e| YYError::File(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> ProblemFile {
        ProblemFile {
            rank: self.n,
            punctures: self
                .punctures
                .iter()
                .map(|p| PunctureFile {
                    re: p.z.re,
                    im: p.z.im,
                    dynkin_labels: p.weight.labels.iter().map(|r| r.to_integer()).collect(),
                })
                .collect(),
            colors: self.colors.clone(),
            c: self.c,
        }
    }

    /// Convenience constructor with integer Dynkin labels.
    pub fn with_labels(
        n: usize,
        punctures: &[(Complex64, &[i64])],
        colors: &[usize],
        c: f64,
    ) -> Result<Self, YYError> {
        let ps = punctures
            .iter()
            .map(|(z, l)| Puncture {
                z: *z,
                weight: WeightVector::from_ints(l),
            })
            .collect();
        Self::new(n, ps, colors.to_vec(), c)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn punctures(&self) -> &[Puncture] {
        &self.punctures
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn breaking(&self) -> f64 {
        self.c
    }

    pub fn variables(&self) -> usize {
        self.colors.len()
    }

    /// Same data with a different breaking parameter.
    pub fn with_breaking(&self, c: f64) -> Result<Self, YYError> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(YYError::BadBreaking(c));
        }
        Self::new(self.n, self.punctures.clone(), self.colors.clone(), c)
    }

    /// `(α_{i_j}, λ_a)`.
    pub fn color_weight(&self, j: usize, a: usize) -> f64 {
        self.color_weight[j][a]
    }

    /// `(α_{i_j}, α_{i_s})`.
    pub fn color_color(&self, j: usize, s: usize) -> f64 {
        self.color_color[j][s]
    }

    /// Smallest distance between two punctures (1 if there are fewer than two).
    pub fn puncture_scale(&self) -> f64 {
        let mut d = f64::INFINITY;
        for a in 0..self.punctures.len() {
            for b in a + 1..self.punctures.len() {
                d = d.min((self.punctures[a].z - self.punctures[b].z).norm());
            }
        }
        if d.is_finite() {
            d
        } else {
            1.0
        }
    }

    fn check(&self, w: &[Complex64]) -> Result<(), YYError> {
        if w.len() != self.colors.len() {
            return Err(YYError::Arity {
                expected: self.colors.len(),
                got: w.len(),
            });
        }
        for (j, wj) in w.iter().enumerate() {
            if !(wj.re.is_finite() && wj.im.is_finite()) {
                return Err(YYError::Singular(format!("w{j} is not finite")));
            }
            for (a, p) in self.punctures.iter().enumerate() {
                if *wj == p.z {
                    return Err(YYError::Singular(format!("w{j} sits on puncture {a}")));
                }
            }
            for (s, ws) in w.iter().enumerate().take(j) {
                if wj == ws {
                    return Err(YYError::Singular(format!("w{s} and w{j} coincide")));
                }
            }
        }
        Ok(())
    }

    /// Bethe admissibility: pairwise distinct and off the punctures, up to `tol`.
    pub fn is_admissible(&self, w: &[Complex64], tol: f64) -> bool {
        w.len() == self.colors.len() && self.singular_distance(w) > tol
    }
}

impl Holomorphic for YYProblem {
    fn dim(&self) -> usize {
        self.colors.len()
    }

    fn value(&self, w: &[Complex64]) -> Result<Complex64, YYError> {
        self.check(w)?;
        let mut total = self.constant;
        for (j, wj) in w.iter().enumerate() {
            for (a, p) in self.punctures.iter().enumerate() {
                total += self.color_weight[j][a] * (wj - p.z).ln();
            }
            for (s, ws) in w[..j].iter().enumerate() {
                total -= self.color_color[j][s] * (wj - ws).ln();
            }
            total -= self.c * wj;
        }
        Ok(total)
    }

    fn gradient(&self, w: &[Complex64]) -> Result<Vec<Complex64>, YYError> {
        self.check(w)?;
        Ok((0..w.len())
            .map(|j| {
                let mut g = Complex64::new(-self.c, 0.0);
                for (a, p) in self.punctures.iter().enumerate() {
                    g += self.color_weight[j][a] / (w[j] - p.z);
                }
                for s in 0..w.len() {
                    if s != j {
                        g -= self.color_color[j][s] / (w[j] - w[s]);
                    }
                }
                g
            })
            .collect())
    }

    fn jacobian(&self, w: &[Complex64]) -> Result<DMatrix<Complex64>, YYError> {
        self.check(w)?;
        let m = w.len();
        let mut jac = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
        for j in 0..m {
            let mut diag = Complex64::new(0.0, 0.0);
            for (a, p) in self.punctures.iter().enumerate() {
                let d = w[j] - p.z;
                diag -= self.color_weight[j][a] / (d * d);
            }
            for s in 0..m {
                if s != j {
                    let d = w[j] - w[s];
                    let t = self.color_color[j][s] / (d * d);
                    diag += t;
                    jac[(j, s)] = -t;
                }
            }
            jac[(j, j)] = diag;
        }
        Ok(jac)
    }

    fn singular_distance(&self, w: &[Complex64]) -> f64 {
        let mut d = f64::INFINITY;
        for (j, wj) in w.iter().enumerate() {
            for p in &self.punctures {
                d = d.min((wj - p.z).norm());
            }
            for ws in &w[..j] {
                d = d.min((wj - ws).norm());
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_point(l1: &[i64], l2: &[i64], colors: &[usize], cb: f64) -> YYProblem {
        let n = l1.len();
        YYProblem::with_labels(n, &[(c(0.0, 1.0), l1), (c(0.0, -1.0), l2)], colors, cb).unwrap()
    }

    #[test]
    fn validation() {
        let coincide =
            YYProblem::with_labels(1, &[(c(1.0, 0.0), &[1]), (c(1.0, 0.0), &[1])], &[1], 0.0);
        assert_eq!(coincide.unwrap_err(), YYError::CoincidentPunctures(0, 1));
        let bad = YYProblem::with_labels(2, &[(c(1.0, 0.0), &[1, 0])], &[3], 0.0);
        assert_eq!(
            bad.unwrap_err(),
            YYError::BadColor {
                index: 0,
                color: 3,
                rank: 2
            }
        );
        let bad = YYProblem::with_labels(2, &[(c(1.0, 0.0), &[1])], &[1], 0.0);
        assert!(matches!(bad, Err(YYError::BadWeight { .. })));
        assert!(YYProblem::with_labels(1, &[(c(1.0, 0.0), &[1])], &[1], -1.0).is_err());
        assert!(YYProblem::with_labels(0, &[], &[], 0.0).is_err());
    }

    #[test]
    fn sl2_coefficients() {
        let p =
            YYProblem::with_labels(1, &[(c(0.0, 0.0), &[3]), (c(2.0, 0.0), &[1])], &[1, 1], 0.0)
                .unwrap();
        assert_eq!(p.color_color(0, 1), 2.0);
        assert_eq!(p.color_weight(0, 0), 3.0);
        assert_eq!(p.color_weight(1, 1), 1.0);
        let w = [c(1.0, 1.0), c(0.5, -2.0)];
        let g = p.gradient(&w).unwrap();
        let by_hand = 3.0 / w[0] + 1.0 / (w[0] - 2.0) - 2.0 / (w[0] - w[1]);
        assert!((g[0] - by_hand).norm() < 1e-15);
    }

    #[test]
    fn symmetric_midpoint_is_critical() {
        let p = two_point(&[1], &[1], &[1], 0.0);
        let g = p.gradient(&[c(0.0, 0.0)]).unwrap();
        assert!(g[0].norm() < 1e-15);
    }

    #[test]
    fn singular_inputs_rejected() {
        let p = two_point(&[1], &[1], &[1, 1], 0.0);
        assert!(matches!(
            p.gradient(&[c(0.0, 1.0), c(0.5, 0.0)]),
            Err(YYError::Singular(_))
        ));
        assert!(matches!(
            p.gradient(&[c(0.5, 0.0), c(0.5, 0.0)]),
            Err(YYError::Singular(_))
        ));
        assert!(matches!(
            p.gradient(&[c(0.5, 0.0)]),
            Err(YYError::Arity { .. })
        ));
    }

    fn re_value(p: &YYProblem, w: &[Complex64]) -> f64 {
        p.value(w).unwrap().re
    }

    #[test]
    fn gradient_and_jacobian_match_differences() {
        let p = YYProblem::with_labels(
            2,
            &[
                (c(0.0, 0.0), &[1, 0]),
                (c(2.0, 0.5), &[0, 2]),
                (c(-1.0, 1.5), &[1, 1]),
            ],
            &[1, 2, 1],
            0.7,
        )
        .unwrap();
        let w = [c(0.4, 0.9), c(1.1, -0.6), c(-0.5, -0.3)];
        let g = p.gradient(&w).unwrap();
        let h = 1e-6;
        for j in 0..w.len() {
            // Re W is single-valued: ∂x Re W = Re W', ∂y Re W = −Im W'.
            let mut plus = w.to_vec();
            let mut minus = w.to_vec();
            plus[j] += h;
            minus[j] -= h;
            let dx = (re_value(&p, &plus) - re_value(&p, &minus)) / (2.0 * h);
            plus[j] += c(-h, h);
            minus[j] += c(h, -h);
            let dy = (re_value(&p, &plus) - re_value(&p, &minus)) / (2.0 * h);
            assert!((dx - g[j].re).abs() < 1e-6 * (1.0 + g[j].norm()));
            assert!((dy + g[j].im).abs() < 1e-6 * (1.0 + g[j].norm()));
        }
        let jac = p.jacobian(&w).unwrap();
        for k in 0..w.len() {
            let mut plus = w.to_vec();
            let mut minus = w.to_vec();
            plus[k] += h;
            minus[k] -= h;
            let gp = p.gradient(&plus).unwrap();
            let gm = p.gradient(&minus).unwrap();
            for j in 0..w.len() {
                let fd = (gp[j] - gm[j]) / (2.0 * h);
                assert!(
                    (fd - jac[(j, k)]).norm() < 1e-6 * (1.0 + fd.norm()),
                    "{j},{k}"
                );
            }
        }
    }

    #[test]
    fn breaking_only_shifts_gradient() {
        let p0 = two_point(&[2], &[1], &[1], 0.0);
        let p1 = p0.with_breaking(3.0).unwrap();
        let w = [c(0.3, 0.2)];
        let d = p1.gradient(&w).unwrap()[0] - p0.gradient(&w).unwrap()[0];
        assert!((d - c(-3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn file_round_trip() {
        let text = r#"{"rank":1,"punctures":[{"re":0,"im":1,"dynkin_labels":[1]},{"re":0,"im":-1,"dynkin_labels":[1]}],"colors":[1],"c":0}"#;
        let p = YYProblem::from_json(text).unwrap();
        assert_eq!(p.variables(), 1);
        let again = YYProblem::from_file(&p.to_file()).unwrap();
        assert_eq!(again.to_file(), p.to_file());
        assert!(matches!(YYProblem::from_json("{"), Err(YYError::File(_))));
    }
}
