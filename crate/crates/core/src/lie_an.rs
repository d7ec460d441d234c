//! Root and weight data for A_n.
//!
//! Weights are kept in Dynkin labels and paired through the inverse Cartan
//! matrix, normalized so that every simple root has `(α_i, α_i) = 2`.

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("rank must be at least 1, got {0}")]
    BadRank(usize),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("simple root index {index} out of range 1..={rank}")]
    BadRootIndex { index: usize, rank: usize },
}

/// A weight in Dynkin labels (coordinates in the fundamental-weight basis).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightVector {
    pub labels: Vec<Rational64>,
}

impl WeightVector {
    pub fn new(labels: Vec<Rational64>) -> Self {
        Self { labels }
    }

    pub fn from_ints(labels: &[i64]) -> Self {
        Self {
            labels: labels
                .iter()
                .map(|&x| Rational64::from_integer(x))
                .collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            labels: vec![Rational64::zero(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn is_integral(&self) -> bool {
        self.labels.iter().all(|x| x.is_integer())
    }

    pub fn add(&self, other: &WeightVector) -> WeightVector {
        WeightVector {
            labels: self
                .labels
                .iter()
                .zip(&other.labels)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &WeightVector) -> WeightVector {
        WeightVector {
            labels: self
                .labels
                .iter()
                .zip(&other.labels)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: Rational64) -> WeightVector {
        WeightVector {
            labels: self.labels.iter().map(|a| a * k).collect(),
        }
    }
}

/// Cartan matrix of A_n with its exact inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub n: usize,
    pub cartan: Vec<Vec<i64>>,
    pub inv_cartan: Vec<Vec<Rational64>>,
}

impl CartanData {
    pub fn new(n: usize) -> Result<Self, LieError> {
        if n < 1 {
            return Err(LieError::BadRank(n));
        }
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let inv_cartan = invert(&cartan);
        Ok(Self {
            n,
            cartan,
            inv_cartan,
        })
    }

    /// Simple root `α_i` (1-based) in Dynkin labels: row `i` of the Cartan matrix.
    pub fn simple_root(&self, i: usize) -> Result<WeightVector, LieError> {
        if i == 0 || i > self.n {
            return Err(LieError::BadRootIndex {
                index: i,
                rank: self.n,
            });
        }
        Ok(WeightVector::from_ints(&self.cartan[i - 1]))
    }

    /// `(u, v) = Σ u_i (C⁻¹)_{ij} v_j`.
    pub fn inner(&self, u: &WeightVector, v: &WeightVector) -> Result<Rational64, LieError> {
        for w in [u, v] {
            if w.rank() != self.n {
                return Err(LieError::RankMismatch(w.rank(), self.n));
            }
        }
        let mut acc = Rational64::zero();
        for (i, ui) in u.labels.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.labels.iter().enumerate() {
                acc += ui * self.inv_cartan[i][j] * vj;
            }
        }
        Ok(acc)
    }

    /// `λ⁰ = (1,0,…,0)`, `λ^s = λ^{s−1} − α_s`.
    pub fn weight_chain(&self) -> Vec<WeightVector> {
        let mut chain = Vec::with_capacity(self.n + 1);
        let mut cur = WeightVector::zero(self.n);
        cur.labels[0] = Rational64::one();
        chain.push(cur.clone());
        for s in 1..=self.n {
            cur = cur.sub(&self.simple_root(s).unwrap());
            chain.push(cur.clone());
        }
        chain
    }

    /// Gram matrix of a list of weights.
    pub fn gram(&self, weights: &[WeightVector]) -> Result<Vec<Vec<Rational64>>, LieError> {
        weights
            .iter()
            .map(|u| weights.iter().map(|v| self.inner(u, v)).collect())
            .collect()
    }

    /// True iff `(λ^s, λ^t) = (λ^{n−s}, λ^{n−t})` for the given chain.
    pub fn duality_holds(&self, chain: &[WeightVector]) -> Result<bool, LieError> {
        let g = self.gram(chain)?;
        let last = chain.len().saturating_sub(1);
        Ok((0..chain.len()).all(|s| (0..chain.len()).all(|t| g[s][t] == g[last - s][last - t])))
    }
}

pub fn fundamental_weight_chain(n: usize) -> Result<Vec<WeightVector>, LieError> {
    Ok(CartanData::new(n)?.weight_chain())
}

/// Pairing on A_n; builds the Cartan data for the common rank.
pub fn inner(u: &WeightVector, v: &WeightVector) -> Result<Rational64, LieError> {
    if u.rank() != v.rank() {
        return Err(LieError::RankMismatch(u.rank(), v.rank()));
    }
    CartanData::new(u.rank())?.inner(u, v)
}

pub fn check_duality(n: usize) -> bool {
    CartanData::new(n)
        .and_then(|cd| cd.duality_holds(&cd.weight_chain()))
        .unwrap_or(false)
}

fn invert(m: &[Vec<i64>]) -> Vec<Vec<Rational64>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational64> = row.iter().map(|&x| Rational64::from_integer(x)).collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational64::one()
                } else {
                    Rational64::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("Cartan matrix is nonsingular");
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    #[test]
    fn chain_examples() {
        assert_eq!(
            fundamental_weight_chain(1).unwrap(),
            vec![
                WeightVector::from_ints(&[1]),
                WeightVector::from_ints(&[-1])
            ]
        );
        assert_eq!(
            fundamental_weight_chain(2).unwrap(),
            vec![
                WeightVector::from_ints(&[1, 0]),
                WeightVector::from_ints(&[-1, 1]),
                WeightVector::from_ints(&[0, -1])
            ]
        );
        assert_eq!(
            fundamental_weight_chain(3).unwrap()[2],
            WeightVector::from_ints(&[0, -1, 1])
        );
        assert_eq!(fundamental_weight_chain(0), Err(LieError::BadRank(0)));
    }

    #[test]
    fn chain_sums_to_zero() {
        for n in 1..=8 {
            let chain = fundamental_weight_chain(n).unwrap();
            let total = chain
                .iter()
                .fold(WeightVector::zero(n), |acc, w| acc.add(w));
            assert_eq!(total, WeightVector::zero(n));
            assert!(chain.iter().all(WeightVector::is_integral));
        }
    }

    #[test]
    fn inner_examples() {
        let c1 = fundamental_weight_chain(1).unwrap();
        assert_eq!(inner(&c1[0], &c1[0]).unwrap(), r(1, 2));
        let c2 = fundamental_weight_chain(2).unwrap();
        assert_eq!(inner(&c2[0], &c2[1]).unwrap(), r(-1, 3));
        for n in 1..=6 {
            let cd = CartanData::new(n).unwrap();
            let a1 = cd.simple_root(1).unwrap();
            assert_eq!(cd.inner(&a1, &a1).unwrap(), r(2, 1));
        }
        assert_eq!(
            inner(
                &WeightVector::from_ints(&[1]),
                &WeightVector::from_ints(&[1, 0])
            ),
            Err(LieError::RankMismatch(1, 2))
        );
    }

    #[test]
    fn duality_examples() {
        assert!(check_duality(1));
        assert!(check_duality(4));
        let cd = CartanData::new(3).unwrap();
        let mut chain = cd.weight_chain();
        chain[1] = chain[1].add(&cd.simple_root(1).unwrap());
        assert!(!cd.duality_holds(&chain).unwrap());
        let g = cd.gram(&chain).unwrap();
        assert_ne!(g[1][0], g[2][3]);
    }

    #[test]
    fn inverse_is_exact() {
        for n in 1..=10 {
            let cd = CartanData::new(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let s: Rational64 = (0..n)
                        .map(|k| Rational64::from_integer(cd.cartan[i][k]) * cd.inv_cartan[k][j])
                        .sum();
                    assert_eq!(
                        s,
                        if i == j {
                            Rational64::one()
                        } else {
                            Rational64::zero()
                        }
                    );
                }
            }
        }
    }
}
