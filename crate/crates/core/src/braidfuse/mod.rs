//! Braiding and fusion operators on `V ⊗ V` for the fundamental representation of A_n.
//!
//! Basis labels `0..=n` index the weight chain. Operators are stored sparsely
//! by input pair; `entry(out, inp)` reads the coefficient of `out` in the
//! image of `inp`.

mod state;
mod verify;

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use thiserror::Error;

use crate::lie_an::{CartanData, LieError, WeightVector};
use crate::qlaurent::{LaurentPoly, QExp};

pub use state::StateVector;
pub use verify::{
    operators, verify_fusion_condition, verify_fusion_condition_with, verify_inverse,
    verify_inverse_with, verify_reidemeister2, verify_reidemeister2_with, verify_skein_operator,
    verify_skein_operator_with, verify_yang_baxter, verify_yang_baxter_mutated,
    verify_yang_baxter_with, Failure, Mutation, VerifyReport,
};

pub type Pair = (usize, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("rank must be at least 1, got {0}")]
    BadRank(usize),
    #[error(transparent)]
    Lie(#[from] LieError),
}

fn check_rank(n: usize) -> Result<(), BraidError> {
    if n < 1 {
        Err(BraidError::BadRank(n))
    } else {
        Ok(())
    }
}

/// The three braiding constants `(α, β, γ)` for rank `n`.
pub fn braiding_constants(n: usize) -> (LaurentPoly, LaurentPoly, LaurentPoly) {
    let big_n = 2 * (n as i64 + 1);
    (
        LaurentPoly::q(-(n as i64), big_n),
        LaurentPoly::q(n as i64 + 2, big_n),
        LaurentPoly::q(1, big_n),
    )
}

/// `a = q^{n(n+2)/(2(n+1))}`.
pub fn twist_factor(n: usize) -> Result<LaurentPoly, BraidError> {
    check_rank(n)?;
    let n = n as i64;
    Ok(LaurentPoly::q(n * (n + 2), 2 * (n + 1)))
}

/// Quantum dimension `Σ_a q^{(n−2a)/2}`.
pub fn quantum_dimension(n: usize) -> LaurentPoly {
    (0..=n as i64)
        .map(|a| LaurentPoly::q(n as i64 - 2 * a, 2))
        .sum()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraidOperator {
    n: usize,
    columns: BTreeMap<Pair, BTreeMap<Pair, LaurentPoly>>,
}

impl BraidOperator {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            columns: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(n, &LaurentPoly::one())
    }

    pub fn diagonal(n: usize, value: &LaurentPoly) -> Self {
        let mut op = Self::zero(n);
        for a in 0..=n {
            for b in 0..=n {
                op.set((a, b), (a, b), value.clone());
            }
        }
        op
    }

    /// The three-case braiding rule with arbitrary constants.
    pub fn from_constants(
        n: usize,
        alpha: &LaurentPoly,
        beta: &LaurentPoly,
        gamma: &LaurentPoly,
    ) -> Self {
        let mut op = Self::zero(n);
        let wall = alpha - beta;
        for a in 0..=n {
            for b in 0..=n {
                if a == b {
                    op.set((a, b), (a, b), alpha.clone());
                } else {
                    op.set((b, a), (a, b), gamma.clone());
                    if a < b {
                        op.set((a, b), (a, b), wall.clone());
                    }
                }
            }
        }
        op
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, out: Pair, inp: Pair, value: LaurentPoly) {
        let col = self.columns.entry(inp).or_default();
        if value.is_zero() {
            col.remove(&out);
        } else {
            col.insert(out, value);
        }
        if col.is_empty() {
            self.columns.remove(&inp);
        }
    }

    pub fn entry(&self, out: Pair, inp: Pair) -> LaurentPoly {
        self.columns
            .get(&inp)
            .and_then(|c| c.get(&out))
            .cloned()
            .unwrap_or_default()
    }

    /// Image of a basis pair as `out → coefficient`.
    pub fn column(&self, inp: Pair) -> Option<&BTreeMap<Pair, LaurentPoly>> {
        self.columns.get(&inp)
    }

    /// All nonzero entries as `(out, inp, value)`, ordered by `(inp, out)`.
    pub fn entries(&self) -> impl Iterator<Item = (Pair, Pair, &LaurentPoly)> {
        self.columns
            .iter()
            .flat_map(|(inp, col)| col.iter().map(move |(out, v)| (*out, *inp, v)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.values().map(BTreeMap::len).sum()
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &BraidOperator) -> BraidOperator {
        let mut out = BraidOperator::zero(self.n);
        for (inp, mids) in &other.columns {
            let mut acc: BTreeMap<Pair, LaurentPoly> = BTreeMap::new();
            for (mid, c1) in mids {
                if let Some(outs) = self.columns.get(mid) {
                    for (o, c2) in outs {
                        *acc.entry(*o).or_default() += &(c1 * c2);
                    }
                }
            }
            for (o, v) in acc {
                out.set(o, *inp, v);
            }
        }
        out
    }

    pub fn scale(&self, k: &LaurentPoly) -> BraidOperator {
        let mut out = BraidOperator::zero(self.n);
        for (o, i, v) in self.entries() {
            out.set(o, i, v * k);
        }
        out
    }

    pub fn add(&self, other: &BraidOperator) -> BraidOperator {
        let mut out = self.clone();
        for (o, i, v) in other.entries() {
            let cur = out.entry(o, i);
            out.set(o, i, &cur + v);
        }
        out
    }

    pub fn sub(&self, other: &BraidOperator) -> BraidOperator {
        self.add(&other.scale(&LaurentPoly::constant(-1)))
    }
}

/// Braiding operator `B` of rank `n`.
pub fn braiding(n: usize) -> Result<BraidOperator, BraidError> {
    check_rank(n)?;
    let (alpha, beta, gamma) = braiding_constants(n);
    Ok(BraidOperator::from_constants(n, &alpha, &beta, &gamma))
}

/// `B⁻¹ = q^{−1/(n+1)} B − q^{−1/(2(n+1))}(q^{−1/2} − q^{1/2}) I`.
pub fn braiding_inverse(n: usize) -> Result<BraidOperator, BraidError> {
    let b = braiding(n)?;
    let big_n = n as i64 + 1;
    let shift = LaurentPoly::q(-1, 2 * big_n) * (LaurentPoly::q(-1, 2) - LaurentPoly::q(1, 2));
    Ok(b.scale(&LaurentPoly::q(-1, big_n))
        .sub(&BraidOperator::diagonal(n, &shift)))
}

/// A unit of `ℤ[i]` used as the overall fusion normalization `c₀`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Phase {
    #[default]
    One,
    MinusOne,
    I,
    MinusI,
}

impl Phase {
    /// `c₀² ∈ {+1, −1}`.
    pub fn square_sign(self) -> i64 {
        match self {
            Phase::One | Phase::MinusOne => 1,
            Phase::I | Phase::MinusI => -1,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            Phase::One => Complex64::new(1.0, 0.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::I => Complex64::new(0.0, 1.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }
}

/// Fusion amplitudes. The stored polynomials exclude the phase `c₀`; the full
/// amplitude is `c₀ · entry`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FusionMatrix {
    n: usize,
    phase: Phase,
    annihilation: BTreeMap<Pair, LaurentPoly>,
    creation: BTreeMap<Pair, LaurentPoly>,
}

impl FusionMatrix {
    pub fn with_phase(n: usize, phase: Phase) -> Result<Self, BraidError> {
        check_rank(n)?;
        let ann: BTreeMap<Pair, LaurentPoly> = (0..=n)
            .map(|a| ((a, n - a), LaurentPoly::q(n as i64 - 2 * a as i64, 4)))
            .collect();
        Ok(Self {
            n,
            phase,
            creation: ann.clone(),
            annihilation: ann,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn annihilation(&self, a: usize, b: usize) -> LaurentPoly {
        self.annihilation.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn creation(&self, a: usize, b: usize) -> LaurentPoly {
        self.creation.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn annihilation_entries(&self) -> impl Iterator<Item = (Pair, &LaurentPoly)> {
        self.annihilation.iter().map(|(k, v)| (*k, v))
    }

    pub fn creation_entries(&self) -> impl Iterator<Item = (Pair, &LaurentPoly)> {
        self.creation.iter().map(|(k, v)| (*k, v))
    }

    /// Entries of the matrix inverse of `(M_{ab})`, excluding the phase `c₀⁻¹`.
    pub fn inverse_entries(&self) -> Vec<(Pair, LaurentPoly)> {
        let mut out: Vec<(Pair, LaurentPoly)> = self
            .annihilation
            .iter()
            .map(|((a, b), v)| {
                (
                    (*b, *a),
                    v.inverse().expect("fusion entries are unit monomials"),
                )
            })
            .collect();
        out.sort_by_key(|x| x.0);
        out
    }

    /// Replace a creation amplitude (mutation testing).
    pub fn set_creation(&mut self, a: usize, b: usize, value: LaurentPoly) {
        if value.is_zero() {
            self.creation.remove(&(a, b));
        } else {
            self.creation.insert((a, b), value);
        }
    }

    /// `m_a · m_{n−a}` including the phase, as `(sign, product)`.
    pub fn normalization(&self, a: usize) -> LaurentPoly {
        let n = self.n;
        (self.annihilation(a, n - a) * self.annihilation(n - a, a))
            .scale(&self.phase.square_sign().into())
    }
}

/// Fusion matrix with `c₀ = 1`.
pub fn fusion(n: usize) -> Result<FusionMatrix, BraidError> {
    FusionMatrix::with_phase(n, Phase::One)
}

/// Phase of the pure braiding on `J_p`, returned as `(sign, exponent)` with
/// `sign = (−1)^p`.
pub fn pure_braiding_phase(
    cartan: &CartanData,
    weights: &[WeightVector; 2],
    roots: &[WeightVector],
) -> Result<(i8, QExp), BraidError> {
    let mut bracket = cartan.inner(&weights[0], &weights[1])?;
    for (j, aj) in roots.iter().enumerate() {
        for as_ in &roots[j + 1..] {
            bracket += cartan.inner(aj, as_)?;
        }
        for w in weights {
            bracket -= cartan.inner(aj, w)?;
        }
    }
    let sign = if roots.len().is_multiple_of(2) { 1 } else { -1 };
    Ok((
        sign,
        QExp::from_ratio(-bracket / Rational64::from_integer(2)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> LaurentPoly {
        LaurentPoly::q(p, r)
    }

    #[test]
    fn braiding_examples_n1() {
        let b = braiding(1).unwrap();
        assert_eq!(b.entry((0, 0), (0, 0)), q(-1, 4));
        let col = b.column((1, 0)).unwrap();
        assert_eq!(col.len(), 1);
        assert_eq!(col[&(0, 1)], q(1, 4));
        let col = b.column((0, 1)).unwrap();
        assert_eq!(col.len(), 2);
        assert_eq!(col[&(1, 0)], q(1, 4));
        assert_eq!(col[&(0, 1)], q(-1, 4) - q(3, 4));
        assert_eq!(b.nnz(), 5);
        assert_eq!(braiding(0), Err(BraidError::BadRank(0)));
    }

    #[test]
    fn inverse_examples() {
        let bi = braiding_inverse(1).unwrap();
        assert_eq!(bi.entry((0, 0), (0, 0)), q(1, 4));
        for n in 1..=4 {
            let bi = braiding_inverse(n).unwrap();
            let big_n = 2 * (n as i64 + 1);
            let expect = q(n as i64, big_n) - q(-(n as i64 + 2), big_n);
            for a in 0..=n {
                for b in 0..a {
                    assert_eq!(bi.entry((a, b), (a, b)), expect);
                    assert!(bi.entry((b, a), (b, a)).is_zero());
                }
            }
        }
    }

    // Independent closed form: B⁻¹ has the same three-case shape with inverted
    // constants and the wall-crossing term moved to a > b.
    #[test]
    fn inverse_matches_mirrored_rule() {
        for n in 1..=5 {
            let (al, be, ga) = braiding_constants(n);
            let (al, be, ga) = (
                al.inverse().unwrap(),
                be.inverse().unwrap(),
                ga.inverse().unwrap(),
            );
            let bi = braiding_inverse(n).unwrap();
            for a in 0..=n {
                for b in 0..=n {
                    let mut expect = BTreeMap::new();
                    if a == b {
                        expect.insert((a, b), al.clone());
                    } else {
                        expect.insert((b, a), ga.clone());
                        if a > b {
                            expect.insert((a, b), &al - &be);
                        }
                    }
                    assert_eq!(bi.column((a, b)).cloned().unwrap_or_default(), expect);
                }
            }
        }
    }

    #[test]
    fn fusion_examples() {
        let m = fusion(1).unwrap();
        assert_eq!(m.annihilation(0, 1), q(1, 4));
        assert_eq!(m.annihilation(1, 0), q(-1, 4));
        assert!(m.annihilation(0, 0).is_zero() && m.annihilation(1, 1).is_zero());
        let m = fusion(2).unwrap();
        assert_eq!(m.annihilation(0, 2), q(1, 2));
        assert_eq!(m.annihilation(1, 1), LaurentPoly::one());
        assert_eq!(m.annihilation(2, 0), q(-1, 2));
        for n in 1..=5 {
            let m = fusion(n).unwrap();
            for a in 0..=n {
                assert!(m.normalization(a).is_one());
                for b in 0..=n {
                    assert_eq!(m.annihilation(a, b), m.creation(a, b));
                    if a + b != n {
                        assert!(m.annihilation(a, b).is_zero());
                    }
                }
            }
        }
        let mi = FusionMatrix::with_phase(3, Phase::I).unwrap();
        assert_eq!(mi.normalization(1), LaurentPoly::constant(-1));
    }

    #[test]
    fn fusion_inverse_is_matrix_inverse() {
        for n in 1..=4 {
            let m = fusion(n).unwrap();
            let inv: BTreeMap<Pair, LaurentPoly> = m.inverse_entries().into_iter().collect();
            for a in 0..=n {
                for c in 0..=n {
                    let s: LaurentPoly = (0..=n)
                        .map(|b| {
                            m.annihilation(a, b) * inv.get(&(b, c)).cloned().unwrap_or_default()
                        })
                        .sum();
                    assert_eq!(
                        s,
                        if a == c {
                            LaurentPoly::one()
                        } else {
                            LaurentPoly::zero()
                        }
                    );
                }
            }
        }
    }

    #[test]
    fn twist_examples() {
        assert_eq!(twist_factor(1).unwrap(), q(3, 4));
        assert_eq!(twist_factor(2).unwrap(), q(4, 3));
        let a = twist_factor(3).unwrap();
        assert!((&a * &a.inverse().unwrap()).is_one());
        assert!(twist_factor(0).is_err());
    }

    #[test]
    fn block_and_triangularity() {
        for n in 1..=5 {
            for (op, wall_side) in [
                (braiding(n).unwrap(), true),
                (braiding_inverse(n).unwrap(), false),
            ] {
                for ((oa, ob), (ia, ib), _) in op.entries() {
                    assert_eq!(oa + ob, ia + ib);
                    if (oa, ob) == (ia, ib) && ia != ib {
                        assert_eq!(ia < ib, wall_side);
                    }
                }
            }
        }
    }

    #[test]
    fn duality_of_blocks() {
        for n in 1..=5 {
            let b = braiding(n).unwrap();
            for ((oa, ob), (ia, ib), v) in b.entries() {
                assert_eq!(&b.entry((n - ob, n - oa), (n - ib, n - ia)), v);
            }
        }
    }

    #[test]
    fn quadratic_relation() {
        for n in 1..=5 {
            let (al, be, _) = braiding_constants(n);
            let b = braiding(n).unwrap();
            let id = BraidOperator::identity(n);
            let lhs = b.add(&id.scale(&be)).compose(&b.sub(&id.scale(&al)));
            assert_eq!(lhs.nnz(), 0);
        }
    }

    #[test]
    fn pure_phase_examples() {
        let cd = CartanData::new(1).unwrap();
        let l0 = cd.weight_chain()[0].clone();
        let a1 = cd.simple_root(1).unwrap();
        assert_eq!(
            pure_braiding_phase(&cd, &[l0.clone(), l0.clone()], &[]).unwrap(),
            (1, QExp::new(-1, 4))
        );
        assert_eq!(
            pure_braiding_phase(&cd, &[l0.clone(), l0.clone()], &[a1]).unwrap(),
            (-1, QExp::new(3, 4))
        );
        for n in 1..=6 {
            let cd = CartanData::new(n).unwrap();
            let l0 = cd.weight_chain()[0].clone();
            let (s, e) = pure_braiding_phase(&cd, &[l0.clone(), l0], &[]).unwrap();
            assert_eq!(s, 1);
            let b = braiding(n).unwrap();
            for a in 0..=n {
                assert_eq!(b.entry((a, a), (a, a)), LaurentPoly::q_pow(e));
            }
        }
        let cd2 = CartanData::new(2).unwrap();
        assert!(pure_braiding_phase(&cd2, &[l0.clone(), l0], &[]).is_err());
    }
}
