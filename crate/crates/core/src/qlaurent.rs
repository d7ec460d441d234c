//! Exact Laurent polynomials in a formal variable `q` with rational exponents.
//!
//! Every algebraic quantity in the crate (braiding entries, fusion amplitudes,
//! link invariants) lives in this ring. Coefficients are arbitrary-precision
//! integers; exponents are exact rationals, so polynomials built for different
//! ranks can be mixed freely.
//!
//! The text form is deterministic: terms in ascending exponent, exponents in
//! lowest terms, e.g. `-q^(-9/4) + q^(-1/4) + 2*q^(3/4) + q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("exponent denominator must be nonzero")]
    ZeroDenominator,
    #[error("cannot evaluate at q = 0")]
    ZeroBase,
    #[error("not a monomial; inverse undefined")]
    NotMonomial,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// An exact rational exponent of `q`, always in lowest terms with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QExp(Rational64);

impl QExp {
    pub const ZERO: QExp = QExp(Rational64::new_raw(0, 1));

    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Self::try_new(num, den).expect("exponent denominator must be nonzero")
    }

    pub fn try_new(num: i64, den: i64) -> Result<Self, LaurentError> {
        if den == 0 {
            return Err(LaurentError::ZeroDenominator);
        }
        Ok(QExp(Rational64::new(num, den)))
    }

    pub fn integer(k: i64) -> Self {
        QExp(Rational64::from_integer(k))
    }

    pub fn from_ratio(r: Rational64) -> Self {
        QExp(r)
    }

    pub fn value(&self) -> Rational64 {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Add for QExp {
    type Output = QExp;
    fn add(self, rhs: QExp) -> QExp {
        QExp(self.0 + rhs.0)
    }
}

impl Sub for QExp {
    type Output = QExp;
    fn sub(self, rhs: QExp) -> QExp {
        QExp(self.0 - rhs.0)
    }
}

impl Neg for QExp {
    type Output = QExp;
    fn neg(self) -> QExp {
        QExp(-self.0)
    }
}

impl Mul<i64> for QExp {
    type Output = QExp;
    fn mul(self, k: i64) -> QExp {
        QExp(self.0 * k)
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for QExp {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| LaurentError::Parse {
            pos: 0,
            msg: format!("{msg}: {s:?}"),
        };
        let s = s.trim();
        match s.split_once('/') {
            Some((p, r)) => {
                let p: i64 = p
                    .trim()
                    .parse()
                    .map_err(|_| bad("bad exponent numerator"))?;
                let r: i64 = r
                    .trim()
                    .parse()
                    .map_err(|_| bad("bad exponent denominator"))?;
                QExp::try_new(p, r)
            }
            None => Ok(QExp::integer(s.parse().map_err(|_| bad("bad exponent"))?)),
        }
    }
}

/// A finite sum `Σ c_e q^e` with integer `c_e ≠ 0` and rational `e`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<QExp, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, QExp::ZERO)
    }

    /// `coeff · q^exp`, or zero when `coeff == 0`.
    pub fn monomial(coeff: impl Into<BigInt>, exp: QExp) -> Self {
        let coeff = coeff.into();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// `q^exp`.
    pub fn q_pow(exp: QExp) -> Self {
        Self::monomial(1, exp)
    }

    /// `q^(num/den)`.
    pub fn q(num: i64, den: i64) -> Self {
        Self::q_pow(QExp::new(num, den))
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, QExp::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(QExp::ZERO).is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&QExp, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: QExp) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<QExp> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<QExp> {
        self.terms.keys().next_back().copied()
    }

    /// Least common multiple of the exponent denominators (1 for the zero polynomial).
    pub fn exponent_lcm(&self) -> i64 {
        self.terms.keys().fold(1, |acc, e| acc.lcm(&e.denom()))
    }

    /// If `self = c q^e`, returns `(c, e)`.
    pub fn as_monomial(&self) -> Option<(&BigInt, QExp)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((c, *e))
        } else {
            None
        }
    }

    /// Inverse of a unit monomial `±q^e`.
    pub fn inverse(&self) -> Result<Self, LaurentError> {
        match self.as_monomial() {
            Some((c, e)) if c.abs().is_one() => Ok(Self::monomial(c.clone(), -e)),
            _ => Err(LaurentError::NotMonomial),
        }
    }

    /// Integer power; negative powers only for unit monomials.
    pub fn pow(&self, k: i64) -> Result<Self, LaurentError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Multiply every exponent by `q^shift`.
    pub fn shift(&self, shift: QExp) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e + shift, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    fn add_term(&mut self, exp: QExp, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Evaluate at `q = q0`, using the principal branch `q0^e = exp(e · Log q0)`.
    ///
    /// All terms share the root `exp(Log q0 / D)` with `D` the exponent lcm, so the
    /// map is a ring homomorphism on the whole ring.
    pub fn eval_complex(&self, q0: Complex64) -> Result<Complex64, LaurentError> {
        if q0 == Complex64::new(0.0, 0.0) {
            return Err(LaurentError::ZeroBase);
        }
        let d = self.exponent_lcm();
        let root = (q0.ln() / d as f64).exp();
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let k = e.numer() * (d / e.denom());
                root.powi(k as i32) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum())
    }

    /// Exponent/coefficient pairs for structured output.
    pub fn to_terms_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| TermJson {
                exp: e.to_string(),
                coeff: c.to_string(),
            })
            .collect()
    }

    pub fn from_terms_json(terms: &[TermJson]) -> Result<Self, LaurentError> {
        let mut p = Self::zero();
        for t in terms {
            let e: QExp = t.exp.parse()?;
            let c: BigInt = t.coeff.parse().map_err(|_| LaurentError::Parse {
                pos: 0,
                msg: format!("bad coefficient {:?}", t.coeff),
            })?;
            p.add_term(e, &c);
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: String,
    pub coeff: String,
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_terms_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        LaurentPoly::from_terms_json(&terms).map_err(serde::de::Error::custom)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(*e1 + *e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |acc, p| acc + p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if *e == QExp::integer(1) {
                write!(f, "q")?;
            } else {
                write!(f, "q^({e})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, LaurentError> {
        Err(LaurentError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn parse(mut self) -> Result<LaurentPoly, LaurentError> {
        let mut out = LaurentPoly::zero();
        self.skip_ws();
        if self.peek() == Some(b'0')
            && self.src[self.pos..]
                .iter()
                .all(|b| *b == b'0' || b.is_ascii_whitespace())
        {
            return Ok(out);
        }
        let mut first = true;
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                if first {
                    return self.err("empty polynomial");
                }
                break;
            }
            let mut negative = false;
            match self.peek() {
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') => {
                    negative = true;
                    self.pos += 1;
                }
                _ if first => {}
                _ => return self.err("expected '+' or '-'"),
            }
            self.skip_ws();
            let (coeff, exp) = self.term()?;
            out.add_term(exp, &if negative { -coeff } else { coeff });
            first = false;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(BigInt, QExp), LaurentError> {
        let coeff = self.digits().map(|d| d.parse::<BigInt>().unwrap());
        if let Some(k) = &coeff {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
            } else if self.peek() != Some(b'q') {
                return Ok((k.clone(), QExp::ZERO));
            }
        }
        if self.peek() != Some(b'q') {
            return self.err("expected 'q'");
        }
        self.pos += 1;
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() != Some(b'(') {
                return self.err("expected '(' after '^'");
            }
            self.pos += 1;
            let start = self.pos;
            while self.peek().is_some_and(|b| b != b')') {
                self.pos += 1;
            }
            if self.peek() != Some(b')') {
                return self.err("unclosed exponent");
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            self.pos += 1;
            text.parse::<QExp>().map_err(|_| LaurentError::Parse {
                pos: start,
                msg: format!("bad exponent {text:?}"),
            })?
        } else {
            QExp::integer(1)
        };
        Ok((coeff.unwrap_or_else(BigInt::one), exp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert!((LaurentPoly::q(1, 2) + (-LaurentPoly::q(1, 2))).is_zero());
        assert_eq!(
            LaurentPoly::q(1, 1) + LaurentPoly::q(-1, 1),
            p("q^(-1) + q")
        );
        let a = LaurentPoly::q(1, 4) + LaurentPoly::q(3, 4);
        assert_eq!(a + LaurentPoly::q(1, 4), p("2*q^(1/4) + q^(3/4)"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            LaurentPoly::q(1, 2) * LaurentPoly::q(1, 2),
            LaurentPoly::q(1, 1)
        );
        let a = LaurentPoly::q(1, 2) - LaurentPoly::q(-1, 2);
        let b = LaurentPoly::q(1, 2) + LaurentPoly::q(-1, 2);
        assert_eq!(a * b, p("-q^(-1) + q"));
        assert!((LaurentPoly::zero() * p("3*q^(7/3) - 1")).is_zero());
    }

    #[test]
    fn monomial_examples() {
        assert_eq!(LaurentPoly::monomial(1, QExp::ZERO), LaurentPoly::one());
        assert_eq!(
            LaurentPoly::monomial(-1, QExp::new(3, 4)).to_string(),
            "-q^(3/4)"
        );
        assert!(LaurentPoly::monomial(0, QExp::new(5, 2)).is_zero());
    }

    #[test]
    fn eval_examples() {
        let one = Complex64::new(1.0, 0.0);
        let v = p("q^(-1) + q").eval_complex(one).unwrap();
        assert!((v - 2.0).norm() < 1e-15);
        let v = LaurentPoly::q(1, 2)
            .eval_complex(Complex64::new(4.0, 0.0))
            .unwrap();
        assert!((v - 2.0).norm() < 1e-14);
        let v = p("q^(1/2) - q^(-1/2)").eval_complex(one).unwrap();
        assert!(v.norm() < 1e-15);
        assert_eq!(
            LaurentPoly::one().eval_complex(Complex64::new(0.0, 0.0)),
            Err(LaurentError::ZeroBase)
        );
    }

    #[test]
    fn qexp_lowest_terms() {
        let e = QExp::new(6, -8);
        assert_eq!((e.numer(), e.denom()), (-3, 4));
        assert_eq!(e.to_string(), "-3/4");
        assert_eq!(QExp::try_new(1, 0), Err(LaurentError::ZeroDenominator));
    }

    #[test]
    fn render_golden() {
        let x = LaurentPoly::monomial(-1, QExp::new(-9, 4))
            + LaurentPoly::q(-1, 4)
            + LaurentPoly::monomial(2, QExp::new(3, 4))
            + LaurentPoly::q(1, 1)
            + LaurentPoly::constant(-5);
        assert_eq!(x.to_string(), "-q^(-9/4) + q^(-1/4) - 5 + 2*q^(3/4) + q");
        assert_eq!(p(&x.to_string()), x);
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p("0"), LaurentPoly::zero());
        assert_eq!(p("q^(2)").to_string(), "q^(2)");
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<LaurentPoly>().is_err());
        assert!("q^(1/0)".parse::<LaurentPoly>().is_err());
        assert!("q^1".parse::<LaurentPoly>().is_err());
        assert!("q + + q".parse::<LaurentPoly>().is_err());
        assert!("x".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn inverse_and_pow() {
        let a = LaurentPoly::q(3, 4);
        assert!((&a * &a.inverse().unwrap()).is_one());
        assert_eq!(a.pow(-2).unwrap(), LaurentPoly::q(-3, 2));
        assert_eq!(p("1 + q").inverse(), Err(LaurentError::NotMonomial));
        assert_eq!(p("1 + q").pow(2).unwrap(), p("1 + 2*q + q^(2)"));
    }

    #[test]
    fn json_round_trip() {
        let x = p("-q^(-1/4) + 7*q^(5/3)");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"[{"exp":"-1/4","coeff":"-1"},{"exp":"5/3","coeff":"7"}]"#
        );
        assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), x);
    }
}
