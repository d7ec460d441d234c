use std::collections::HashMap;

use thiserror::Error;

use super::morse::{MorseLink, Slice};
use super::orient::{OrientError, OrientedDiagram};
use crate::qlaurent::LaurentPoly;

/// Diagrams with more crossings than this are refused by the oracle.
pub const CROSSING_BOUND: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeinError {
    #[error("slice {0} is not a crossing")]
    NotACrossing(usize),
    #[error("{crossings} crossings exceed the oracle bound of {bound}")]
    TooManyCrossings { crossings: usize, bound: usize },
    #[error("rank must be at least 1")]
    BadRank,
    #[error(transparent)]
    Orient(#[from] OrientError),
}

/// The three diagrams of a skein relation at one crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeinTriple {
    pub plus: OrientedDiagram,
    pub minus: OrientedDiagram,
    pub zero: OrientedDiagram,
}

/// `(L₊, L₋, L₀)` at slice `index`. The smoothing follows the orientation: a
/// parallel crossing becomes two through-strands, an antiparallel one a cap
/// followed by a cup.
pub fn skein_triple(diagram: &OrientedDiagram, index: usize) -> Result<SkeinTriple, SkeinError> {
    let s = *diagram
        .link()
        .slices()
        .get(index)
        .filter(|s| s.is_crossing())
        .ok_or(SkeinError::NotACrossing(index))?;
    let p = s.pos();
    let parallel = diagram.is_parallel(index);
    let plus_token = if parallel { 1 } else { -1 };
    let smoothing: &[Slice] = if parallel {
        &[]
    } else {
        &[Slice::Cap(p), Slice::Cup(p)]
    };
    Ok(SkeinTriple {
        plus: diagram.replace(index, index + 1, &[Slice::crossing(p, plus_token)])?,
        minus: diagram.replace(index, index + 1, &[Slice::crossing(p, -plus_token)])?,
        zero: diagram.replace(index, index + 1, smoothing)?,
    })
}

/// `H` by recursive crossing changes down to unlinks, never contracting.
///
/// Components are walked in tracing order; the first crossing met for the first
/// time on its under-strand is switched using
/// `q^{N/2} H(L₊) − q^{−N/2} H(L₋) = (q^{1/2} − q^{−1/2}) H(L₀)`, `N = n + 1`.
/// A diagram with no such crossing is descending, hence an unlink.
pub struct SkeinOracle {
    n: usize,
    unknot: LaurentPoly,
    memo: HashMap<(Vec<Slice>, Vec<bool>), LaurentPoly>,
}

impl SkeinOracle {
    pub fn new(n: usize) -> Result<Self, SkeinError> {
        if n < 1 {
            return Err(SkeinError::BadRank);
        }
        let unknot = (0..=n as i64)
            .map(|a| LaurentPoly::q(n as i64 - 2 * a, 2))
            .sum();
        Ok(Self {
            n,
            unknot,
            memo: HashMap::new(),
        })
    }

    pub fn homfly(&mut self, diagram: &OrientedDiagram) -> Result<LaurentPoly, SkeinError> {
        let crossings = diagram.link().crossings().len();
        if crossings > CROSSING_BOUND {
            return Err(SkeinError::TooManyCrossings {
                crossings,
                bound: CROSSING_BOUND,
            });
        }
        self.eval(diagram)
    }

    fn eval(&mut self, d: &OrientedDiagram) -> Result<LaurentPoly, SkeinError> {
        let key = (d.link().slices().to_vec(), d.flips().to_vec());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let value = match first_undercrossing(d.link(), d) {
            None => self
                .unknot
                .pow(d.components() as i64)
                .expect("nonnegative power"),
            Some(i) => {
                let t = skein_triple(d, i)?;
                let big = self.n as i64 + 1;
                let z = LaurentPoly::q(1, 2) - LaurentPoly::q(-1, 2);
                let h0 = self.eval(&t.zero)?;
                if d.crossing_sign(i) > 0 {
                    let hm = self.eval(&t.minus)?;
                    LaurentPoly::q(-big, 1) * hm + LaurentPoly::q(-big, 2) * z * h0
                } else {
                    let hp = self.eval(&t.plus)?;
                    LaurentPoly::q(big, 1) * hp - LaurentPoly::q(big, 2) * z * h0
                }
            }
        };
        self.memo.insert(key, value.clone());
        Ok(value)
    }
}

fn first_undercrossing(link: &MorseLink, d: &OrientedDiagram) -> Option<usize> {
    let slices = link.slices();
    let mut seen = vec![false; slices.len()];
    for walk in d.walks() {
        for &(node, up) in walk {
            let (i, bottom) = if up {
                if node.level >= slices.len() {
                    continue;
                }
                (node.level, node.pos)
            } else {
                if node.level == 0 {
                    continue;
                }
                let i = node.level - 1;
                let p = slices[i].pos();
                if !slices[i].is_crossing() || !(node.pos == p || node.pos == p + 1) {
                    continue;
                }
                (i, if node.pos == p { p + 1 } else { p })
            };
            let s = slices[i];
            if !s.is_crossing() || !(bottom == s.pos() || bottom == s.pos() + 1) || seen[i] {
                continue;
            }
            seen[i] = true;
            let over = match s {
                Slice::CrossPos(p) => bottom == p,
                _ => bottom == s.pos() + 1,
            };
            if !over {
                return Some(i);
            }
        }
    }
    None
}

pub fn skein_oracle(diagram: &OrientedDiagram, n: usize) -> Result<LaurentPoly, SkeinError> {
    SkeinOracle::new(n)?.homfly(diagram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::contract::Evaluator;
    use crate::tangle::morse::parse_morse;

    fn od(s: &str) -> OrientedDiagram {
        OrientedDiagram::new(parse_morse(s).unwrap())
    }

    const TREFOIL: &str = "cup 0; cup 1; cross+ 0; cross+ 0; cross+ 0; cap 1; cap 0";
    const HOPF: &str = "cup 0; cup 1; cross+ 0; cross+ 0; cap 1; cap 0";

    #[test]
    fn unknot_base_case() {
        for n in 1..=4 {
            let h = skein_oracle(&od("cup 0; cap 0"), n).unwrap();
            let big = n as i64 + 1;
            // (q^{N/2} − q^{−N/2}) = (q^{1/2} − q^{−1/2}) · h
            let lhs = LaurentPoly::q(big, 2) - LaurentPoly::q(-big, 2);
            assert_eq!(
                lhs,
                (LaurentPoly::q(1, 2) - LaurentPoly::q(-1, 2)) * h.clone()
            );
            assert_eq!(h, Evaluator::new(n).unwrap().bracket(&od("cup 0; cap 0")));
        }
    }

    #[test]
    fn triple_of_kink() {
        let d = od("cup 0; cup 2; cross+ 1; cap 2; cap 0");
        let t = skein_triple(&d, 2).unwrap();
        assert_eq!(t.plus, d);
        assert_eq!(t.minus.writhe(), -1);
        assert_eq!(t.zero.link().to_string(), "cup 0\ncup 2\ncap 2\ncap 0\n");
        assert_eq!(skein_triple(&d, 0), Err(SkeinError::NotACrossing(0)));
        assert_eq!(skein_triple(&d, 9), Err(SkeinError::NotACrossing(9)));
    }

    #[test]
    fn triple_of_trefoil_classified() {
        let d = od(TREFOIL);
        let t = skein_triple(&d, 2).unwrap();
        for n in 1..=2 {
            let ev = Evaluator::new(n).unwrap();
            assert_eq!(ev.homfly(&t.plus), ev.homfly(&d));
            assert_eq!(ev.homfly(&t.minus), ev.homfly(&od("cup 0; cap 0")));
            assert_eq!(ev.homfly(&t.zero), ev.homfly(&od(HOPF)));
        }
    }

    #[test]
    fn antiparallel_smoothing() {
        let d = od("cup 0; cross+ 0; cap 0");
        let t = skein_triple(&d, 1).unwrap();
        assert_eq!(t.zero.link().to_string(), "cup 0\ncap 0\ncup 0\ncap 0\n");
        assert_eq!(t.plus.writhe(), 1);
        assert_eq!(t.minus.writhe(), -1);
    }

    #[test]
    fn oracle_matches_contraction_small() {
        for n in 1..=2 {
            let ev = Evaluator::new(n).unwrap();
            for s in [TREFOIL, HOPF, "cup 0; cross+ 0; cap 0"] {
                let d = od(s);
                assert_eq!(skein_oracle(&d, n).unwrap(), ev.homfly(&d), "{s} n={n}");
            }
        }
    }

    #[test]
    fn crossing_bound() {
        let mut s = String::from("cup 0; cup 1;");
        for _ in 0..13 {
            s.push_str(" cross+ 0;");
        }
        s.push_str(" cap 1; cap 0");
        assert_eq!(
            skein_oracle(&od(&s), 1),
            Err(SkeinError::TooManyCrossings {
                crossings: 13,
                bound: CROSSING_BOUND
            })
        );
    }
}
