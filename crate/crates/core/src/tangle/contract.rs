use super::morse::{MorseLink, Slice};
use super::orient::OrientedDiagram;
use crate::braidfuse::{self, BraidError, BraidOperator, FusionMatrix, StateVector};
use crate::qlaurent::LaurentPoly;

/// The operators needed to contract diagrams of one rank.
#[derive(Clone, Debug)]
pub struct Evaluator {
    n: usize,
    braid: BraidOperator,
    braid_inv: BraidOperator,
    fusion: FusionMatrix,
    twist: LaurentPoly,
}

/// `⟨K⟩`, `ω(K)` and `H(K)` of one oriented diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub bracket: LaurentPoly,
    pub writhe: i64,
    pub homfly: LaurentPoly,
}

impl Evaluator {
    pub fn new(n: usize) -> Result<Self, BraidError> {
        Ok(Self {
            n,
            braid: braidfuse::braiding(n)?,
            braid_inv: braidfuse::braiding_inverse(n)?,
            fusion: braidfuse::fusion(n)?,
            twist: braidfuse::twist_factor(n)?,
        })
    }

    /// Use custom operators (e.g. a non-default fusion phase).
    pub fn with_operators(
        braid: BraidOperator,
        braid_inv: BraidOperator,
        fusion: FusionMatrix,
    ) -> Result<Self, BraidError> {
        let n = braid.rank();
        Ok(Self {
            n,
            twist: braidfuse::twist_factor(n)?,
            braid,
            braid_inv,
            fusion,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn twist(&self) -> &LaurentPoly {
        &self.twist
    }

    /// Slice-by-slice contraction: cups create with `M^{ab}`, caps annihilate
    /// with `M_{ab}`, `cross+` applies `B⁻¹` and `cross-` applies `B`, with no
    /// regard to strand orientation.
    pub fn contract_literal(&self, link: &MorseLink) -> LaurentPoly {
        let mut state = StateVector::vacuum(self.n);
        for s in link.slices() {
            state = match *s {
                Slice::Cup(p) => state.apply_cup(&self.fusion, p),
                Slice::Cap(p) => state.apply_cap(&self.fusion, p),
                Slice::CrossPos(p) => state.apply_operator(&self.braid_inv, p),
                Slice::CrossNeg(p) => state.apply_operator(&self.braid, p),
            };
            if state.is_empty() {
                return LaurentPoly::zero();
            }
        }
        // Each cup/cap pair carries c₀².
        let sign = self
            .fusion
            .phase()
            .square_sign()
            .pow(link.caps() as u32 % 2);
        state.scalar().scale(&sign.into())
    }

    /// `⟨K⟩`: the contraction of the braid-like normal form.
    pub fn bracket(&self, diagram: &OrientedDiagram) -> LaurentPoly {
        self.contract_literal(&diagram.normal_form())
    }

    /// `H(K) = a^{−ω(K)} ⟨K⟩`.
    pub fn homfly(&self, diagram: &OrientedDiagram) -> LaurentPoly {
        self.invariants(diagram).homfly
    }

    pub fn invariants(&self, diagram: &OrientedDiagram) -> Invariants {
        let bracket = self.bracket(diagram);
        let writhe = diagram.writhe();
        let homfly = self.twist.pow(-writhe).expect("twist is a unit monomial") * bracket.clone();
        Invariants {
            bracket,
            writhe,
            homfly,
        }
    }
}

/// `⟨K⟩` with the default orientation.
pub fn evaluate_bracket(link: &MorseLink, n: usize) -> Result<LaurentPoly, BraidError> {
    Ok(Evaluator::new(n)?.bracket(&OrientedDiagram::new(link.clone())))
}

/// `H(K)` with the default orientation.
pub fn homfly_h(link: &MorseLink, n: usize) -> Result<LaurentPoly, BraidError> {
    Ok(Evaluator::new(n)?.homfly(&OrientedDiagram::new(link.clone())))
}

/// Literal contraction, without orientation handling.
pub fn contract_literal(link: &MorseLink, n: usize) -> Result<LaurentPoly, BraidError> {
    Ok(Evaluator::new(n)?.contract_literal(link))
}
