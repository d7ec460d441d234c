//! Morse diagrams of links and their invariants.
//!
//! A diagram is read bottom to top as slices `cup p`, `cap p`, `cross+ p`,
//! `cross- p`. In `cross+` the over strand runs lower-left to upper-right; when
//! both strands point up this is a positive crossing and it contracts with
//! `B⁻¹`. `cross-` is its mirror and contracts with `B`.
//!
//! The bracket `⟨K⟩` is computed on an oriented normal form in which every
//! crossing has parallel strands; see [`OrientedDiagram::normal_form`].

mod contract;
pub mod corpus;
mod morse;
pub mod moves;
mod orient;
mod skein;

pub use contract::{contract_literal, evaluate_bracket, homfly_h, Evaluator, Invariants};
pub use morse::{parse_morse, MorseError, MorseLink, Slice};
pub use moves::{insert_kink, verify_regular_isotopy, Move, Site};
pub use orient::{Node, OrientError, OrientedDiagram};
pub use skein::{skein_oracle, skein_triple, SkeinError, SkeinOracle, SkeinTriple, CROSSING_BOUND};

/// Writhe with the default orientation.
pub fn writhe(link: &MorseLink) -> i64 {
    OrientedDiagram::new(link.clone()).writhe()
}
