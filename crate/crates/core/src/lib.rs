//! Exact A_n braiding and fusion matrices, link invariants from Morse
//! diagrams, and numerics for the generalized Yang-Yang function.
//!
//! - [`qlaurent`]: Laurent polynomials in `q` with rational exponents.
//! - [`lie_an`]: Cartan data and the fundamental weight chain of A_n.
//! - [`braidfuse`]: braiding/fusion operators and their exact identity checks.
//! - [`tangle`]: Morse diagrams, the bracket, writhe, HOMFLY `H`, skein oracle.
//! - [`yangyang`]: Bethe critical points, gradient flows, Hessian index, Stokes scan.

pub mod braidfuse;
pub mod exec;
pub mod lie_an;
pub mod qlaurent;
pub mod tangle;
pub mod yangyang;

pub use exec::Exec;
pub use qlaurent::{LaurentPoly, QExp};
