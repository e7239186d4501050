//! Numerical engine for elementary and special functions of multivectors in
//! real Clifford algebras Cl(p,q).
//!
//! A function f(A) of a general multivector A is evaluated from the roots of
//! the characteristic polynomial of A: the characteristic coefficients come
//! from a Faddeev-LeVerrier recursion (with three independent cross-check
//! methods), the roots from an Aberth-Ehrlich solver, and the function value
//! from per-root spectral sums in either coordinate or basis-free form.
//! Repeated-root inputs are routed through the minimal polynomial (Lagrange
//! projectors when diagonalizable, epsilon-regularization when defective).

// index-driven recursions (Faddeev-LeVerrier, Aberth, Horner tables) read
// better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod charpoly;
mod dd;
pub mod error;
pub mod oracle;
pub mod polyroots;
pub mod scalar;
pub mod specfun;

pub use algebra::{Blade, Multivector, Signature};
pub use charpoly::CharPoly;
pub use error::ClifError;
pub use polyroots::RootSet;
pub use scalar::Scalar;
