//! Complex dynamics of a one-parameter fourth-order root-finding family
//! applied to quadratic polynomials.
//!
//! After Möbius conjugation the family becomes the rational map
//!
//! ```text
//! O(z, lam) = -z^4 (1 - lam + 4z + 6z^2 + 4z^3 + z^4) / (-1 - 4z - 6z^2 - 4z^3 + (lam - 1) z^4)
//! ```
//!
//! whose superattracting fixed points 0 and infinity are the images of the
//! two roots. This crate computes the remaining fixed points and their
//! stability, the free critical points, and renders dynamical planes (basins
//! of attraction for a fixed `lam`) and parameter planes (fate of a free
//! critical orbit over a mesh of `lam`). Operators other than the built-in
//! family can be supplied as expressions in `z` and `lam`.

pub mod dsl;
pub mod export;
pub mod kimfamily;
pub mod numcore;
pub mod orbit;
pub mod raster;
pub mod report;

pub use kimfamily::{build_operator, KimParameter, RationalOperator};
pub use numcore::{ExtendedComplex, Polynomial};
