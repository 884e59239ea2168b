//! Riemann-sphere points, dense complex polynomials and a simultaneous
//! polynomial root finder.

mod extended;
mod poly;
mod roots;

pub use extended::ExtendedComplex;
pub use poly::Polynomial;
pub use roots::{find_roots, RootError, RootSet, DEFAULT_MAX_SWEEPS, DEFAULT_ROOT_TOL};
