//! The family as an iteration on a quadratic `f(z) = c (z - a)(z - b)`,
//! before conjugation, and the Möbius map that conjugates it to the
//! one-parameter operator.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::KimParameter;
use crate::numcore::ExtendedComplex;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum StepError {
    #[error("the two roots coincide")]
    DegenerateRoots,
    #[error("f'(x) vanishes at x = {0}")]
    DerivativeZero(Complex64),
    #[error("weight denominator 1 - 2u vanishes at x = {0}")]
    DenominatorZero(Complex64),
    #[error("affine map has zero slope")]
    DegenerateAffine,
}

/// One step of the two-step scheme on `(z - a)(z - b)`:
///
/// `y = x - f(x)/f'(x)`, `u = f(y)/f(x)`,
/// `x+ = y - (1 + lam u^2)/(1 - 2u) * f(y)/f'(x)`.
///
/// A root is returned unchanged.
pub fn original_step(
    roots: (Complex64, Complex64),
    x: Complex64,
    p: KimParameter,
) -> Result<Complex64, StepError> {
    step_on_quadratic(Complex64::new(1.0, 0.0), roots, x, p.lambda())
}

fn step_on_quadratic(
    leading: Complex64,
    (a, b): (Complex64, Complex64),
    x: Complex64,
    lambda: Complex64,
) -> Result<Complex64, StepError> {
    if a == b {
        return Err(StepError::DegenerateRoots);
    }
    let f = |z: Complex64| leading * (z - a) * (z - b);
    let fx = f(x);
    if fx.re == 0.0 && fx.im == 0.0 {
        return Ok(x);
    }
    let dfx = leading * (2.0 * x - a - b);
    if dfx.re == 0.0 && dfx.im == 0.0 {
        return Err(StepError::DerivativeZero(x));
    }
    let y = x - fx / dfx;
    let fy = f(y);
    let u = fy / fx;
    let weight_den = 1.0 - 2.0 * u;
    if weight_den.re == 0.0 && weight_den.im == 0.0 {
        return Err(StepError::DenominatorZero(x));
    }
    Ok(y - (1.0 + lambda * u * u) / weight_den * fy / dfx)
}

/// `M(u) = (u - a)/(u - b)`: sends `a` to 0, `b` to infinity and infinity
/// to 1.
pub fn mobius(
    a: Complex64,
    b: Complex64,
    u: ExtendedComplex,
) -> Result<ExtendedComplex, StepError> {
    if a == b {
        return Err(StepError::DegenerateRoots);
    }
    Ok(match u {
        ExtendedComplex::Infinity => ExtendedComplex::ONE,
        ExtendedComplex::Finite(u) if u == b => ExtendedComplex::Infinity,
        ExtendedComplex::Finite(u) => ((u - a) / (u - b)).into(),
    })
}

/// `M^-1(v) = (v b - a)/(v - 1)`.
pub fn mobius_inverse(
    a: Complex64,
    b: Complex64,
    v: ExtendedComplex,
) -> Result<ExtendedComplex, StepError> {
    if a == b {
        return Err(StepError::DegenerateRoots);
    }
    Ok(match v {
        ExtendedComplex::Infinity => ExtendedComplex::Finite(b),
        ExtendedComplex::Finite(v) if v == Complex64::new(1.0, 0.0) => ExtendedComplex::Infinity,
        ExtendedComplex::Finite(v) => ((v * b - a) / (v - 1.0)).into(),
    })
}

/// Largest chordal gap between `A(O_h(A^-1(z)))` and `O_g(z)` over
/// `samples` pseudo-random points of `[-2, 2]^2`, where
/// `g = (z - a)(z - b)`, `A(z) = alpha1 z + alpha2`, `h = gamma g(A(z))` and
/// `O` is one un-conjugated step. Points where either step is undefined are
/// skipped.
pub fn scaling_conjugacy_check(
    g_roots: (Complex64, Complex64),
    (alpha1, alpha2): (Complex64, Complex64),
    gamma: Complex64,
    p: KimParameter,
    samples: usize,
) -> Result<f64, StepError> {
    if alpha1.re == 0.0 && alpha1.im == 0.0 {
        return Err(StepError::DegenerateAffine);
    }
    let (a, b) = g_roots;
    // h(z) = gamma alpha1^2 (z - a')(z - b') with a' = A^-1(a), b' = A^-1(b)
    let h_roots = ((a - alpha2) / alpha1, (b - alpha2) / alpha1);
    let h_leading = gamma * alpha1 * alpha1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1e);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let lhs = step_on_quadratic(h_leading, h_roots, (z - alpha2) / alpha1, p.lambda())
            .map(|w| alpha1 * w + alpha2);
        let rhs = step_on_quadratic(Complex64::new(1.0, 0.0), g_roots, z, p.lambda());
        if let (Ok(lhs), Ok(rhs)) = (lhs, rhs) {
            let d = ExtendedComplex::from(lhs).chordal_distance(&rhs.into());
            worst = worst.max(d);
        }
    }
    Ok(worst)
}
