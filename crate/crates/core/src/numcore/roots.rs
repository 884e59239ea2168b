use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use super::{ExtendedComplex, Polynomial};

/// Default residual tolerance for [`find_roots`], relative to the largest
/// coefficient modulus.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
/// Default sweep budget for [`find_roots`].
pub const DEFAULT_MAX_SWEEPS: usize = 500;

/// Angular offset of the initial guesses, breaks the symmetry of
/// polynomials like `z^n - 1` whose roots sit on the guess circle.
const GUESS_ROTATION: f64 = 0.4;
/// Sweeps spent polishing after every residual is already within tolerance.
const POLISH_SWEEPS: usize = 3;

/// All roots of a polynomial, listed with multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<ExtendedComplex>,
    /// Bound `tol` such that `|p(r)| <= tol * scale(p)` for every root.
    pub residual_bound: f64,
}

impl RootSet {
    /// The roots as finite complex numbers (roots are never infinite).
    pub fn values(&self) -> Vec<Complex64> {
        self.roots.iter().filter_map(|r| r.finite()).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("polynomial of degree 0 has no roots")]
    ConstantPolynomial,
    #[error("root tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("root finder did not converge: worst scaled residual {worst_residual:.3e} after {sweeps} sweeps")]
    NonConvergence {
        best: RootSet,
        worst_residual: f64,
        sweeps: usize,
    },
}

/// Simultaneous Aberth–Ehrlich iteration for every root of `p`.
///
/// Initial guesses lie on the circle of radius `1 + max |c_i / c_lead|`
/// rotated by a fixed angle. Multiple roots come back as clusters of nearby
/// values; no deduplication is done here.
pub fn find_roots(p: &Polynomial, tol: f64, max_sweeps: usize) -> Result<RootSet, RootError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(RootError::InvalidTolerance(tol));
    }
    let n = p.degree();
    if n == 0 {
        return Err(RootError::ConstantPolynomial);
    }
    let scale = p.scale();
    let lead = p.leading();
    let coeffs = p.coeffs();

    if n == 1 {
        let r = -coeffs[0] / coeffs[1];
        return finish(p, vec![r], tol, scale, 0);
    }

    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / n as f64 + GUESS_ROTATION))
        .collect();

    let mut polish = 0usize;
    let mut sweeps = 0usize;
    while sweeps < max_sweeps {
        sweeps += 1;
        let mut max_step = 0.0f64;
        for i in 0..n {
            let zi = z[i];
            let (v, dv) = p.eval_with_derivative(zi);
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let repulsion: Complex64 = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &zj)| {
                    let d = zi - zj;
                    if d.re == 0.0 && d.im == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = if dv.re == 0.0 && dv.im == 0.0 {
                // Stationary point: nudge off it deterministically.
                Complex64::new(1e-8 * (1.0 + zi.norm()), 1e-8)
            } else {
                let ratio = v / dv;
                let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
                if denom.norm() == 0.0 {
                    ratio
                } else {
                    ratio / denom
                }
            };
            if step.re.is_finite() && step.im.is_finite() {
                z[i] = zi - step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if worst_residual(p, &z, scale) <= tol {
            polish += 1;
            if polish > POLISH_SWEEPS || max_step <= 4.0 * f64::EPSILON {
                break;
            }
        } else {
            polish = 0;
        }
    }
    finish(p, z, tol, scale, sweeps)
}

fn worst_residual(p: &Polynomial, z: &[Complex64], scale: f64) -> f64 {
    let scale = if scale > 0.0 { scale } else { 1.0 };
    z.iter()
        .map(|&r| p.eval(r).norm() / scale)
        .fold(0.0, f64::max)
}

fn finish(
    p: &Polynomial,
    z: Vec<Complex64>,
    tol: f64,
    scale: f64,
    sweeps: usize,
) -> Result<RootSet, RootError> {
    let worst = worst_residual(p, &z, scale);
    let set = RootSet {
        roots: z.into_iter().map(ExtendedComplex::from).collect(),
        residual_bound: tol,
    };
    if worst <= tol && set.roots.iter().all(|r| !r.is_infinite()) {
        Ok(set)
    } else {
        Err(RootError::NonConvergence {
            best: set,
            worst_residual: worst,
            sweeps,
        })
    }
}
