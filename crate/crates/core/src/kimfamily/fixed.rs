use std::cmp::Ordering;
use std::fmt;

use super::{build_operator, KimError, KimParameter, RationalOperator};
use crate::numcore::{
    find_roots, ExtendedComplex, Polynomial, DEFAULT_MAX_SWEEPS, DEFAULT_ROOT_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedPointKind {
    Superattracting,
    Attracting,
    /// Multiplier of modulus one (parabolic when the multiplier is a root
    /// of unity).
    Neutral,
    Repelling,
}

impl FixedPointKind {
    /// Classification by multiplier modulus; `tol` is both the
    /// superattracting threshold and the half-width of the neutral band.
    pub fn from_multiplier(m: ExtendedComplex, tol: f64) -> Self {
        let r = m.norm();
        if r <= tol {
            FixedPointKind::Superattracting
        } else if (r - 1.0).abs() <= tol {
            FixedPointKind::Neutral
        } else if r < 1.0 {
            FixedPointKind::Attracting
        } else {
            FixedPointKind::Repelling
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FixedPointKind::Superattracting => "superattracting",
            FixedPointKind::Attracting => "attracting",
            FixedPointKind::Neutral => "parabolic",
            FixedPointKind::Repelling => "repelling",
        }
    }
}

impl fmt::Display for FixedPointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointReport {
    pub point: ExtendedComplex,
    pub multiplier: ExtendedComplex,
    pub kind: FixedPointKind,
    /// True unless the point is 0 or infinity, the images of the roots.
    pub is_strange: bool,
}

/// Tolerances for [`fixed_points`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointOptions {
    /// Residual tolerance handed to the root finder.
    pub root_tol: f64,
    pub max_sweeps: usize,
    /// Chordal bound on `|O(r) - r|` for a root of `num - z den` to count as
    /// a fixed point. Common roots of `num` and `den` fail this test.
    pub fixed_tol: f64,
    /// Roots closer than this are reported once.
    pub dedup_tol: f64,
    /// Superattracting threshold and neutral band half-width.
    pub kind_tol: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            root_tol: DEFAULT_ROOT_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            fixed_tol: 1e-6,
            dedup_tol: 1e-8,
            kind_tol: 1e-9,
        }
    }
}

/// Fixed points of the family operator at `p`, infinity included.
pub fn fixed_points(
    p: KimParameter,
    opts: &FixedPointOptions,
) -> Result<Vec<FixedPointReport>, KimError> {
    fixed_points_of(&build_operator(p), opts)
}

/// Fixed points of an arbitrary rational operator: the roots of
/// `num(z) - z den(z)` that survive substitution, plus infinity when it is
/// fixed. Sorted by modulus, then argument.
pub fn fixed_points_of(
    op: &RationalOperator,
    opts: &FixedPointOptions,
) -> Result<Vec<FixedPointReport>, KimError> {
    let equation = op.num() - &op.den().shifted(1);
    if equation.is_zero() {
        return Err(KimError::IdentityMap);
    }
    let mut points: Vec<ExtendedComplex> = Vec::new();
    if equation.degree() > 0 {
        for r in finite_roots(&equation, opts)? {
            let r = if r.norm() <= opts.dedup_tol {
                ExtendedComplex::ZERO
            } else {
                r
            };
            let image = op.apply(r)?;
            if image.chordal_distance(&r) > opts.fixed_tol {
                continue;
            }
            if points
                .iter()
                .any(|q| q.chordal_distance(&r) <= opts.dedup_tol)
            {
                continue;
            }
            points.push(r);
        }
    }
    if op.apply(ExtendedComplex::Infinity)?.is_infinite() {
        points.push(ExtendedComplex::Infinity);
    }
    points.sort_by(compare_points);

    points
        .into_iter()
        .map(|point| {
            let multiplier = op.multiplier(point)?;
            Ok(FixedPointReport {
                point,
                multiplier,
                kind: FixedPointKind::from_multiplier(multiplier, opts.kind_tol),
                is_strange: point != ExtendedComplex::ZERO && !point.is_infinite(),
            })
        })
        .collect()
}

fn finite_roots(
    equation: &Polynomial,
    opts: &FixedPointOptions,
) -> Result<Vec<ExtendedComplex>, KimError> {
    Ok(find_roots(equation, opts.root_tol, opts.max_sweeps)?.roots)
}

/// Total order on sphere points: by modulus, then argument; infinity last.
pub(crate) fn compare_points(a: &ExtendedComplex, b: &ExtendedComplex) -> Ordering {
    match (a.finite(), b.finite()) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x
            .norm()
            .total_cmp(&y.norm())
            .then(x.arg().total_cmp(&y.arg())),
    }
}
