use num_complex::Complex64;

use super::fixed::{FixedPointKind, FixedPointReport};
use super::{KimError, RationalOperator};
use crate::numcore::{ExtendedComplex, Polynomial};

/// Distance below which a parameter is routed to one of the exceptional
/// members of the family.
pub const SPECIAL_LAMBDA_TOL: f64 = 1e-12;

/// The family parameter `lambda`, with the exceptional values flagged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KimParameter {
    lambda: Complex64,
    is_zero: bool,
    is_one: bool,
    is_sixteen: bool,
    is_minus_four: bool,
}

impl KimParameter {
    pub fn new(lambda: Complex64) -> Self {
        let near =
            |v: f64| lambda == Complex64::new(v, 0.0) || (lambda - v).norm() <= SPECIAL_LAMBDA_TOL;
        KimParameter {
            lambda,
            is_zero: near(0.0),
            is_one: near(1.0),
            is_sixteen: near(16.0),
            is_minus_four: near(-4.0),
        }
    }

    pub fn real(lambda: f64) -> Self {
        Self::new(Complex64::new(lambda, 0.0))
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero
    }

    pub fn is_one(&self) -> bool {
        self.is_one
    }

    pub fn is_sixteen(&self) -> bool {
        self.is_sixteen
    }

    pub fn is_minus_four(&self) -> bool {
        self.is_minus_four
    }

    pub fn is_special(&self) -> bool {
        self.is_zero || self.is_one || self.is_sixteen || self.is_minus_four
    }
}

impl From<Complex64> for KimParameter {
    fn from(lambda: Complex64) -> Self {
        Self::new(lambda)
    }
}

/// `(1+z)^4` as a polynomial.
pub(crate) fn one_plus_z_fourth() -> Polynomial {
    Polynomial::from_real(&[1.0, 4.0, 6.0, 4.0, 1.0])
}

/// The quartic factor `lam (1 - z + z^2 - z^3 + z^4) - (1+z)^4` of the
/// derivative numerator. Its roots are the free critical points other
/// than `-1`.
pub fn critical_quartic(lambda: Complex64) -> Polynomial {
    let one = Complex64::new(1.0, 0.0);
    Polynomial::new(vec![
        lambda - one,
        -lambda - 4.0,
        lambda - 6.0,
        -lambda - 4.0,
        lambda - one,
    ])
}

/// The conjugated fixed-point operator of the family on quadratics,
///
/// `O(z) = -z^4 (1 - lam + 4z + 6z^2 + 4z^3 + z^4) / (-1 - 4z - 6z^2 - 4z^3 + (lam - 1) z^4)`,
///
/// with derivative numerator `-4 z^3 (1+z)^4 (lam q(z) - (1+z)^4)` over the
/// squared denominator.
pub fn build_operator(p: KimParameter) -> RationalOperator {
    let lambda = p.lambda();
    let one = Complex64::new(1.0, 0.0);
    let num = Polynomial::new(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        lambda - one,
        Complex64::new(-4.0, 0.0),
        Complex64::new(-6.0, 0.0),
        Complex64::new(-4.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ]);
    let den = Polynomial::new(vec![
        Complex64::new(-1.0, 0.0),
        Complex64::new(-4.0, 0.0),
        Complex64::new(-6.0, 0.0),
        Complex64::new(-4.0, 0.0),
        lambda - one,
    ]);
    let dnum = (&Polynomial::monomial(Complex64::new(-4.0, 0.0), 3) * &one_plus_z_fourth())
        * critical_quartic(lambda);
    let dden = &den * &den;
    let label = format!("kim(lambda={}{:+}i)", lambda.re, lambda.im);
    RationalOperator::with_derivative(num, den, dnum, dden, label)
        .expect("closed-form derivative of the family operator is consistent")
        .with_kim_form(lambda)
}

/// Multiplier of the strange fixed point `z = 1`, `64 / (16 - lam)`,
/// cross-checked against the operator derivative evaluated at 1.
pub fn multiplier_at_one(p: KimParameter) -> Result<Complex64, KimError> {
    if p.is_sixteen() {
        return Err(KimError::UndefinedAtSixteen);
    }
    let closed = 64.0 / (Complex64::new(16.0, 0.0) - p.lambda());
    let op = build_operator(p);
    let evaluated =
        op.derivative(ExtendedComplex::ONE)?
            .finite()
            .ok_or(KimError::MultiplierMismatch {
                closed,
                evaluated: Complex64::new(f64::INFINITY, 0.0),
            })?;
    if (evaluated - closed).norm() > 1e-10 * closed.norm() {
        return Err(KimError::MultiplierMismatch { closed, evaluated });
    }
    Ok(closed)
}

/// Outcome of [`classify_one`].
#[derive(Clone, Debug, PartialEq)]
pub enum OneClassification {
    Fixed(FixedPointReport),
    NotFixed,
}

/// Stability of `z = 1` from the disk test on `|lam - 16|` against 64.
/// `tol` is the half-width of the parabolic band around the circle.
///
/// At `lam = 16` the point 1 is not fixed (it maps to -1). At `lam = 1` it
/// is still fixed, with multiplier 64/15, and is reported as repelling.
pub fn classify_one(p: KimParameter, tol: f64) -> OneClassification {
    if p.is_sixteen() {
        return OneClassification::NotFixed;
    }
    let distance = (p.lambda() - 16.0).norm();
    let kind = if (distance - 64.0).abs() <= tol {
        FixedPointKind::Neutral
    } else if distance > 64.0 {
        FixedPointKind::Attracting
    } else {
        FixedPointKind::Repelling
    };
    let multiplier = 64.0 / (Complex64::new(16.0, 0.0) - p.lambda());
    OneClassification::Fixed(FixedPointReport {
        point: ExtendedComplex::ONE,
        multiplier: multiplier.into(),
        kind,
        is_strange: true,
    })
}
