use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::numcore::{ExtendedComplex, Polynomial};

/// Relative size below which a numerator and denominator that vanish
/// together are treated as a removable `0/0`.
pub const COMMON_ROOT_TOL: f64 = 1e-12;
/// Maximum number of derivative levels tried when resolving `0/0`.
pub const MAX_DEFLATION_LEVELS: usize = 4;
/// Relative tolerance of the derivative-pair consistency check.
const DERIVATIVE_CHECK_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("operator denominator is identically zero")]
    ZeroDenominator,
    #[error("derivative pair disagrees with the quotient rule at z = {at}")]
    DerivativeMismatch { at: Complex64 },
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum ApplyError {
    #[error("0/0 at z = {at} not resolved after {levels} derivative levels")]
    Indeterminate { at: ExtendedComplex, levels: usize },
}

/// How finite points are evaluated. The Kim family has a factored form that
/// avoids the catastrophic cancellation the expanded coefficients suffer
/// near the fourfold factor `(1+z)^4`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum EvalForm {
    Expanded,
    Kim { lambda: Complex64 },
}

#[derive(Clone, Debug)]
struct Chart {
    num: Polynomial,
    den: Polynomial,
}

impl Chart {
    /// The pair `(w^n num(1/w), w^n den(1/w))` with `n` the larger degree.
    fn reciprocal(num: &Polynomial, den: &Polynomial) -> Self {
        let len = num.degree().max(den.degree()) + 1;
        Chart {
            num: num.reversed(len),
            den: den.reversed(len),
        }
    }
}

/// A rational map `num/den` together with its derivative `dnum/dden`.
#[derive(Clone, Debug)]
pub struct RationalOperator {
    num: Polynomial,
    den: Polynomial,
    dnum: Polynomial,
    dden: Polynomial,
    label: String,
    form: EvalForm,
    value_at_infinity: Chart,
    derivative_at_infinity: Chart,
}

impl RationalOperator {
    /// Builds `num/den` with the derivative taken by the quotient rule,
    /// `(num' den - num den') / den^2`.
    pub fn new(
        num: Polynomial,
        den: Polynomial,
        label: impl Into<String>,
    ) -> Result<Self, OperatorError> {
        if den.is_zero() {
            return Err(OperatorError::ZeroDenominator);
        }
        let dnum = &(&num.derivative() * &den) - &(&num * &den.derivative());
        let dden = &den * &den;
        Ok(Self::assemble(
            num,
            den,
            dnum,
            dden,
            label.into(),
            EvalForm::Expanded,
        ))
    }

    /// Builds an operator from an explicitly supplied derivative pair. The
    /// pair is checked against the quotient rule at five sample points.
    pub fn with_derivative(
        num: Polynomial,
        den: Polynomial,
        dnum: Polynomial,
        dden: Polynomial,
        label: impl Into<String>,
    ) -> Result<Self, OperatorError> {
        if den.is_zero() || dden.is_zero() {
            return Err(OperatorError::ZeroDenominator);
        }
        check_derivative_pair(&num, &den, &dnum, &dden)?;
        Ok(Self::assemble(
            num,
            den,
            dnum,
            dden,
            label.into(),
            EvalForm::Expanded,
        ))
    }

    /// Marks the operator as a member of the Kim family so finite points are
    /// evaluated through the factored form.
    pub(crate) fn with_kim_form(mut self, lambda: Complex64) -> Self {
        self.form = EvalForm::Kim { lambda };
        self
    }

    fn assemble(
        num: Polynomial,
        den: Polynomial,
        dnum: Polynomial,
        dden: Polynomial,
        label: String,
        form: EvalForm,
    ) -> Self {
        let value_at_infinity = Chart::reciprocal(&num, &den);
        let derivative_at_infinity = Chart::reciprocal(&dnum, &dden);
        RationalOperator {
            num,
            den,
            dnum,
            dden,
            label,
            form,
            value_at_infinity,
            derivative_at_infinity,
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn dnum(&self) -> &Polynomial {
        &self.dnum
    }

    pub fn dden(&self) -> &Polynomial {
        &self.dden
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The Kim parameter when this operator came from the built-in family.
    pub fn kim_lambda(&self) -> Option<Complex64> {
        match self.form {
            EvalForm::Kim { lambda } => Some(lambda),
            EvalForm::Expanded => None,
        }
    }

    /// `num(z)/den(z)` on the sphere. Removable `0/0` points are resolved
    /// by derivative ratios; infinity is handled through `w = 1/z`.
    pub fn apply(&self, z: ExtendedComplex) -> Result<ExtendedComplex, ApplyError> {
        match z {
            ExtendedComplex::Infinity => {
                let chart = &self.value_at_infinity;
                ratio(&chart.num, &chart.den, Complex64::new(0.0, 0.0), z)
            }
            ExtendedComplex::Finite(z) => {
                if let EvalForm::Kim { lambda } = self.form {
                    if let Some(v) = kim_value(lambda, z) {
                        return Ok(v);
                    }
                }
                self.expanded(&self.num, &self.den, &self.value_at_infinity, z)
            }
        }
    }

    /// The derivative `O'(z)` in the plane coordinate. At infinity this is
    /// the limit of `O'(z)`; use [`RationalOperator::multiplier`] for the
    /// multiplier of a fixed point at infinity.
    pub fn derivative(&self, z: ExtendedComplex) -> Result<ExtendedComplex, ApplyError> {
        match z {
            ExtendedComplex::Infinity => {
                let chart = &self.derivative_at_infinity;
                ratio(&chart.num, &chart.den, Complex64::new(0.0, 0.0), z)
            }
            ExtendedComplex::Finite(z) => {
                if let EvalForm::Kim { lambda } = self.form {
                    if let Some(v) = kim_derivative(lambda, z) {
                        return Ok(v);
                    }
                }
                self.expanded(&self.dnum, &self.dden, &self.derivative_at_infinity, z)
            }
        }
    }

    /// Multiplier of `z` viewed as a fixed point: `O'(z)` for finite `z`,
    /// and `G'(0)` with `G(w) = 1/O(1/w)` at infinity.
    pub fn multiplier(&self, z: ExtendedComplex) -> Result<ExtendedComplex, ApplyError> {
        match z {
            ExtendedComplex::Finite(_) => self.derivative(z),
            ExtendedComplex::Infinity => {
                let chart = &self.value_at_infinity;
                // G = den_rev / num_rev
                let g_num = &(&chart.den.derivative() * &chart.num)
                    - &(&chart.den * &chart.num.derivative());
                let g_den = &chart.num * &chart.num;
                ratio(&g_num, &g_den, Complex64::new(0.0, 0.0), z)
            }
        }
    }

    fn expanded(
        &self,
        num: &Polynomial,
        den: &Polynomial,
        chart: &Chart,
        z: Complex64,
    ) -> Result<ExtendedComplex, ApplyError> {
        let at = ExtendedComplex::Finite(z);
        if z.norm() <= 1.0 {
            ratio(num, den, z, at)
        } else {
            // Both chart polynomials carry the same power of w, so their
            // ratio equals num(z)/den(z) with bounded intermediates.
            let w = z.inv();
            ratio(&chart.num, &chart.den, w, at)
        }
    }
}

impl fmt::Display for RationalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: num = {}, den = {}", self.label, self.num, self.den)
    }
}

/// `num(x)/den(x)` with derivative-ratio deflation at common roots.
fn ratio(
    num: &Polynomial,
    den: &Polynomial,
    x: Complex64,
    at: ExtendedComplex,
) -> Result<ExtendedComplex, ApplyError> {
    let mut num = num.clone();
    let mut den = den.clone();
    for level in 0..=MAX_DEFLATION_LEVELS {
        let n = num.eval(x);
        let d = den.eval(x);
        let n_small = n.norm() <= COMMON_ROOT_TOL * num.eval_abs(x);
        let d_small = d.norm() <= COMMON_ROOT_TOL * den.eval_abs(x);
        if !(n_small && d_small) {
            if d.re == 0.0 && d.im == 0.0 {
                return Ok(ExtendedComplex::Infinity);
            }
            return Ok((n / d).into());
        }
        if level == MAX_DEFLATION_LEVELS {
            break;
        }
        num = num.derivative();
        den = den.derivative();
    }
    Err(ApplyError::Indeterminate {
        at,
        levels: MAX_DEFLATION_LEVELS,
    })
}

fn cancels(diff: Complex64, a: f64, b: f64) -> bool {
    diff.norm() <= COMMON_ROOT_TOL * (a + b)
}

/// `-z^4 ((1+z)^4 - lam) / (lam z^4 - (1+z)^4)`, or `None` on a removable 0/0.
fn kim_value(lambda: Complex64, z: Complex64) -> Option<ExtendedComplex> {
    if z.norm() <= 1.0 {
        let a = (z + 1.0).powu(4);
        let z4 = z.powu(4);
        let n1 = a - lambda;
        let d = lambda * z4 - a;
        if cancels(n1, a.norm(), lambda.norm()) && cancels(d, (lambda * z4).norm(), a.norm()) {
            return None;
        }
        if d.re == 0.0 && d.im == 0.0 {
            return Some(ExtendedComplex::Infinity);
        }
        Some((-(z4 * n1) / d).into())
    } else {
        // Same map written in w = 1/z:
        // -((1+w)^4 - lam w^4) / (w^4 (lam - (1+w)^4))
        let w = z.inv();
        let b = (w + 1.0).powu(4);
        let w4 = w.powu(4);
        let n1 = b - lambda * w4;
        let d1 = lambda - b;
        if cancels(n1, b.norm(), (lambda * w4).norm()) && cancels(d1, lambda.norm(), b.norm()) {
            return None;
        }
        let d = w4 * d1;
        if d.re == 0.0 && d.im == 0.0 {
            return Some(ExtendedComplex::Infinity);
        }
        Some((-n1 / d).into())
    }
}

/// `-4 z^3 (1+z)^4 (lam q(z) - (1+z)^4) / ((1+z)^4 - lam z^4)^2` with
/// `q(z) = 1 - z + z^2 - z^3 + z^4`.
fn kim_derivative(lambda: Complex64, z: Complex64) -> Option<ExtendedComplex> {
    let q = |x: Complex64| (((x - 1.0) * x + 1.0) * x - 1.0) * x + 1.0;
    if z.norm() <= 1.0 {
        let a = (z + 1.0).powu(4);
        let z4 = z.powu(4);
        let lq = lambda * q(z);
        let top = lq - a;
        let d = a - lambda * z4;
        if cancels(top, lq.norm(), a.norm()) && cancels(d, a.norm(), (lambda * z4).norm()) {
            return None;
        }
        let dd = d * d;
        if dd.re == 0.0 && dd.im == 0.0 {
            return Some(ExtendedComplex::Infinity);
        }
        Some((-4.0 * z.powu(3) * a * top / dd).into())
    } else {
        // q is palindromic, so q(z) = z^4 q(w); the z^4 factors cancel.
        let w = z.inv();
        let b = (w + 1.0).powu(4);
        let lq = lambda * q(w);
        let top = lq - b;
        let d = b - lambda;
        if cancels(top, lq.norm(), b.norm()) && cancels(d, b.norm(), lambda.norm()) {
            return None;
        }
        let den = w.powu(3) * d * d;
        if den.re == 0.0 && den.im == 0.0 {
            return Some(ExtendedComplex::Infinity);
        }
        Some((-4.0 * b * top / den).into())
    }
}

/// Sample points for the derivative-pair check: fixed, irregular, inside
/// the disk of radius 0.9.
fn sample_points() -> [Complex64; 5] {
    [
        Complex64::new(0.31, 0.17),
        Complex64::new(-0.62, 0.44),
        Complex64::new(0.05, -0.83),
        Complex64::new(0.71, -0.29),
        Complex64::new(-0.23, -0.58),
    ]
}

fn check_derivative_pair(
    num: &Polynomial,
    den: &Polynomial,
    dnum: &Polynomial,
    dden: &Polynomial,
) -> Result<(), OperatorError> {
    let quotient = &(&num.derivative() * den) - &(num * &den.derivative());
    for z in sample_points() {
        let d = den.eval(z);
        if d.norm() <= COMMON_ROOT_TOL * den.eval_abs(z) {
            continue;
        }
        let lhs = dnum.eval(z) * d * d;
        let rhs = quotient.eval(z) * dden.eval(z);
        if (lhs - rhs).norm() > DERIVATIVE_CHECK_TOL * (lhs.norm() + rhs.norm()) {
            return Err(OperatorError::DerivativeMismatch { at: z });
        }
    }
    Ok(())
}
