use num_complex::Complex64;
use thiserror::Error;

use super::ast::{ExprAst, Span, Var};
use crate::kimfamily::{OperatorError, RationalOperator};
use crate::numcore::Polynomial;

/// Largest degree allowed for any intermediate polynomial.
pub const MAX_DEGREE: usize = 64;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CompileError {
    #[error("polynomial degree {degree} exceeds the limit of {MAX_DEGREE}")]
    DegreeOverflow { degree: usize },
    #[error("division by an identically zero expression at bytes {}..{}", span.start, span.end)]
    DivisionByZero { span: Span },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// `num / den` during normalization.
#[derive(Clone, Debug)]
struct Ratio {
    num: Polynomial,
    den: Polynomial,
}

fn one() -> Polynomial {
    Polynomial::constant(Complex64::new(1.0, 0.0))
}

fn check(p: Polynomial) -> Result<Polynomial, CompileError> {
    if p.degree() > MAX_DEGREE {
        Err(CompileError::DegreeOverflow { degree: p.degree() })
    } else {
        Ok(p)
    }
}

impl Ratio {
    fn poly(p: Polynomial) -> Self {
        Ratio { num: p, den: one() }
    }

    /// Cancels a shared power of `z` and folds a constant denominator into
    /// the numerator.
    fn tidy(mut self) -> Self {
        let low = |p: &Polynomial| {
            p.coeffs()
                .iter()
                .take_while(|c| c.re == 0.0 && c.im == 0.0)
                .count()
        };
        if !self.num.is_zero() {
            let k = low(&self.num).min(low(&self.den));
            if k > 0 {
                self.num = Polynomial::new(self.num.coeffs()[k..].to_vec());
                self.den = Polynomial::new(self.den.coeffs()[k..].to_vec());
            }
        } else {
            self.den = one();
        }
        if self.den.degree() == 0 && self.den.coeffs()[0] != Complex64::new(1.0, 0.0) {
            self.num = self.num.scaled(self.den.coeffs()[0].inv());
            self.den = one();
        }
        self
    }

    fn add(self, other: Ratio, sign: f64) -> Result<Ratio, CompileError> {
        let rhs = other.num.scaled(Complex64::new(sign, 0.0));
        if self.den == other.den {
            return Ok(Ratio {
                num: check(&self.num + &rhs)?,
                den: self.den,
            }
            .tidy());
        }
        let num = check(&check(&self.num * &other.den)? + &check(&rhs * &self.den)?)?;
        let den = check(&self.den * &other.den)?;
        Ok(Ratio { num, den }.tidy())
    }

    fn mul(self, other: Ratio) -> Result<Ratio, CompileError> {
        Ok(Ratio {
            num: check(&self.num * &other.num)?,
            den: check(&self.den * &other.den)?,
        }
        .tidy())
    }

    fn pow(self, e: u32) -> Result<Ratio, CompileError> {
        let bound = self.num.degree().max(self.den.degree()) as u64 * e as u64;
        if bound > MAX_DEGREE as u64 {
            return Err(CompileError::DegreeOverflow {
                degree: bound.min(usize::MAX as u64) as usize,
            });
        }
        Ok(Ratio {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
        .tidy())
    }
}

fn normalize(ast: &ExprAst, lambda: Complex64) -> Result<Ratio, CompileError> {
    Ok(match ast {
        ExprAst::Number(c) => Ratio::poly(Polynomial::constant(*c)),
        ExprAst::Var(Var::Z) => Ratio::poly(Polynomial::identity()),
        ExprAst::Var(Var::Lam) => Ratio::poly(Polynomial::constant(lambda)),
        ExprAst::Neg(a) => {
            let r = normalize(a, lambda)?;
            Ratio {
                num: -r.num,
                den: r.den,
            }
        }
        ExprAst::Add(a, b) => normalize(a, lambda)?.add(normalize(b, lambda)?, 1.0)?,
        ExprAst::Sub(a, b) => normalize(a, lambda)?.add(normalize(b, lambda)?, -1.0)?,
        ExprAst::Mul(a, b) => normalize(a, lambda)?.mul(normalize(b, lambda)?)?,
        ExprAst::Div(a, b, span) => {
            let d = normalize(b, lambda)?;
            if d.num.is_zero() {
                return Err(CompileError::DivisionByZero { span: *span });
            }
            normalize(a, lambda)?.mul(Ratio {
                num: d.den,
                den: d.num,
            })?
        }
        ExprAst::Pow(a, e) => normalize(a, lambda)?.pow(*e)?,
    })
}

/// Substitutes `lam` and reduces the tree to a single polynomial ratio.
pub fn compile(ast: &ExprAst, lambda: Complex64) -> Result<RationalOperator, CompileError> {
    let r = normalize(ast, lambda)?;
    let label = format!("{ast} (lam={}{:+}i)", lambda.re, lambda.im);
    Ok(RationalOperator::new(r.num, r.den, label)?)
}
