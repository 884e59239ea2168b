use std::fmt;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Z,
    Lam,
}

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprAst {
    Number(Complex64),
    Var(Var),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>, Span),
    Pow(Box<ExprAst>, u32),
}

impl ExprAst {
    /// Direct evaluation. Division by zero follows IEEE semantics.
    pub fn eval(&self, z: Complex64, lam: Complex64) -> Complex64 {
        match self {
            ExprAst::Number(c) => *c,
            ExprAst::Var(Var::Z) => z,
            ExprAst::Var(Var::Lam) => lam,
            ExprAst::Neg(a) => -a.eval(z, lam),
            ExprAst::Add(a, b) => a.eval(z, lam) + b.eval(z, lam),
            ExprAst::Sub(a, b) => a.eval(z, lam) - b.eval(z, lam),
            ExprAst::Mul(a, b) => a.eval(z, lam) * b.eval(z, lam),
            ExprAst::Div(a, b, _) => a.eval(z, lam) / b.eval(z, lam),
            ExprAst::Pow(a, e) => a.eval(z, lam).powu(*e),
        }
    }

    /// True when `lam` occurs anywhere in the tree.
    pub fn uses_lambda(&self) -> bool {
        match self {
            ExprAst::Number(_) | ExprAst::Var(Var::Z) => false,
            ExprAst::Var(Var::Lam) => true,
            ExprAst::Neg(a) | ExprAst::Pow(a, _) => a.uses_lambda(),
            ExprAst::Add(a, b)
            | ExprAst::Sub(a, b)
            | ExprAst::Mul(a, b)
            | ExprAst::Div(a, b, _) => a.uses_lambda() || b.uses_lambda(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ExprAst::Add(..) | ExprAst::Sub(..) => 1,
            ExprAst::Mul(..) | ExprAst::Div(..) => 2,
            ExprAst::Neg(_) => 3,
            ExprAst::Pow(..) => 4,
            ExprAst::Number(c) if c.re != 0.0 && c.im != 0.0 => 1,
            ExprAst::Number(c) if c.re < 0.0 || c.im < 0.0 => 3,
            ExprAst::Number(_) | ExprAst::Var(_) => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &ExprAst, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    match (c.re, c.im) {
        (re, 0.0) => write!(f, "{re:?}"),
        (0.0, im) => write!(f, "{im:?}i"),
        (re, im) if im < 0.0 => write!(f, "{re:?}-{:?}i", -im),
        (re, im) => write!(f, "{re:?}+{im:?}i"),
    }
}

/// Prints source text that parses back to an equivalent tree.
impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Number(c) => write_number(f, *c),
            ExprAst::Var(Var::Z) => f.write_str("z"),
            ExprAst::Var(Var::Lam) => f.write_str("lam"),
            ExprAst::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, 4)
            }
            ExprAst::Add(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str("+")?;
                write_operand(f, b, 2)
            }
            ExprAst::Sub(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str("-")?;
                write_operand(f, b, 2)
            }
            ExprAst::Mul(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str("*")?;
                write_operand(f, b, 3)
            }
            ExprAst::Div(a, b, _) => {
                write_operand(f, a, 2)?;
                f.write_str("/")?;
                write_operand(f, b, 3)
            }
            ExprAst::Pow(a, e) => {
                write_operand(f, a, 5)?;
                write!(f, "^{e}")
            }
        }
    }
}
