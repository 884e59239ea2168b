use num_complex::Complex64;

use super::ast::{ExprAst, Var};

fn num(re: f64) -> ExprAst {
    ExprAst::Number(Complex64::new(re, 0.0))
}

fn is_num(e: &ExprAst, v: f64) -> bool {
    matches!(e, ExprAst::Number(c) if *c == Complex64::new(v, 0.0))
}

fn add(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a, b) {
        (ExprAst::Number(x), ExprAst::Number(y)) => ExprAst::Number(x + y),
        (a, b) if is_num(&a, 0.0) => b,
        (a, b) if is_num(&b, 0.0) => a,
        (a, b) => ExprAst::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a, b) {
        (ExprAst::Number(x), ExprAst::Number(y)) => ExprAst::Number(x - y),
        (a, b) if is_num(&b, 0.0) => a,
        (a, b) if is_num(&a, 0.0) => neg(b),
        (a, b) => ExprAst::Sub(Box::new(a), Box::new(b)),
    }
}

fn neg(a: ExprAst) -> ExprAst {
    match a {
        ExprAst::Number(x) => ExprAst::Number(-x),
        ExprAst::Neg(inner) => *inner,
        a => ExprAst::Neg(Box::new(a)),
    }
}

fn mul(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a, b) {
        (ExprAst::Number(x), ExprAst::Number(y)) => ExprAst::Number(x * y),
        (a, b) if is_num(&a, 0.0) || is_num(&b, 0.0) => num(0.0),
        (a, b) if is_num(&a, 1.0) => b,
        (a, b) if is_num(&b, 1.0) => a,
        (a, b) => ExprAst::Mul(Box::new(a), Box::new(b)),
    }
}

fn pow(a: ExprAst, e: u32) -> ExprAst {
    match e {
        0 => num(1.0),
        1 => a,
        _ => ExprAst::Pow(Box::new(a), e),
    }
}

/// `d/dz` by the sum, product, quotient and power rules, with constant
/// folding and the identities `x + 0`, `x * 1`, `x * 0`, `x^1`.
pub fn symbolic_derivative(ast: &ExprAst) -> ExprAst {
    match ast {
        ExprAst::Number(_) | ExprAst::Var(Var::Lam) => num(0.0),
        ExprAst::Var(Var::Z) => num(1.0),
        ExprAst::Neg(a) => neg(symbolic_derivative(a)),
        ExprAst::Add(a, b) => add(symbolic_derivative(a), symbolic_derivative(b)),
        ExprAst::Sub(a, b) => sub(symbolic_derivative(a), symbolic_derivative(b)),
        ExprAst::Mul(a, b) => add(
            mul(symbolic_derivative(a), (**b).clone()),
            mul((**a).clone(), symbolic_derivative(b)),
        ),
        ExprAst::Div(a, b, span) => {
            let (da, db) = (symbolic_derivative(a), symbolic_derivative(b));
            let top = sub(mul(da, (**b).clone()), mul((**a).clone(), db));
            if is_num(&top, 0.0) {
                return num(0.0);
            }
            ExprAst::Div(Box::new(top), Box::new(pow((**b).clone(), 2)), *span)
        }
        ExprAst::Pow(_, 0) => num(0.0),
        ExprAst::Pow(a, e) => mul(
            mul(num(*e as f64), pow((**a).clone(), e - 1)),
            symbolic_derivative(a),
        ),
    }
}
