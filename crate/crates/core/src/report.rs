//! Text report of fixed points, critical points and special parameter
//! values.

use std::fmt::Write;

use num_complex::Complex64;

use crate::dsl::{compile_source, DslError};
use crate::kimfamily::{
    build_operator, classify_one, critical_points, fixed_points_of, FixedPointKind,
    FixedPointOptions, FixedPointReport, KimParameter, OneClassification, RationalOperator,
};
use crate::numcore::{
    find_roots, ExtendedComplex, Polynomial, DEFAULT_MAX_SWEEPS, DEFAULT_ROOT_TOL,
};
use crate::orbit::detect_cycle;

/// Half-width of the parabolic band for `|lam - 16| = 64`.
pub const ONE_BAND_TOL: f64 = 1e-9;
/// Iteration budget suggested when an attractor is parabolic.
pub const PARABOLIC_MAXITER: usize = 400;
/// `|O'|` below which a root of the derivative numerator of a custom
/// operator counts as critical.
const CRITICAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Analysis {
    pub text: String,
    pub fixed: Vec<FixedPointReport>,
    /// Stability of `z = 1`; only for the built-in family.
    pub one: Option<OneClassification>,
    /// Some section could not be computed.
    pub had_errors: bool,
}

/// `re,im` with the shortest round-tripping decimals; `-0` prints as `0`
/// and magnitudes outside `[1e-5, 1e16)` use exponent notation.
pub fn format_complex(z: Complex64) -> String {
    format!("{},{}", format_real(z.re), format_real(z.im))
}

fn format_real(x: f64) -> String {
    let x = x + 0.0;
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn format_point(z: ExtendedComplex) -> String {
    match z.finite() {
        Some(w) => format_complex(w),
        None => "inf".into(),
    }
}

fn write_poly(out: &mut String, name: &str, p: &Polynomial) {
    let coeffs: Vec<String> = p.coeffs().iter().map(|&c| format_complex(c)).collect();
    let _ = writeln!(out, "{name} = [{}]", coeffs.join("; "));
}

/// Report for the built-in family at `lambda`, or for the expression
/// `op_source` compiled at `lambda`. Fails only when the expression does
/// not compile; numerical failures become a diagnostics section.
pub fn analyze_report(lambda: Complex64, op_source: Option<&str>) -> Result<Analysis, DslError> {
    let p = KimParameter::new(lambda);
    let op = match op_source {
        Some(src) => compile_source(src, lambda)?,
        None => build_operator(p),
    };
    let mut out = String::new();
    let mut diagnostics = Vec::new();

    let _ = writeln!(out, "[operator]");
    let _ = writeln!(out, "label = {}", op.label());
    let _ = writeln!(out, "lambda = {}", format_complex(lambda));
    write_poly(&mut out, "numerator", op.num());
    write_poly(&mut out, "denominator", op.den());

    let fixed = match fixed_points_of(&op, &FixedPointOptions::default()) {
        Ok(f) => f,
        Err(e) => {
            diagnostics.push(format!("fixed points: {e}"));
            Vec::new()
        }
    };
    let _ = writeln!(out, "\n[fixed points]");
    let _ = writeln!(out, "count = {}", fixed.len());
    for f in &fixed {
        let _ = writeln!(
            out,
            "{} : {}{}, multiplier {}, |m| = {}",
            format_point(f.point),
            f.kind,
            if f.is_strange { " strange" } else { "" },
            format_point(f.multiplier),
            f.multiplier.norm()
        );
    }

    let _ = writeln!(out, "\n[critical points]");
    if op_source.is_some() {
        match custom_critical_points(&op) {
            Ok(pts) => {
                let _ = writeln!(out, "count = {}", pts.len());
                for z in pts {
                    let _ = writeln!(out, "{}", format_complex(z));
                }
            }
            Err(e) => diagnostics.push(format!("critical points: {e}")),
        }
    } else {
        match critical_points(p) {
            Ok(set) if set.points.is_empty() => {
                let _ = writeln!(out, "none");
            }
            Ok(set) => {
                let free: Vec<String> = set.points.iter().map(|&z| format_point(z)).collect();
                let _ = writeln!(out, "free = {}", free.join("; "));
                for (i, [a, b]) in set.reciprocal_pairs.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "pair P{} = {} ; {}",
                        i + 1,
                        format_point(*a),
                        format_point(*b)
                    );
                }
            }
            Err(e) => diagnostics.push(format!("critical points: {e}")),
        }
    }

    let one = op_source.is_none().then(|| classify_one(p, ONE_BAND_TOL));
    if let Some(c) = &one {
        let _ = writeln!(out, "\n[z = 1]");
        match c {
            OneClassification::Fixed(r) => {
                let _ = writeln!(
                    out,
                    "{}, multiplier {}, |m| = {}",
                    r.kind,
                    format_point(r.multiplier),
                    r.multiplier.norm()
                );
            }
            OneClassification::NotFixed => {
                let _ = writeln!(out, "not fixed");
            }
        }
    }

    let mut notes = Vec::new();
    if op_source.is_none() {
        if p.is_zero() {
            notes.push("no free critical points; operator ≡ z⁴ (Ostrowski)".to_string());
        }
        if p.is_one() {
            notes.push(
                "operator reduces to z^5 (2+z)(2+2z+z^2) / ((1+2z)(1+2z+2z^2)); free critical points collapse onto the primitive cube roots of unity; z=1 stays fixed and repels"
                    .to_string(),
            );
        }
        if p.is_minus_four() {
            notes.push("free critical points collapse onto -1 and ±i".to_string());
        }
        if p.is_sixteen() {
            match detect_cycle(&op, ExtendedComplex::new(-1.0, 0.0), 0, 8, 1e-9) {
                Some((period, pts)) => {
                    let pts: Vec<String> = pts.iter().map(|&z| format_point(z)).collect();
                    notes.push(format!(
                        "z=1 is not fixed; {period}-cycle {{{}}}",
                        pts.join(", ")
                    ));
                }
                None => {
                    diagnostics.push("expected a 2-cycle through -1 at lambda = 16".to_string())
                }
            }
        }
        if let Some(OneClassification::Fixed(r)) = &one {
            if r.kind == FixedPointKind::Neutral {
                notes.push("z=1 parabolic".to_string());
            }
        }
    }
    let parabolic: Vec<String> = fixed
        .iter()
        .filter(|f| f.kind == FixedPointKind::Neutral)
        .map(|f| format_point(f.point))
        .collect();
    if !parabolic.is_empty() {
        notes.push(format!(
            "warning: parabolic attractor at {}; basins converge slowly, use maxiter >= {PARABOLIC_MAXITER}",
            parabolic.join("; ")
        ));
    }
    if !notes.is_empty() {
        let _ = writeln!(out, "\n[notes]");
        for n in &notes {
            let _ = writeln!(out, "{n}");
        }
    }
    if !diagnostics.is_empty() {
        let _ = writeln!(out, "\n[diagnostics]");
        for d in &diagnostics {
            let _ = writeln!(out, "{d}");
        }
    }

    Ok(Analysis {
        text: out,
        fixed,
        one,
        had_errors: !diagnostics.is_empty(),
    })
}

/// Finite roots of the derivative numerator at which `O'` really vanishes;
/// roots cancelled by the denominator are dropped.
fn custom_critical_points(
    op: &RationalOperator,
) -> Result<Vec<Complex64>, crate::numcore::RootError> {
    let dnum = op.dnum();
    if dnum.degree() == 0 {
        return Ok(Vec::new());
    }
    let mut out: Vec<Complex64> = Vec::new();
    for r in find_roots(dnum, DEFAULT_ROOT_TOL, DEFAULT_MAX_SWEEPS)?.values() {
        let small = op
            .derivative(r.into())
            .map(|d| d.norm() < CRITICAL_TOL)
            .unwrap_or(false);
        if small && out.iter().all(|q| (q - r).norm() > 1e-6) {
            out.push(r);
        }
    }
    out.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(a.arg().total_cmp(&b.arg()))
    });
    Ok(out)
}
