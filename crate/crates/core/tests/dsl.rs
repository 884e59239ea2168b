use basinscope::dsl::{
    compile, compile_source, parse, symbolic_derivative, ParseError, KIM_SOURCE,
};
use basinscope::kimfamily::{build_operator, KimParameter};
use basinscope::ExtendedComplex;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_z(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn random_lambda(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-50.0..80.0), rng.gen_range(-65.0..65.0))
}

#[test]
fn kim_source_matches_builtin_operator() {
    let ast = parse(KIM_SOURCE).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let lambda = random_lambda(&mut rng);
        let z = random_z(&mut rng);
        let compiled = compile(&ast, lambda).unwrap();
        let builtin = build_operator(KimParameter::new(lambda));
        let a = compiled.apply(z.into()).unwrap();
        let b = builtin.apply(z.into()).unwrap();
        worst = worst.max(a.chordal_distance(&b));
    }
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn kim_source_at_one_is_the_quintic_map() {
    let op = compile_source(KIM_SOURCE, c(1.0, 0.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let z = random_z(&mut rng);
        let den = (1.0 + 2.0 * z) * (1.0 + 2.0 * z + 2.0 * z * z);
        let expected = ExtendedComplex::from(z.powu(5) * (2.0 + z) * (2.0 + 2.0 * z + z * z) / den);
        assert!(op.apply(z.into()).unwrap().chordal_distance(&expected) < 1e-12);
    }
}

#[test]
fn derivative_of_kim_source_at_one() {
    let d = symbolic_derivative(&parse(KIM_SOURCE).unwrap());
    let got = d.eval(c(1.0, 0.0), c(5.0, 0.0));
    let expected = c(64.0 / 11.0, 0.0);
    assert!((got - expected).norm() <= 1e-10 * expected.norm(), "{got}");
}

const CORPUS: [&str; 20] = [
    "z",
    "z^2",
    "z^4",
    "-z^4",
    "z^2 + lam",
    "(z^2+1)/(z-1)",
    "1/z",
    "z - (z^3-1)/(3*z^2)",
    "z - (z^2-lam)/(2*z)",
    "(z^3 + 2.5i*z)/(lam*z^2 + 1)",
    "(1+z)^4/(1-z)^3",
    "lam*z*(1-z)",
    "(z^5 + lam)/(z^5 - lam)",
    "-(z+1)^3/(z-2)",
    "z^2/(z+0.5)/(z-0.25)",
    "1/(1/z + 1/(z+1))",
    "(2+3i)*z^3 - (1-1i)*z + lam",
    "z*(z-1)*(z+1)*(z-2i)/(z^2+4)",
    "((z-1)/(z+1))^3",
    KIM_SOURCE,
];

#[test]
fn compiled_and_direct_evaluation_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for src in CORPUS {
        let ast = parse(src).unwrap();
        let lambda = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let op = compile(&ast, lambda).unwrap();
        let mut checked = 0;
        for _ in 0..100 {
            let z = random_z(&mut rng);
            let direct = ast.eval(z, lambda);
            if !direct.is_finite() || direct.norm() > 1e8 {
                continue;
            }
            let got = op.apply(z.into()).unwrap().finite().unwrap();
            assert!(
                (got - direct).norm() <= 1e-10 * direct.norm().max(1.0),
                "{src} at z={z}: {got} vs {direct}"
            );
            checked += 1;
        }
        assert!(checked > 90, "{src}");
    }
}

#[test]
fn symbolic_derivative_matches_central_differences() {
    let h = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for src in CORPUS {
        let ast = parse(src).unwrap();
        let d = symbolic_derivative(&ast);
        let lambda = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        for _ in 0..50 {
            let z = random_z(&mut rng);
            // keep away from poles, where differences are meaningless
            let f = |w: Complex64| ast.eval(w, lambda);
            if [z, z + h, z - h]
                .iter()
                .any(|&w| !f(w).is_finite() || f(w).norm() > 1e4)
            {
                continue;
            }
            let fd = (f(z + h) - f(z - h)) / (2.0 * h);
            let exact = d.eval(z, lambda);
            if exact.norm() > 1e5 {
                continue;
            }
            assert!(
                (fd - exact).norm() <= 1e-5 * exact.norm().max(1.0),
                "{src} at {z}: {fd} vs {exact}"
            );
        }
    }
}

#[test]
fn compiled_derivative_matches_symbolic() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for src in CORPUS {
        let ast = parse(src).unwrap();
        let d = symbolic_derivative(&ast);
        let lambda = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let op = compile(&ast, lambda).unwrap();
        for _ in 0..20 {
            let z = random_z(&mut rng);
            let exact = d.eval(z, lambda);
            if !exact.is_finite() || exact.norm() > 1e6 {
                continue;
            }
            let got = op.derivative(z.into()).unwrap().finite().unwrap();
            assert!(
                (got - exact).norm() <= 1e-8 * exact.norm().max(1.0),
                "{src}: {got} vs {exact}"
            );
        }
    }
}

#[test]
fn negative_exponent_rejected() {
    assert!(matches!(parse("z^-1"), Err(ParseError::Exponent { .. })));
}

proptest! {
    #[test]
    fn parse_never_panics(s in "\\PC{0,64}") {
        let _ = parse(&s);
    }

    #[test]
    fn parse_never_panics_on_grammar_soup(s in "[z lam0-9.i()+*/^-]{0,80}") {
        if let Ok(ast) = parse(&s) {
            let again = parse(&ast.to_string());
            prop_assert!(again.is_ok(), "{} -> {}", s, ast);
        }
    }
}
