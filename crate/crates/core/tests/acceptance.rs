//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with the measured quantity. Tolerances and runtime budgets are pinned
//! below.
//!
//! `9a` (share of white parameter-plane pixels inside the stability disk)
//! does not hold for this family: outside the disk z = 1 attracts, so the
//! free critical orbit often neither reaches 0 nor escapes, and those
//! parameters are white as well. It is evaluated exactly as stated and
//! reported as a failure; the test only insists that it keeps failing, so a
//! change that makes it pass forces the list below to be revisited.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use basinscope::dsl::{compile, parse, symbolic_derivative, KIM_SOURCE};
use basinscope::export::{decode_ppm, encode_ppm, quantize};
use basinscope::kimfamily::{
    build_operator, critical_points, fixed_points, mobius, original_step, scaling_conjugacy_check,
    select_critical, FixedPointKind, FixedPointOptions, KimParameter, OneClassification,
    PlaneSelector,
};
use basinscope::orbit::detect_cycle;
use basinscope::raster::{
    parameter_pixel, render_dynamical, render_parameter, ParamClass, PlaneSpec, RenderOptions,
};
use basinscope::report::analyze_report;
use basinscope::ExtendedComplex;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_UNATTAINABLE: &[&str] = &["9a"];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_lambda(r: &mut ChaCha8Rng) -> Complex64 {
    c(r.gen_range(-50.0..80.0), r.gen_range(-65.0..65.0))
}

fn random_disk(r: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    loop {
        let z = c(r.gen_range(-radius..radius), r.gen_range(-radius..radius));
        if z.norm() <= radius {
            return z;
        }
    }
}

fn far_from(z: Complex64, points: &[Complex64], eps: f64) -> bool {
    points.iter().all(|p| (z - p).norm() > eps)
}

fn value(op: &basinscope::RationalOperator, z: Complex64) -> ExtendedComplex {
    op.apply(z.into())
        .expect("operator defined away from excluded points")
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn multiplier_formula() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 50 {
        let lambda = random_lambda(&mut r);
        if (lambda - 16.0).norm() <= 1e-3 {
            continue;
        }
        n += 1;
        let op = build_operator(KimParameter::new(lambda));
        let got = op
            .derivative(ExtendedComplex::ONE)
            .unwrap()
            .finite()
            .unwrap();
        let expected = 64.0 / (c(16.0, 0.0) - lambda);
        worst = worst.max((got - expected).norm() / expected.norm());
    }
    outcome(
        worst < 1e-9,
        format!("max relative error {worst:.2e} over 50 lambda"),
    )
}

fn degenerate_operators() -> Outcome {
    let mut r = rng(2);
    let ostrowski = build_operator(KimParameter::real(0.0));
    let quintic = build_operator(KimParameter::real(1.0));
    let poles = [c(-1.0, 0.0), c(-0.5, 0.0), c(-0.5, 0.5), c(-0.5, -0.5)];
    let (mut w0, mut w1) = (0.0f64, 0.0f64);
    let mut n = 0;
    while n < 1000 {
        let z = random_disk(&mut r, 2.0);
        if !far_from(z, &poles, 1e-3) {
            continue;
        }
        n += 1;
        let z4 = ExtendedComplex::from(z.powu(4));
        w0 = w0.max(value(&ostrowski, z).chordal_distance(&z4));
        let q = z.powu(5) * (2.0 + z) * (2.0 + 2.0 * z + z * z)
            / ((1.0 + 2.0 * z) * (1.0 + 2.0 * z + 2.0 * z * z));
        w1 = w1.max(value(&quintic, z).chordal_distance(&q.into()));
    }
    outcome(
        w0 < 1e-11 && w1 < 1e-11,
        format!("chordal deviation z^4 {w0:.2e}, quintic {w1:.2e}"),
    )
}

fn set_distance(a: &[ExtendedComplex], b: &[ExtendedComplex]) -> f64 {
    let one_way = |x: &[ExtendedComplex], y: &[ExtendedComplex]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| p.chordal_distance(q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

fn critical_point_correctness() -> Outcome {
    let s = 2.0 * 2f64.sqrt() / 3.0;
    let h = 3f64.sqrt() / 2.0;
    let listed: [(f64, Vec<Complex64>); 3] = [
        (-4.0, vec![c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]),
        (1.0, vec![c(-1.0, 0.0), c(-0.5, h), c(-0.5, -h)]),
        (
            16.0,
            vec![
                c(-1.0, 0.0),
                c(-1.0 / 3.0, -s),
                c(-1.0 / 3.0, s),
                c(1.0, 0.0),
            ],
        ),
    ];
    let mut special = 0.0f64;
    for (l, expected) in &listed {
        let set = critical_points(KimParameter::real(*l)).unwrap();
        let expected: Vec<ExtendedComplex> = expected.iter().map(|&z| z.into()).collect();
        special = special.max(set_distance(&set.points, &expected));
    }
    let mut r = rng(3);
    let (mut worst_deriv, mut worst_pair) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let p = KimParameter::new(random_lambda(&mut r));
        let op = build_operator(p);
        let set = critical_points(p).unwrap();
        for pt in &set.points {
            worst_deriv = worst_deriv.max(op.derivative(*pt).unwrap().norm());
        }
        for [u, v] in &set.reciprocal_pairs {
            worst_pair = worst_pair.max(u.chordal_distance(&v.recip()));
        }
    }
    outcome(
        special < 1e-10 && worst_deriv < 1e-8 && worst_pair < 1e-8,
        format!("special-set distance {special:.1e}, max |O'| {worst_deriv:.1e}, pairing {worst_pair:.1e}"),
    )
}

fn fixed_point_census() -> Outcome {
    let mut r = rng(4);
    let opts = FixedPointOptions::default();
    let mut bad = Vec::new();
    let mut worst_residual = 0.0f64;
    let mut n = 0;
    while n < 100 {
        let lambda = random_lambda(&mut r);
        if !far_from(lambda, &[c(0.0, 0.0), c(1.0, 0.0), c(16.0, 0.0)], 1e-6) {
            continue;
        }
        n += 1;
        let p = KimParameter::new(lambda);
        let op = build_operator(p);
        let fixed = fixed_points(p, &opts).unwrap();
        let finite: Vec<_> = fixed.iter().filter(|f| !f.point.is_infinite()).collect();
        let infinity = fixed.iter().find(|f| f.point.is_infinite());
        let zero = finite.iter().find(|f| f.point.norm() < 1e-12);
        let has_one = finite
            .iter()
            .any(|f| f.point.chordal_distance(&ExtendedComplex::ONE) < 1e-8);
        for f in &finite {
            worst_residual =
                worst_residual.max(op.apply(f.point).unwrap().chordal_distance(&f.point));
        }
        let ok = finite.len() == 8
            && has_one
            && zero.is_some_and(|z| z.kind == FixedPointKind::Superattracting)
            && infinity.is_some_and(|i| i.kind == FixedPointKind::Superattracting);
        if !ok {
            bad.push(lambda);
        }
    }
    outcome(
        bad.is_empty() && worst_residual < 1e-8,
        format!(
            "{} of 100 lambda off-census, max residual {worst_residual:.1e}",
            bad.len()
        ),
    )
}

fn conjugacy_oracle() -> Outcome {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 100 {
        let a = random_disk(&mut r, 3.0);
        let b = random_disk(&mut r, 3.0);
        let x = random_disk(&mut r, 3.0);
        let p = KimParameter::new(random_lambda(&mut r));
        let Ok(step) = original_step((a, b), x, p) else {
            continue;
        };
        n += 1;
        let lhs = mobius(a, b, step.into()).unwrap();
        let rhs = build_operator(p)
            .apply(mobius(a, b, x.into()).unwrap())
            .unwrap();
        worst = worst.max(lhs.chordal_distance(&rhs));
    }
    let mut scaling = 0.0f64;
    for _ in 0..20 {
        let roots = (random_disk(&mut r, 3.0), random_disk(&mut r, 3.0));
        let alpha = (random_disk(&mut r, 3.0) + 0.1, random_disk(&mut r, 3.0));
        let gamma = random_disk(&mut r, 3.0) + 0.1;
        let p = KimParameter::new(random_lambda(&mut r));
        scaling = scaling.max(scaling_conjugacy_check(roots, alpha, gamma, p, 50).unwrap());
    }
    outcome(
        worst < 1e-9 && scaling < 1e-9,
        format!("Mobius conjugacy {worst:.1e}, affine scaling {scaling:.1e}"),
    )
}

fn z4_basin_geometry() -> Outcome {
    let op = build_operator(KimParameter::real(0.0));
    let spec = PlaneSpec::new([-1.5, 1.5, -1.5, 1.5], 401, 40).unwrap();
    let r = render_dynamical(&op, &spec, None, &RenderOptions::with_workers(1)).unwrap();
    let basins = r.stats.populated_basins();
    let fraction = r.stats.basin_counts[0] as f64 / r.classes.len() as f64;
    let expected = PI / 9.0;
    outcome(
        basins == 2 && (fraction - expected).abs() <= 0.01,
        format!("{basins} basins, 0-basin fraction {fraction:.4} (expected {expected:.4})"),
    )
}

fn attracting_one() -> Outcome {
    let a = analyze_report(c(100.0, 0.0), None).unwrap();
    let attracting =
        matches!(&a.one, Some(OneClassification::Fixed(f)) if f.kind == FixedPointKind::Attracting);
    let op = build_operator(KimParameter::real(100.0));
    let spec = PlaneSpec::new([-3.0, 3.0, -3.0, 3.0], 401, 80).unwrap();
    let basins = render_dynamical(&op, &spec, None, &RenderOptions::default())
        .unwrap()
        .stats
        .populated_basins();
    let class = |l: f64| parameter_pixel(c(l, 0.0), PlaneSelector::P1, 400).class;
    let (w100, r0, r05) = (class(100.0), class(0.0), class(0.5));
    outcome(
        attracting && basins >= 3 && w100 == ParamClass::White && r0 == ParamClass::Red && r05 == ParamClass::Red,
        format!("z=1 attracting: {attracting}, {basins} basins, P1 pixels 100:{w100:?} 0:{r0:?} 0.5:{r05:?}"),
    )
}

fn period_two_at_sixteen() -> Outcome {
    let op = build_operator(KimParameter::real(16.0));
    let found = detect_cycle(&op, c(-1.0, 0.01).into(), 50, 8, 1e-9);
    let expected = [ExtendedComplex::new(-1.0, 0.0), ExtendedComplex::ONE];
    let pass = match &found {
        Some((2, pts)) => set_distance(pts, &expected) < 1e-3,
        _ => false,
    };
    outcome(pass, format!("{found:?}"))
}

fn stability_disk() -> Outcome {
    let spec = PlaneSpec::new([-50.0, 80.0, -65.0, 65.0], 201, 100).unwrap();
    let r = render_parameter(PlaneSelector::P2, &spec, &RenderOptions::default()).unwrap();
    let m = &r.mesh;
    let radius = 64.0 + 2.0 * m.step;
    let (mut white, mut inside) = (0usize, 0usize);
    for j in 0..m.height() {
        for k in 0..m.width() {
            if r.classes[j * m.width() + k] == ParamClass::White {
                white += 1;
                if (m.point(j, k) - 16.0).norm() <= radius {
                    inside += 1;
                }
            }
        }
    }
    let share = inside as f64 / white.max(1) as f64;
    outcome(
        share >= 0.95,
        format!(
            "{inside} of {white} white pixels inside |lambda-16| <= {radius:.2}: {:.1}% (need 95%)",
            100.0 * share
        ),
    )
}

fn cycle_near_fifty() -> Outcome {
    // a small grid around 50+50i, both free critical pairs as seeds
    for dy in -6..=6 {
        for dx in -6..=6 {
            let lambda = c(50.0 + dx as f64, 50.0 + dy as f64);
            let p = KimParameter::new(lambda);
            let op = build_operator(p);
            for which in [PlaneSelector::P1, PlaneSelector::P2] {
                let seed = select_critical(p, which).unwrap();
                if let Some((period, _)) = detect_cycle(&op, seed, 500, 8, 1e-8) {
                    if (2..=8).contains(&period) {
                        return outcome(
                            true,
                            format!("period {period} at lambda = {lambda} from {which:?}"),
                        );
                    }
                }
            }
        }
    }
    outcome(false, "no cycle of period 2..8 within 6 of 50+50i")
}

fn determinism_and_round_trip() -> Outcome {
    let op = build_operator(KimParameter::new(c(30.0, -20.0)));
    let spec = PlaneSpec::new([-2.0, 2.0, -2.0, 2.0], 201, 40).unwrap();
    let dyn_bytes = |w| {
        encode_ppm(
            &render_dynamical(
                &op,
                &spec,
                Some(c(0.3, 0.2).into()),
                &RenderOptions::with_workers(w),
            )
            .unwrap()
            .raster,
        )
    };
    let dyn_same = dyn_bytes(1) == dyn_bytes(8);
    let pspec = PlaneSpec::new([-50.0, 80.0, -65.0, 65.0], 101, 60).unwrap();
    let param = |w| {
        render_parameter(PlaneSelector::P1, &pspec, &RenderOptions::with_workers(w))
            .unwrap()
            .raster
    };
    let (p1, p8) = (param(1), param(8));
    let param_same = encode_ppm(&p1) == encode_ppm(&p8);
    let round_trip = decode_ppm(&encode_ppm(&p1)).unwrap() == quantize(&p1);
    outcome(
        dyn_same && param_same && round_trip,
        format!("dynamical identical: {dyn_same}, parameter identical: {param_same}, PPM round trip: {round_trip}"),
    )
}

fn parser_equivalence() -> Outcome {
    let ast = parse(KIM_SOURCE).unwrap();
    let d_ast = symbolic_derivative(&ast);
    let mut r = rng(11);
    let (mut worst, mut worst_d) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let lambda = random_lambda(&mut r);
        let compiled = compile(&ast, lambda).unwrap();
        let builtin = build_operator(KimParameter::new(lambda));
        let den = |z: Complex64| {
            (lambda - 1.0) * z.powu(4) - 4.0 * z.powu(3) - 6.0 * z * z - 4.0 * z - 1.0
        };
        let mut n = 0;
        while n < 100 {
            let z = random_disk(&mut r, 2.0);
            if den(z).norm() < 1e-2 {
                continue;
            }
            n += 1;
            worst = worst.max(value(&compiled, z).chordal_distance(&value(&builtin, z)));
            let h = 1e-5 * (1.0 + z.norm());
            let fd = (ast.eval(z + h, lambda) - ast.eval(z - h, lambda)) / (2.0 * h);
            let sym = d_ast.eval(z, lambda);
            worst_d = worst_d.max((sym - fd).norm() / sym.norm().max(1.0));
        }
    }
    outcome(
        worst < 1e-10 && worst_d < 1e-5,
        format!(
            "compiled vs built-in {worst:.1e}, derivative vs central differences {worst_d:.1e}"
        ),
    )
}

#[test]
fn acceptance() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, &str, Duration, Check); 12] = [
        (
            "1",
            "multiplier of z=1 is 64/(16-lambda)",
            Duration::from_secs(1),
            multiplier_formula,
        ),
        (
            "2",
            "lambda=0 is z^4, lambda=1 is the quintic map",
            Duration::from_secs(1),
            degenerate_operators,
        ),
        (
            "3",
            "critical points",
            Duration::from_secs(5),
            critical_point_correctness,
        ),
        (
            "4",
            "fixed-point census",
            Duration::from_secs(10),
            fixed_point_census,
        ),
        (
            "5",
            "conjugacy oracle",
            Duration::from_secs(1),
            conjugacy_oracle,
        ),
        (
            "6",
            "z^4 basin geometry",
            Duration::from_secs(10),
            z4_basin_geometry,
        ),
        (
            "7",
            "attracting z=1 at lambda=100",
            Duration::from_secs(30),
            attracting_one,
        ),
        (
            "8",
            "period-2 cycle at lambda=16",
            Duration::from_secs(1),
            period_two_at_sixteen,
        ),
        (
            "9a",
            "white P2 pixels inside the stability disk",
            Duration::from_secs(300),
            stability_disk,
        ),
        (
            "9b",
            "periodic critical orbit near 50+50i",
            Duration::from_secs(300),
            cycle_near_fifty,
        ),
        (
            "10",
            "determinism and PPM round trip",
            Duration::from_secs(60),
            determinism_and_round_trip,
        ),
        (
            "11",
            "parser equivalence",
            Duration::from_secs(5),
            parser_equivalence,
        ),
    ];
    let mut unexpected = Vec::new();
    let _ = writeln!(std::io::stdout());
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= budget;
        // straight to stdout so the lines survive libtest's output capture
        let _ = writeln!(
            std::io::stdout(),
            "[{}] {id:>3} {name}: {} ({:.2}s, budget {}s)",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if pass == KNOWN_UNATTAINABLE.contains(&id) {
            unexpected.push(id);
        }
    }
    assert!(
        unexpected.is_empty(),
        "criteria with unexpected outcome: {unexpected:?}"
    );
}
