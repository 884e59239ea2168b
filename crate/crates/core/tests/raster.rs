use std::f64::consts::PI;

use basinscope::kimfamily::{build_operator, KimParameter};
use basinscope::raster::{
    iteration_surface, render_dynamical, PixelClass, PlaneSpec, RenderOptions,
};
use basinscope::ExtendedComplex;
use num_complex::Complex64;

fn zero_basin_fraction(points: usize) -> f64 {
    let op = build_operator(KimParameter::real(0.0));
    let spec = PlaneSpec::new([-1.0, 1.0, -1.0, 1.0], points, 20).unwrap();
    let r = render_dynamical(&op, &spec, None, &RenderOptions::default()).unwrap();
    assert_eq!(r.stats.populated_basins(), 2);
    r.stats.basin_counts[0] as f64 / r.classes.len() as f64
}

#[test]
fn ostrowski_disk_fills_quarter_pi() {
    let f = zero_basin_fraction(401);
    assert!((f - PI / 4.0).abs() < 0.01, "{f}");
}

#[test]
fn resolution_stability() {
    let (a, b) = (zero_basin_fraction(201), zero_basin_fraction(403));
    assert!((a - b).abs() < 0.005, "{a} vs {b}");
}

#[test]
fn three_basins_outside_the_disk() {
    let op = build_operator(KimParameter::real(100.0));
    let spec = PlaneSpec::new([-3.0, 3.0, -3.0, 3.0], 401, 80).unwrap();
    let r = render_dynamical(&op, &spec, None, &RenderOptions::default()).unwrap();
    assert!(r.stats.populated_basins() >= 3, "{:?}", r.stats);
    assert!(r.attractors.points()[1].chordal_distance(&ExtendedComplex::ONE) < 1e-12);
}

#[test]
fn two_basins_near_sixteen() {
    let op = build_operator(KimParameter::new(Complex64::new(15.9, -0.2)));
    let spec = PlaneSpec::new([-3.0, 3.0, -3.0, 3.0], 201, 80).unwrap();
    let r = render_dynamical(&op, &spec, None, &RenderOptions::default()).unwrap();
    assert_eq!(r.attractors.len(), 1);
    assert_eq!(r.stats.populated_basins(), 2, "{:?}", r.stats);
}

#[test]
fn real_lambda_gives_conjugation_symmetry() {
    for l in [0.0, 2.5, 100.0, -10.0] {
        let op = build_operator(KimParameter::real(l));
        let spec = PlaneSpec::new([-2.0, 2.0, -2.0, 2.0], 151, 30).unwrap();
        assert!(r_nodes_symmetric(&spec));
        // crosses snap to one side when an attractor sits between rows
        let opts = RenderOptions {
            mark_attractors: false,
            ..Default::default()
        };
        let r = render_dynamical(&op, &spec, None, &opts).unwrap();
        let (w, h) = (r.raster.width, r.raster.height);
        for j in 0..h {
            for k in 0..w {
                assert_eq!(
                    r.raster.rgb_at(j, k),
                    r.raster.rgb_at(h - 1 - j, k),
                    "lam {l} at ({j},{k})"
                );
                assert_eq!(r.raster.iters_at(j, k), r.raster.iters_at(h - 1 - j, k));
            }
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let op = build_operator(KimParameter::new(Complex64::new(30.0, 20.0)));
    let spec = PlaneSpec::new([-2.0, 2.0, -2.0, 2.0], 121, 40).unwrap();
    let seed = Some(ExtendedComplex::new(0.3, 0.4));
    let one = render_dynamical(&op, &spec, seed, &RenderOptions::with_workers(1)).unwrap();
    let many = render_dynamical(&op, &spec, seed, &RenderOptions::with_workers(6)).unwrap();
    assert_eq!(one.raster, many.raster);
    assert_eq!(one.classes, many.classes);
}

#[test]
fn iterations_grow_toward_the_julia_set() {
    let op = build_operator(KimParameter::real(0.0));
    let spec = PlaneSpec::new([-1.0, 1.0, -1.0, 1.0], 401, 20).unwrap();
    let r = render_dynamical(&op, &spec, None, &RenderOptions::default()).unwrap();
    let surface = iteration_surface(&r.raster);
    // walk from the centre row toward the unit circle along the real axis
    let j = surface.len() / 2;
    let xs = &r.mesh.xs;
    let mut last = 0;
    for (k, &x) in xs.iter().enumerate() {
        if x > 0.0 && x < 0.999 && r.classes[j * xs.len() + k] == PixelClass::Basin(0) {
            assert!(surface[j][k] >= last, "x = {x}");
            last = surface[j][k];
        }
    }
    assert!(last > surface[j][xs.len() / 2 + 1]);
}

#[test]
fn overlay_and_crosses() {
    let op = build_operator(KimParameter::real(100.0));
    let spec = PlaneSpec::new([-2.0, 2.0, -2.0, 2.0], 101, 40).unwrap();
    let r = render_dynamical(
        &op,
        &spec,
        Some(ExtendedComplex::new(1.5, 0.5)),
        &RenderOptions::default(),
    )
    .unwrap();
    let (j, k) = r.mesh.pixel_of(Complex64::new(1.0, 0.0)).unwrap();
    for (dj, dk) in [(0, 0), (1, 0), (0, 1)] {
        assert_eq!(r.raster.rgb_at(j + dj, k + dk), [1.0, 1.0, 1.0]);
        assert_eq!(r.raster.rgb_at(j - dj, k - dk), [1.0, 1.0, 1.0]);
    }
    let (j, k) = r.mesh.pixel_of(Complex64::new(1.5, 0.5)).unwrap();
    assert_eq!(r.raster.rgb_at(j, k), [1.0, 1.0, 0.0]);
}

#[test]
fn undecided_pixels_are_black_with_full_count() {
    let op = build_operator(KimParameter::real(0.0));
    let spec = PlaneSpec::new([-1.0, 1.0, -1.0, 1.0], 101, 1).unwrap();
    let r = render_dynamical(&op, &spec, None, &RenderOptions::default()).unwrap();
    let mut seen = 0;
    for (i, c) in r.classes.iter().enumerate() {
        if *c == PixelClass::Undecided {
            assert_eq!(r.raster.iters[i], 1);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

fn r_nodes_symmetric(spec: &PlaneSpec) -> bool {
    let ys = basinscope::raster::mesh(spec).ys;
    (0..ys.len()).all(|j| ys[j] == -ys[ys.len() - 1 - j])
}
