use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use super::mesh::{mesh, Mesh, PlaneSpec};
use super::palette::{BasinPalette, BLACK, WHITE, YELLOW};
use crate::kimfamily::{
    build_operator, select_critical, KimError, KimParameter, PlaneSelector, RationalOperator,
};
use crate::numcore::ExtendedComplex;
use crate::orbit::{
    attracting_fixed_points, run_orbit, AttractorList, OrbitOptions, Outcome, DEFAULT_CONV_TOL,
    DEFAULT_ESCAPE_RADIUS,
};

/// Parameter-plane test for reaching the root image 0.
pub const PARAM_ZERO_TOL: f64 = 1e-2;
/// Parameter-plane test for reaching the root image infinity.
pub const PARAM_ESCAPE_RADIUS: f64 = 1000.0;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("attractor search failed: {0}")]
    Attractors(#[from] KimError),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("render cancelled")]
    Cancelled,
}

/// Colors in `[0, 1]` and iteration counts, row-major with row 0 at `y0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<[f64; 3]>,
    pub iters: Vec<u32>,
}

impl Raster {
    pub fn filled(width: usize, height: usize, color: [f64; 3], it: u32) -> Self {
        Raster {
            width,
            height,
            rgb: vec![color; width * height],
            iters: vec![it; width * height],
        }
    }

    pub fn rgb_at(&self, j: usize, k: usize) -> [f64; 3] {
        self.rgb[j * self.width + k]
    }

    pub fn iters_at(&self, j: usize, k: usize) -> u32 {
        self.iters[j * self.width + k]
    }

    fn set_rgb(&mut self, j: usize, k: usize, c: [f64; 3]) {
        self.rgb[j * self.width + k] = c;
    }
}

/// The iteration grid, one row per `y`, starting at `y0`.
pub fn iteration_surface(r: &Raster) -> Vec<Vec<u32>> {
    r.iters
        .chunks(r.width.max(1))
        .map(|row| row.to_vec())
        .collect()
}

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    /// Checked between rows; once set the render stops with `Cancelled`.
    pub cancel: Option<Arc<AtomicBool>>,
    pub conv_tol: f64,
    pub escape_radius: f64,
    /// Draw the white crosses on dynamical planes.
    pub mark_attractors: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            workers: 0,
            cancel: None,
            conv_tol: DEFAULT_CONV_TOL,
            escape_radius: DEFAULT_ESCAPE_RADIUS,
            mark_attractors: true,
        }
    }
}

impl RenderOptions {
    pub fn with_workers(workers: usize) -> Self {
        RenderOptions {
            workers,
            ..Default::default()
        }
    }

    fn cancelled(&self) -> bool {
        self.cancel
            .as_ref()
            .is_some_and(|c| c.load(Ordering::Relaxed))
    }
}

/// Runs `row(j)` for every row on a pool of `opts.workers` threads. Rows
/// are independent, so the result does not depend on scheduling.
fn rows<T: Send>(
    height: usize,
    opts: &RenderOptions,
    row: impl Fn(usize) -> T + Sync,
) -> Result<Vec<T>, RenderError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()?;
    let out: Vec<Option<T>> = pool.install(|| {
        (0..height)
            .into_par_iter()
            .map(|j| if opts.cancelled() { None } else { Some(row(j)) })
            .collect()
    });
    out.into_iter()
        .collect::<Option<Vec<T>>>()
        .ok_or(RenderError::Cancelled)
}

/// Fate of one dynamical-plane pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PixelClass {
    /// Palette slot: finite attractors first, then the escape basin.
    Basin(usize),
    Undecided,
    Failed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynamicalStats {
    /// Pixels per slot; the last entry is the escape basin.
    pub basin_counts: Vec<usize>,
    pub undecided: usize,
    pub failed: usize,
}

impl DynamicalStats {
    /// Number of slots with at least one pixel.
    pub fn populated_basins(&self) -> usize {
        self.basin_counts.iter().filter(|&&n| n > 0).count()
    }
}

#[derive(Clone, Debug)]
pub struct DynamicalRender {
    pub raster: Raster,
    pub classes: Vec<PixelClass>,
    pub attractors: AttractorList,
    /// `O'` at each attractor, in attractor order.
    pub multipliers: Vec<ExtendedComplex>,
    pub stats: DynamicalStats,
    pub mesh: Mesh,
}

/// Basins of attraction of `op` over the seed grid of `spec`.
///
/// Pixels are colored by basin with the iteration-dependent brightness of
/// [`BasinPalette`]; escaping seeds use the slot after the finite
/// attractors, undecided and failed seeds are black. Each finite attractor
/// is marked with a white 3x3 cross, and when `overlay` is given its orbit
/// is drawn in yellow.
pub fn render_dynamical(
    op: &RationalOperator,
    spec: &PlaneSpec,
    overlay: Option<ExtendedComplex>,
    opts: &RenderOptions,
) -> Result<DynamicalRender, RenderError> {
    let attractors = attracting_fixed_points(op, opts.conv_tol)?;
    let grid = mesh(spec);
    let orbit_opts = OrbitOptions {
        maxiter: spec.maxiter,
        conv_tol: opts.conv_tol,
        escape_radius: opts.escape_radius,
    };
    let escape_slot = attractors.len();
    let palette = BasinPalette;

    let rows = rows(grid.height(), opts, |j| {
        (0..grid.width())
            .map(|k| {
                let z0 = ExtendedComplex::Finite(grid.point(j, k));
                match run_orbit(op, z0, &attractors, &orbit_opts, false) {
                    Ok(fate) => {
                        let class = match fate.outcome {
                            Outcome::ConvergedTo(i) => PixelClass::Basin(i),
                            Outcome::Escaped => PixelClass::Basin(escape_slot),
                            Outcome::Cycle { .. } | Outcome::Undecided => PixelClass::Undecided,
                        };
                        let color = match class {
                            PixelClass::Basin(s) => palette.color(s, fate.iterations, spec.maxiter),
                            _ => BLACK,
                        };
                        (class, color, fate.iterations as u32)
                    }
                    Err(_) => (PixelClass::Failed, BLACK, spec.maxiter as u32),
                }
            })
            .collect::<Vec<_>>()
    })?;

    let mut raster = Raster::filled(grid.width(), grid.height(), BLACK, 0);
    let mut classes = Vec::with_capacity(grid.width() * grid.height());
    let mut stats = DynamicalStats {
        basin_counts: vec![0; escape_slot + 1],
        undecided: 0,
        failed: 0,
    };
    for (i, (class, color, it)) in rows.into_iter().flatten().enumerate() {
        raster.rgb[i] = color;
        raster.iters[i] = it;
        match class {
            PixelClass::Basin(s) => stats.basin_counts[s] += 1,
            PixelClass::Undecided => stats.undecided += 1,
            PixelClass::Failed => stats.failed += 1,
        }
        classes.push(class);
    }
    let failed = stats.failed;
    if failed > 0 {
        log::warn!("{failed} dynamical-plane pixels could not be iterated");
    }

    if let Some(seed) = overlay {
        let traced = run_orbit(op, seed, &attractors, &orbit_opts, true);
        for z in traced.ok().and_then(|f| f.trace).unwrap_or_default() {
            if let Some((j, k)) = z.finite().and_then(|w| grid.pixel_of(w)) {
                raster.set_rgb(j, k, YELLOW);
            }
        }
    }
    for a in attractors.points().iter().filter(|_| opts.mark_attractors) {
        if let Some((j, k)) = a.finite().and_then(|w| grid.pixel_of(w)) {
            raster.set_rgb(j, k, WHITE);
            if j > 0 {
                raster.set_rgb(j - 1, k, WHITE);
            }
            if j + 1 < grid.height() {
                raster.set_rgb(j + 1, k, WHITE);
            }
            if k > 0 {
                raster.set_rgb(j, k - 1, WHITE);
            }
            if k + 1 < grid.width() {
                raster.set_rgb(j, k + 1, WHITE);
            }
        }
    }

    let multipliers = attractors
        .points()
        .iter()
        .map(|&a| op.multiplier(a).unwrap_or(ExtendedComplex::Infinity))
        .collect();
    Ok(DynamicalRender {
        raster,
        classes,
        attractors,
        multipliers,
        stats,
        mesh: grid,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamClass {
    /// The critical orbit reached 0 or infinity.
    Red,
    White,
    /// No critical orbit could be computed; rendered white.
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamPixel {
    pub class: ParamClass,
    pub iterations: usize,
}

impl ParamPixel {
    pub fn color(&self, maxiter: usize) -> [f64; 3] {
        match self.class {
            ParamClass::Red => [self.iterations as f64 / maxiter.max(1) as f64, 0.0, 0.0],
            ParamClass::White | ParamClass::Failed => WHITE,
        }
    }
}

/// Fate of the selected free critical orbit at one `lam`.
///
/// Iterates while `1e-2 < |c| < 1000` for at most `maxiter` steps; the pixel
/// is red when the orbit left through either bound and white otherwise.
/// `lam = 0` has no free critical point and is red after zero steps.
pub fn parameter_pixel(lambda: Complex64, which: PlaneSelector, maxiter: usize) -> ParamPixel {
    let p = KimParameter::new(lambda);
    if p.is_zero() {
        return ParamPixel {
            class: ParamClass::Red,
            iterations: 0,
        };
    }
    let failed = ParamPixel {
        class: ParamClass::Failed,
        iterations: maxiter,
    };
    let Ok(mut c) = select_critical(p, which) else {
        return failed;
    };
    let op = build_operator(p);
    let mut it = 0;
    while c.norm() > PARAM_ZERO_TOL && c.norm() < PARAM_ESCAPE_RADIUS && it < maxiter {
        c = match op.apply(c) {
            Ok(next) => next,
            Err(_) => return failed,
        };
        it += 1;
    }
    let class = if c.norm() <= PARAM_ZERO_TOL || c.norm() >= PARAM_ESCAPE_RADIUS {
        ParamClass::Red
    } else {
        ParamClass::White
    };
    ParamPixel {
        class,
        iterations: it,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParameterStats {
    pub red: usize,
    pub white: usize,
    pub failed: usize,
}

#[derive(Clone, Debug)]
pub struct ParameterRender {
    pub raster: Raster,
    pub classes: Vec<ParamClass>,
    pub stats: ParameterStats,
    pub mesh: Mesh,
}

/// Parameter plane over the `lam` grid of `spec`, seeded by the free
/// critical point chosen by `which`.
pub fn render_parameter(
    which: PlaneSelector,
    spec: &PlaneSpec,
    opts: &RenderOptions,
) -> Result<ParameterRender, RenderError> {
    let grid = mesh(spec);
    let rows = rows(grid.height(), opts, |j| {
        (0..grid.width())
            .map(|k| parameter_pixel(grid.point(j, k), which, spec.maxiter))
            .collect::<Vec<_>>()
    })?;
    let mut raster = Raster::filled(grid.width(), grid.height(), WHITE, 0);
    let mut classes = Vec::with_capacity(grid.width() * grid.height());
    let mut stats = ParameterStats::default();
    for (i, px) in rows.into_iter().flatten().enumerate() {
        raster.rgb[i] = px.color(spec.maxiter);
        raster.iters[i] = px.iterations as u32;
        match px.class {
            ParamClass::Red => stats.red += 1,
            ParamClass::White => stats.white += 1,
            ParamClass::Failed => stats.failed += 1,
        }
        classes.push(px.class);
    }
    if stats.failed > 0 {
        log::warn!(
            "{} parameter-plane pixels failed and are shown white",
            stats.failed
        );
    }
    Ok(ParameterRender {
        raster,
        classes,
        stats,
        mesh: grid,
    })
}
