use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use num_complex::Complex64;

use super::{atomic_write, ExportError};
use crate::kimfamily::PlaneSelector;
use crate::numcore::ExtendedComplex;
use crate::raster::{DynamicalRender, ParameterRender, PlaneSpec, SpecError};
use crate::report::format_complex;

pub const TOOL_VERSION: &str = concat!("basinscope ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Dyn,
    Param,
    Analyze,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Dyn => "dyn",
            Command::Param => "param",
            Command::Analyze => "analyze",
        }
    }
}

pub const DYN_DEFAULT_BOUNDS: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];
pub const DYN_DEFAULT_POINTS: usize = 400;
pub const DYN_DEFAULT_MAXITER: usize = 20;
pub const PARAM_DEFAULT_BOUNDS: [f64; 4] = [-50.0, 80.0, -65.0, 65.0];
pub const PARAM_DEFAULT_POINTS: usize = 2000;
pub const PARAM_DEFAULT_MAXITER: usize = 400;

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub lambda: Option<Complex64>,
    pub which: Option<PlaneSelector>,
    pub bounds: [f64; 4],
    pub points: usize,
    pub maxiter: usize,
    pub operator_source: Option<String>,
    pub orbit_seed: Option<Complex64>,
    pub output_path: Option<PathBuf>,
    pub iters_path: Option<PathBuf>,
    /// 0 means one worker per core.
    pub workers: usize,
}

impl RunConfig {
    /// Defaults for `command` with nothing else set.
    pub fn new(command: Command) -> Self {
        let (bounds, points, maxiter) = match command {
            Command::Param => (
                PARAM_DEFAULT_BOUNDS,
                PARAM_DEFAULT_POINTS,
                PARAM_DEFAULT_MAXITER,
            ),
            _ => (DYN_DEFAULT_BOUNDS, DYN_DEFAULT_POINTS, DYN_DEFAULT_MAXITER),
        };
        RunConfig {
            command,
            lambda: None,
            which: None,
            bounds,
            points,
            maxiter,
            operator_source: None,
            orbit_seed: None,
            output_path: None,
            iters_path: None,
            workers: 0,
        }
    }

    pub fn plane_spec(&self) -> Result<PlaneSpec, SpecError> {
        PlaneSpec::new(self.bounds, self.points, self.maxiter)
    }
}

/// Results recorded alongside an image.
#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub width: usize,
    pub height: usize,
    /// Effective (odd) resolution.
    pub points: usize,
    pub wall_time: Duration,
    /// Labelled pixel counts, e.g. `basin.0`, `escaped`, `red`.
    pub pixel_counts: Vec<(String, usize)>,
    pub non_converged: usize,
    pub failed: usize,
    /// Attractors with their multipliers.
    pub attractors: Vec<(ExtendedComplex, ExtendedComplex)>,
}

impl RunStats {
    pub fn from_dynamical(r: &DynamicalRender, spec: &PlaneSpec, wall_time: Duration) -> Self {
        let n_finite = r.attractors.len();
        let pixel_counts = r
            .stats
            .basin_counts
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                (
                    if i == n_finite {
                        "escaped".to_string()
                    } else {
                        format!("basin.{i}")
                    },
                    n,
                )
            })
            .collect();
        RunStats {
            width: r.raster.width,
            height: r.raster.height,
            points: spec.points,
            wall_time,
            pixel_counts,
            non_converged: r.stats.undecided,
            failed: r.stats.failed,
            attractors: r
                .attractors
                .points()
                .iter()
                .copied()
                .zip(r.multipliers.iter().copied())
                .collect(),
        }
    }

    pub fn from_parameter(r: &ParameterRender, spec: &PlaneSpec, wall_time: Duration) -> Self {
        RunStats {
            width: r.raster.width,
            height: r.raster.height,
            points: spec.points,
            wall_time,
            pixel_counts: vec![("red".into(), r.stats.red), ("white".into(), r.stats.white)],
            non_converged: r.stats.white,
            failed: r.stats.failed,
            attractors: Vec::new(),
        }
    }
}

fn point(z: ExtendedComplex) -> String {
    z.finite().map_or_else(|| "inf".to_string(), format_complex)
}

fn opt_path(p: &Option<PathBuf>) -> String {
    p.as_ref()
        .map_or_else(String::new, |p| p.display().to_string())
}

/// `key = value` lines. `wall_time_s` is the only field that varies between
/// identical runs.
pub fn render_metadata(cfg: &RunConfig, stats: &RunStats) -> String {
    let mut lines: Vec<(String, String)> = vec![
        ("tool".into(), TOOL_VERSION.into()),
        ("command".into(), cfg.command.as_str().into()),
        (
            "lambda".into(),
            cfg.lambda.map(format_complex).unwrap_or_default(),
        ),
        (
            "plane".into(),
            match cfg.which {
                Some(PlaneSelector::P1) => "p1".into(),
                Some(PlaneSelector::P2) => "p2".into(),
                None => String::new(),
            },
        ),
        (
            "operator".into(),
            cfg.operator_source.clone().unwrap_or_else(|| "kim".into()),
        ),
        ("bounds".into(), cfg.bounds.map(|b| b.to_string()).join(",")),
        ("points_requested".into(), cfg.points.to_string()),
        ("points".into(), stats.points.to_string()),
        ("maxiter".into(), cfg.maxiter.to_string()),
        (
            "orbit".into(),
            cfg.orbit_seed.map(format_complex).unwrap_or_default(),
        ),
        ("output".into(), opt_path(&cfg.output_path)),
        ("iters".into(), opt_path(&cfg.iters_path)),
        (
            "workers".into(),
            if cfg.workers == 0 {
                "auto".into()
            } else {
                cfg.workers.to_string()
            },
        ),
        ("width".into(), stats.width.to_string()),
        ("height".into(), stats.height.to_string()),
        (
            "wall_time_s".into(),
            format!("{:.6}", stats.wall_time.as_secs_f64()),
        ),
    ];
    for (label, n) in &stats.pixel_counts {
        lines.push((format!("pixels.{label}"), n.to_string()));
    }
    lines.push(("non_converged".into(), stats.non_converged.to_string()));
    lines.push(("failed".into(), stats.failed.to_string()));
    lines.push(("attractors".into(), stats.attractors.len().to_string()));
    for (i, (a, m)) in stats.attractors.iter().enumerate() {
        lines.push((format!("attractor.{i}"), point(*a)));
        lines.push((format!("attractor.{i}.multiplier"), point(*m)));
        lines.push((
            format!("attractor.{i}.multiplier_abs"),
            m.norm().to_string(),
        ));
    }
    lines
        .into_iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

/// The sidecar path for an image: `<out>.meta`.
pub fn metadata_path(image: &Path) -> PathBuf {
    let mut s = image.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

pub fn write_metadata(path: &Path, cfg: &RunConfig, stats: &RunStats) -> Result<(), ExportError> {
    let text = render_metadata(cfg, stats);
    atomic_write(path, |f| f.write_all(text.as_bytes()))
}

/// Parses `key = value` lines back into pairs, in file order.
pub fn parse_metadata(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| {
            l.split_once(" = ")
                .map(|(k, v)| (k.to_string(), v.to_string()))
        })
        .collect()
}
