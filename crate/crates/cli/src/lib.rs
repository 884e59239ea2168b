//! Argument handling and command execution for the `basinscope` binary.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use basinscope::dsl::{compile_source, DslError};
use basinscope::export::{
    metadata_path, write_image, write_iters, write_metadata, Command, ExportError, ImageFormat,
    RunConfig, RunStats,
};
use basinscope::kimfamily::{build_operator, KimParameter, PlaneSelector};
use basinscope::raster::{
    render_dynamical, render_parameter, Raster, RenderError, RenderOptions, SpecError,
};
use basinscope::report::analyze_report;
use basinscope::ExtendedComplex;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use thiserror::Error;

pub const WORKERS_ENV: &str = "BASINSCOPE_WORKERS";

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_IO: i32 = 4;

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got '{s}'"))?;
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("'{t}' is not a finite number"))
    };
    Ok(Complex64::new(num(re)?, num(im)?))
}

fn parse_bounds(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected X0,XN,Y0,YN, got '{s}'"));
    }
    let mut out = [0.0; 4];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .trim()
            .parse()
            .map_err(|_| format!("'{p}' is not a number"))?;
    }
    Ok(out)
}

#[derive(Parser, Debug)]
#[command(
    name = "basinscope",
    version,
    about = "Basins of attraction and parameter planes of a fourth-order root-finding family"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Dynamical plane: basins of attraction for one lambda
    Dyn(DynArgs),
    /// Parameter plane: fate of a free critical orbit over a lambda grid
    Param(ParamArgs),
    /// Fixed and critical points for one lambda
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
struct PlaneArgs {
    /// X0,XN,Y0,YN
    #[arg(long, value_parser = parse_bounds, allow_hyphen_values = true)]
    bounds: Option<[f64; 4]>,
    /// Mesh resolution per axis (even values are bumped to odd)
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    maxiter: Option<usize>,
    /// Image path; .png writes PNG, anything else PPM
    #[arg(long)]
    out: PathBuf,
    /// Also write the iteration counts as a 16-bit PGM
    #[arg(long)]
    iters: Option<PathBuf>,
    /// Worker threads (0 = one per core); overridden by BASINSCOPE_WORKERS
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct DynArgs {
    /// RE,IM
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: Complex64,
    /// Draw the orbit of this seed (RE,IM)
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    orbit: Option<Complex64>,
    /// Operator expression in z and lam instead of the built-in family
    #[arg(long, allow_hyphen_values = true)]
    op: Option<String>,
    #[command(flatten)]
    plane: PlaneArgs,
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Which free critical pair seeds the plane
    #[arg(long, value_parser = clap::value_parser!(PlaneSelectorArg))]
    plane: PlaneSelectorArg,
    #[command(flatten)]
    grid: PlaneArgs,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum PlaneSelectorArg {
    P1,
    P2,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// RE,IM
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: Complex64,
    #[arg(long, allow_hyphen_values = true)]
    op: Option<String>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    InvalidInput(String),
    #[error("{0}")]
    Compute(String),
    #[error(transparent)]
    Io(#[from] ExportError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) => e.exit_code(),
            CliError::InvalidInput(_) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_COMPUTE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::InvalidInput(e.to_string())
    }
}

impl From<DslError> for CliError {
    fn from(e: DslError) -> Self {
        CliError::InvalidInput(format!("--op: {e}"))
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        CliError::Compute(e.to_string())
    }
}

fn apply_plane(
    cfg: &mut RunConfig,
    p: PlaneArgs,
    env_workers: Option<&str>,
) -> Result<(), CliError> {
    if let Some(b) = p.bounds {
        cfg.bounds = b;
    }
    if let Some(n) = p.points {
        cfg.points = n;
    }
    if let Some(m) = p.maxiter {
        cfg.maxiter = m;
    }
    cfg.output_path = Some(p.out);
    cfg.iters_path = p.iters;
    cfg.workers = match env_workers {
        Some(v) => v.trim().parse().map_err(|_| {
            CliError::InvalidInput(format!("{WORKERS_ENV}='{v}' is not a worker count"))
        })?,
        None => p.workers.unwrap_or(0),
    };
    Ok(())
}

/// Parses `argv` (program name first). `env_workers` is the value of
/// `BASINSCOPE_WORKERS`, which takes precedence over `--workers`. The plane
/// is validated before anything is computed.
pub fn parse_args<I, T>(argv: I, env_workers: Option<&str>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let cfg = match cli.command {
        Cmd::Dyn(a) => {
            let mut cfg = RunConfig::new(Command::Dyn);
            cfg.lambda = Some(a.lambda);
            cfg.orbit_seed = a.orbit;
            cfg.operator_source = a.op;
            apply_plane(&mut cfg, a.plane, env_workers)?;
            cfg
        }
        Cmd::Param(a) => {
            let mut cfg = RunConfig::new(Command::Param);
            cfg.which = Some(match a.plane {
                PlaneSelectorArg::P1 => PlaneSelector::P1,
                PlaneSelectorArg::P2 => PlaneSelector::P2,
            });
            apply_plane(&mut cfg, a.grid, env_workers)?;
            cfg
        }
        Cmd::Analyze(a) => {
            let mut cfg = RunConfig::new(Command::Analyze);
            cfg.lambda = Some(a.lambda);
            cfg.operator_source = a.op;
            cfg
        }
    };
    if cfg.command != Command::Analyze {
        cfg.plane_spec()?;
    }
    Ok(cfg)
}

fn write_outputs(cfg: &RunConfig, raster: &Raster, stats: &RunStats) -> Result<(), CliError> {
    let out = cfg
        .output_path
        .as_ref()
        .expect("plane commands always carry --out");
    write_image(raster, out, ImageFormat::from_path(out))?;
    if let Some(it) = &cfg.iters_path {
        write_iters(raster, it)?;
    }
    write_metadata(&metadata_path(out), cfg, stats)?;
    Ok(())
}

/// Runs a parsed configuration, returning what should be printed on stdout.
pub fn run(cfg: &RunConfig) -> Result<String, CliError> {
    let lambda = cfg.lambda.unwrap_or_default();
    match cfg.command {
        Command::Analyze => {
            let a = analyze_report(lambda, cfg.operator_source.as_deref())?;
            if a.had_errors {
                log::warn!("some sections of the report could not be computed");
            }
            Ok(a.text)
        }
        Command::Dyn => {
            let spec = cfg.plane_spec()?;
            let op = match &cfg.operator_source {
                Some(src) => compile_source(src, lambda)?,
                None => build_operator(KimParameter::new(lambda)),
            };
            let opts = RenderOptions::with_workers(cfg.workers);
            let start = Instant::now();
            let r = render_dynamical(
                &op,
                &spec,
                cfg.orbit_seed.map(ExtendedComplex::Finite),
                &opts,
            )?;
            let stats = RunStats::from_dynamical(&r, &spec, start.elapsed());
            write_outputs(cfg, &r.raster, &stats)?;
            Ok(summary(cfg, &stats))
        }
        Command::Param => {
            let spec = cfg.plane_spec()?;
            let which = cfg.which.unwrap_or(PlaneSelector::P1);
            let opts = RenderOptions::with_workers(cfg.workers);
            let start = Instant::now();
            let r = render_parameter(which, &spec, &opts)?;
            let stats = RunStats::from_parameter(&r, &spec, start.elapsed());
            write_outputs(cfg, &r.raster, &stats)?;
            Ok(summary(cfg, &stats))
        }
    }
}

fn summary(cfg: &RunConfig, stats: &RunStats) -> String {
    let counts: Vec<String> = stats
        .pixel_counts
        .iter()
        .map(|(k, n)| format!("{k}={n}"))
        .collect();
    format!(
        "wrote {} ({}x{}, {:.2}s): {}\n",
        cfg.output_path
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_default(),
        stats.width,
        stats.height,
        stats.wall_time.as_secs_f64(),
        counts.join(" ")
    )
}
