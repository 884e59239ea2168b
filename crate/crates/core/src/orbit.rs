//! Orbit iteration, fate classification and cycle detection.

use crate::kimfamily::{
    compare_points, fixed_points_of, ApplyError, FixedPointOptions, KimError, RationalOperator,
};
use crate::numcore::ExtendedComplex;

pub const DEFAULT_CONV_TOL: f64 = 1e-3;
pub const DEFAULT_ESCAPE_RADIUS: f64 = 1000.0;
/// Slack on `|m| <= 1` when deciding whether a fixed point attracts, so that
/// parabolic points with rounding in their multiplier still qualify.
pub const MULTIPLIER_SLACK: f64 = 1e-9;
/// Consecutive matches required before a cycle is reported.
pub const CYCLE_CONFIRMATIONS: usize = 3;
/// Cycle points must be at least this many `cycle_tol` apart; tighter
/// "cycles" are orbits spiralling slowly into a fixed point.
pub const CYCLE_SEPARATION: f64 = 10.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    ConvergedTo(usize),
    Escaped,
    Cycle {
        period: usize,
        points: Vec<ExtendedComplex>,
    },
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitFate {
    pub outcome: Outcome,
    pub iterations: usize,
    pub trace: Option<Vec<ExtendedComplex>>,
}

/// Finite attractors; infinity is detected by escape instead.
#[derive(Clone, Debug, PartialEq)]
pub struct AttractorList {
    points: Vec<ExtendedComplex>,
    tol: f64,
}

impl AttractorList {
    /// Keeps the first of any points closer than `2 tol`; infinite points
    /// are dropped.
    pub fn new(points: impl IntoIterator<Item = ExtendedComplex>, tol: f64) -> Self {
        let mut kept: Vec<ExtendedComplex> = Vec::new();
        for p in points {
            let Some(z) = p.finite() else { continue };
            if kept
                .iter()
                .all(|q| (q.finite().unwrap() - z).norm() > 2.0 * tol)
            {
                kept.push(p);
            }
        }
        AttractorList { points: kept, tol }
    }

    pub fn points(&self) -> &[ExtendedComplex] {
        &self.points
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitOptions {
    pub maxiter: usize,
    pub conv_tol: f64,
    pub escape_radius: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            maxiter: 20,
            conv_tol: DEFAULT_CONV_TOL,
            escape_radius: DEFAULT_ESCAPE_RADIUS,
        }
    }
}

/// Iterates `op` from `z0`. After every step the orbit is tested against
/// each attractor (Euclidean distance below `conv_tol`), then for escape
/// (`|z| > escape_radius` or infinity). The returned `iterations` is the
/// number of steps taken, `maxiter` when undecided. The trace, if
/// requested, starts with `z0`.
pub fn run_orbit(
    op: &RationalOperator,
    z0: ExtendedComplex,
    attractors: &AttractorList,
    opts: &OrbitOptions,
    trace: bool,
) -> Result<OrbitFate, ApplyError> {
    let mut z = z0;
    let mut points = trace.then(|| vec![z0]);
    for it in 1..=opts.maxiter {
        z = op.apply(z)?;
        if let Some(t) = points.as_mut() {
            t.push(z);
        }
        let outcome = match z.finite() {
            None => Some(Outcome::Escaped),
            Some(w) => attractors
                .points
                .iter()
                .position(|a| (a.finite().unwrap() - w).norm() < opts.conv_tol)
                .map(Outcome::ConvergedTo)
                .or_else(|| (w.norm() > opts.escape_radius).then_some(Outcome::Escaped)),
        };
        if let Some(outcome) = outcome {
            return Ok(OrbitFate {
                outcome,
                iterations: it,
                trace: points,
            });
        }
    }
    Ok(OrbitFate {
        outcome: Outcome::Undecided,
        iterations: opts.maxiter,
        trace: points,
    })
}

/// Looks for a periodic cycle of period `2..=max_period`.
///
/// After `warmup` steps the orbit is extended for up to another
/// `warmup + max_period + CYCLE_CONFIRMATIONS` steps. At each step the
/// newest point is compared with the one `p` steps earlier (chordal metric)
/// for every `p`; the smallest `p` matched on `CYCLE_CONFIRMATIONS`
/// consecutive steps wins. A winning `p = 1` is convergence to a fixed
/// point and yields `None`, as does an undefined iterate or a cycle whose
/// points are within `CYCLE_SEPARATION * cycle_tol` of each other. The returned
/// points start from the smallest in modulus, then argument.
pub fn detect_cycle(
    op: &RationalOperator,
    z0: ExtendedComplex,
    warmup: usize,
    max_period: usize,
    cycle_tol: f64,
) -> Option<(usize, Vec<ExtendedComplex>)> {
    let mut z = z0;
    for _ in 0..warmup {
        z = op.apply(z).ok()?;
    }
    let span = max_period + CYCLE_CONFIRMATIONS;
    let budget = warmup + span;
    let mut orbit = vec![z];
    for _ in 0..budget {
        z = op.apply(z).ok()?;
        orbit.push(z);
        let n = orbit.len() - 1;
        let matched = (1..=max_period).find(|&p| {
            n >= p + CYCLE_CONFIRMATIONS - 1
                && (0..CYCLE_CONFIRMATIONS)
                    .all(|k| orbit[n - k].chordal_distance(&orbit[n - k - p]) < cycle_tol)
        });
        match matched {
            Some(1) => return None,
            Some(p) => {
                let mut points = orbit[n + 1 - p..=n].to_vec();
                let separated = points.iter().enumerate().all(|(i, a)| {
                    points[i + 1..]
                        .iter()
                        .all(|b| a.chordal_distance(b) > CYCLE_SEPARATION * cycle_tol)
                });
                if !separated {
                    return None;
                }
                let start = (0..p)
                    .min_by(|&a, &b| compare_points(&points[a], &points[b]))
                    .unwrap();
                points.rotate_left(start);
                return Some((p, points));
            }
            None => {}
        }
        // only the last `span` points are ever compared
        if orbit.len() > 4 * span {
            orbit.drain(..orbit.len() - span - 1);
        }
    }
    None
}

/// Finite fixed points with `|multiplier| <= 1`, in modulus/argument
/// order; `{0}` when there are none.
pub fn attracting_fixed_points(op: &RationalOperator, tol: f64) -> Result<AttractorList, KimError> {
    let reports = fixed_points_of(op, &FixedPointOptions::default())?;
    let attracting: Vec<ExtendedComplex> = reports
        .iter()
        .filter(|r| !r.point.is_infinite() && r.multiplier.norm() <= 1.0 + MULTIPLIER_SLACK)
        .map(|r| r.point)
        .collect();
    if attracting.is_empty() {
        return Ok(AttractorList::new([ExtendedComplex::ZERO], tol));
    }
    Ok(AttractorList::new(attracting, tol))
}
