use num_complex::Complex64;

use super::kim::critical_quartic;
use super::{KimError, KimParameter};
use crate::numcore::{find_roots, ExtendedComplex, DEFAULT_MAX_SWEEPS, DEFAULT_ROOT_TOL};

/// Two schemes whose free critical points differ by within this chordal
/// distance are considered tied when assigning the P1/P2 labels.
const PAIR_SCORE_TIE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalProvenance {
    ClosedForm,
    QuarticRoots,
    SpecialCase,
}

/// Which reciprocal pair of free critical points seeds a parameter plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaneSelector {
    P1,
    P2,
}

impl std::str::FromStr for PlaneSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(PlaneSelector::P1),
            "p2" => Ok(PlaneSelector::P2),
            other => Err(format!("unknown plane '{other}', expected p1 or p2")),
        }
    }
}

/// Free critical points of the family operator (critical points other than
/// the superattracting 0 and infinity).
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSet {
    pub points: Vec<ExtendedComplex>,
    pub provenance: CriticalProvenance,
    /// The non-(-1) points grouped as `(u, 1/u)`; the first pair seeds P1.
    pub reciprocal_pairs: Vec<[ExtendedComplex; 2]>,
    /// Largest distance from a principal-branch closed-form value to the
    /// nearest quartic root, when the closed forms were evaluated.
    pub closed_form_deviation: Option<f64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The two free critical points that are not 1 at `lam = 16`:
/// `-1/3 -+ (2 sqrt 2 / 3) i`.
pub fn sixteen_limit_pair() -> [Complex64; 2] {
    let s = 2.0 * 2f64.sqrt() / 3.0;
    [c(-1.0 / 3.0, -s), c(-1.0 / 3.0, s)]
}

fn cube_root_pair() -> [Complex64; 2] {
    let s = 3f64.sqrt() / 2.0;
    [c(-0.5, -s), c(-0.5, s)]
}

/// Free critical points: `-1` together with the roots of the quartic factor
/// `lam (1 - z + z^2 - z^3 + z^4) - (1+z)^4`, except at the exceptional
/// parameters where the set is listed explicitly.
pub fn critical_points(p: KimParameter) -> Result<CriticalSet, KimError> {
    let minus_one = ExtendedComplex::new(-1.0, 0.0);
    let ext = |z: Complex64| ExtendedComplex::from(z);
    if p.is_zero() {
        return Ok(CriticalSet {
            points: Vec::new(),
            provenance: CriticalProvenance::SpecialCase,
            reciprocal_pairs: Vec::new(),
            closed_form_deviation: None,
        });
    }
    if p.is_sixteen() {
        let [a, b] = sixteen_limit_pair();
        return Ok(CriticalSet {
            points: vec![minus_one, ext(a), ext(b), ExtendedComplex::ONE],
            provenance: CriticalProvenance::SpecialCase,
            reciprocal_pairs: vec![
                [ext(a), ext(b)],
                [ExtendedComplex::ONE, ExtendedComplex::ONE],
            ],
            closed_form_deviation: None,
        });
    }
    if p.is_minus_four() {
        let (mi, i) = (
            ExtendedComplex::new(0.0, -1.0),
            ExtendedComplex::new(0.0, 1.0),
        );
        return Ok(CriticalSet {
            points: vec![minus_one, mi, i],
            provenance: CriticalProvenance::SpecialCase,
            reciprocal_pairs: vec![[mi, i], [mi, i]],
            closed_form_deviation: None,
        });
    }
    if p.is_one() {
        let [a, b] = cube_root_pair();
        return Ok(CriticalSet {
            points: vec![minus_one, ext(a), ext(b)],
            provenance: CriticalProvenance::SpecialCase,
            reciprocal_pairs: vec![[ext(a), ext(b)]],
            closed_form_deviation: None,
        });
    }

    let roots = find_roots(
        &critical_quartic(p.lambda()),
        DEFAULT_ROOT_TOL,
        DEFAULT_MAX_SWEEPS,
    )?
    .values();
    let roots: [Complex64; 4] = roots
        .try_into()
        .expect("quartic with nonzero leading coefficient has four roots");
    let pairs = label_pairs(pair_reciprocals(roots));
    let deviation = closed_form_critical(p.lambda()).map(|forms| {
        forms
            .iter()
            .map(|f| {
                roots
                    .iter()
                    .map(|r| (f - r).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    });

    let mut points = vec![minus_one];
    points.extend(roots.iter().map(|&r| ext(r)));
    Ok(CriticalSet {
        points,
        provenance: CriticalProvenance::QuarticRoots,
        reciprocal_pairs: pairs.iter().map(|[u, v]| [ext(*u), ext(*v)]).collect(),
        closed_form_deviation: deviation,
    })
}

/// Groups four roots of a palindromic quartic into the two pairs `(u, 1/u)`,
/// choosing the pairing that minimizes the chordal mismatch.
pub fn pair_reciprocals(r: [Complex64; 4]) -> [[Complex64; 2]; 2] {
    let mismatch = |u: Complex64, v: Complex64| {
        ExtendedComplex::from(u).chordal_distance(&ExtendedComplex::from(v).recip())
    };
    let candidates = [
        [[r[0], r[1]], [r[2], r[3]]],
        [[r[0], r[2]], [r[1], r[3]]],
        [[r[0], r[3]], [r[1], r[2]]],
    ];
    let mut best = candidates[0];
    let mut best_score = f64::INFINITY;
    for cand in candidates {
        let score = mismatch(cand[0][0], cand[0][1]) + mismatch(cand[1][0], cand[1][1]);
        if score < best_score {
            best_score = score;
            best = cand;
        }
    }
    best
}

/// Orders two reciprocal pairs as `[P1 pair, P2 pair]`: P1 is the pair
/// closest in the chordal metric to the `lam = 16` limit pair.
fn label_pairs(pairs: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let [l1, l2] = sixteen_limit_pair().map(ExtendedComplex::from);
    let score = |[u, v]: [Complex64; 2]| {
        let (u, v) = (ExtendedComplex::from(u), ExtendedComplex::from(v));
        (u.chordal_distance(&l1) + v.chordal_distance(&l2))
            .min(u.chordal_distance(&l2) + v.chordal_distance(&l1))
    };
    let (s0, s1) = (score(pairs[0]), score(pairs[1]));
    let first_is_p1 = if (s0 - s1).abs() <= PAIR_SCORE_TIE {
        representative(pairs[0]).arg() <= representative(pairs[1]).arg()
    } else {
        s0 < s1
    };
    if first_is_p1 {
        pairs
    } else {
        [pairs[1], pairs[0]]
    }
}

/// The member of a pair with the smallest argument.
fn representative([u, v]: [Complex64; 2]) -> Complex64 {
    if v.arg() < u.arg() {
        v
    } else {
        u
    }
}

/// One free critical point from the P1 or P2 reciprocal pair, the member
/// with the smallest argument. Labels come from proximity to the
/// `lam = 16` limits and need not be continuous in `lam`.
pub fn select_critical(p: KimParameter, which: PlaneSelector) -> Result<ExtendedComplex, KimError> {
    if p.is_zero() {
        return Err(KimError::NoFreeCritical);
    }
    if p.is_one() {
        return Ok(representative(cube_root_pair()).into());
    }
    if p.is_sixteen() {
        return Ok(match which {
            PlaneSelector::P1 => representative(sixteen_limit_pair()).into(),
            PlaneSelector::P2 => ExtendedComplex::ONE,
        });
    }
    if p.is_minus_four() {
        return Ok(ExtendedComplex::new(0.0, -1.0));
    }
    let roots = find_roots(
        &critical_quartic(p.lambda()),
        DEFAULT_ROOT_TOL,
        DEFAULT_MAX_SWEEPS,
    )?
    .values();
    let roots: [Complex64; 4] = roots
        .try_into()
        .expect("quartic with nonzero leading coefficient has four roots");
    let [p1, p2] = label_pairs(pair_reciprocals(roots));
    Ok(match which {
        PlaneSelector::P1 => representative(p1),
        PlaneSelector::P2 => representative(p2),
    }
    .into())
}

/// Closed-form quartic roots on the principal square-root branch,
///
/// `cr = (1/4) [1 + 5/(lam-1) -+ beta -+ sqrt2 sqrt(A -+ B)]` with
/// `beta = sqrt5 sqrt((lam-1)^2) sqrt(lam (4+lam)) / (lam-1)^2`,
/// `A = -5 lam (6 - 7 lam + lam^2) / (lam-1)^3`, `B = (4+lam) beta / (lam-1)`.
///
/// Ordered `[cr1, cr2, cr3, cr4]` with `cr1 cr2 = cr3 cr4 = 1`. `None` at
/// `lam = 1`.
pub fn closed_form_critical(lambda: Complex64) -> Option<[Complex64; 4]> {
    let m = lambda - 1.0;
    if m.norm() <= super::kim::SPECIAL_LAMBDA_TOL {
        return None;
    }
    let sqrt5 = 5f64.sqrt();
    let sqrt2 = 2f64.sqrt();
    let beta = sqrt5 * (m * m).sqrt() * (lambda * (lambda + 4.0)).sqrt() / (m * m);
    let a = -5.0 * lambda * (6.0 - 7.0 * lambda + lambda * lambda) / (m * m * m);
    let b = (lambda + 4.0) * beta / m;
    let base = 1.0 + 5.0 / m;
    let minus = sqrt2 * (a - b).sqrt();
    let plus = sqrt2 * (a + b).sqrt();
    Some([
        (base - beta - minus) / 4.0,
        (base - beta + minus) / 4.0,
        (base + beta - plus) / 4.0,
        (base + beta + plus) / 4.0,
    ])
}
