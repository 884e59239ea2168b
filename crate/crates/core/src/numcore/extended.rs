use std::fmt;

use num_complex::Complex64;

/// A point of the Riemann sphere: either a finite complex number or the
/// point at infinity.
///
/// Build values with [`ExtendedComplex::from`] (or [`ExtendedComplex::new`]);
/// any non-finite component collapses to [`ExtendedComplex::Infinity`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub const ZERO: Self = ExtendedComplex::Finite(Complex64 { re: 0.0, im: 0.0 });
    pub const ONE: Self = ExtendedComplex::Finite(Complex64 { re: 1.0, im: 0.0 });

    pub fn new(re: f64, im: f64) -> Self {
        Complex64::new(re, im).into()
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// Modulus, `f64::INFINITY` at the point at infinity.
    pub fn norm(&self) -> f64 {
        match self {
            ExtendedComplex::Finite(z) => z.norm(),
            ExtendedComplex::Infinity => f64::INFINITY,
        }
    }

    /// `1/z` on the sphere: 0 and infinity swap.
    pub fn recip(&self) -> Self {
        match *self {
            ExtendedComplex::Infinity => Self::ZERO,
            ExtendedComplex::Finite(z) if z.re == 0.0 && z.im == 0.0 => ExtendedComplex::Infinity,
            ExtendedComplex::Finite(z) => z.inv().into(),
        }
    }

    pub fn conj(&self) -> Self {
        match *self {
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(z.conj()),
            ExtendedComplex::Infinity => ExtendedComplex::Infinity,
        }
    }

    /// Chordal distance `2|z-w| / sqrt((1+|z|^2)(1+|w|^2))`, bounded by 2.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        match (*self, *other) {
            (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => 0.0,
            (ExtendedComplex::Finite(z), ExtendedComplex::Infinity)
            | (ExtendedComplex::Infinity, ExtendedComplex::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (ExtendedComplex::Finite(z), ExtendedComplex::Finite(w)) => {
                // For large moduli compare the reciprocals instead, the
                // metric is invariant under z -> 1/z.
                if z.norm() > 1.0 && w.norm() > 1.0 {
                    let (zi, wi) = (z.inv(), w.inv());
                    return 2.0 * (zi - wi).norm()
                        / ((1.0 + zi.norm_sqr()) * (1.0 + wi.norm_sqr())).sqrt();
                }
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
            }
        }
    }

    /// Approximate equality in the chordal metric.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtendedComplex::Finite(z)
        } else {
            ExtendedComplex::Infinity
        }
    }
}

impl From<f64> for ExtendedComplex {
    fn from(x: f64) -> Self {
        Complex64::new(x, 0.0).into()
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedComplex::Infinity => write!(f, "inf"),
            ExtendedComplex::Finite(z) => {
                if let Some(p) = f.precision() {
                    write!(f, "{:.*}{:+.*}i", p, z.re, p, z.im)
                } else {
                    write!(f, "{}{:+}i", z.re, z.im)
                }
            }
        }
    }
}
