use num_complex::Complex64;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SpecError {
    #[error("bounds must be finite with x0 < xN and y0 < yN, got [{0}, {1}] x [{2}, {3}]")]
    Bounds(f64, f64, f64, f64),
    #[error("points must be at least 2, got {0}")]
    Points(usize),
    #[error("maxiter must be at least 1, got {0}")]
    Maxiter(usize),
}

/// Rectangle, resolution and iteration budget of a rendered plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneSpec {
    pub x0: f64,
    pub xn: f64,
    pub y0: f64,
    pub yn: f64,
    /// Always odd: an even request is bumped by one.
    pub points: usize,
    pub maxiter: usize,
}

impl PlaneSpec {
    pub fn new(bounds: [f64; 4], points: usize, maxiter: usize) -> Result<Self, SpecError> {
        let [x0, xn, y0, yn] = bounds;
        if !bounds.iter().all(|b| b.is_finite()) || x0 >= xn || y0 >= yn {
            return Err(SpecError::Bounds(x0, xn, y0, yn));
        }
        if points < 2 {
            return Err(SpecError::Points(points));
        }
        if maxiter < 1 {
            return Err(SpecError::Maxiter(maxiter));
        }
        let points = if points.is_multiple_of(2) {
            points + 1
        } else {
            points
        };
        Ok(PlaneSpec {
            x0,
            xn,
            y0,
            yn,
            points,
            maxiter,
        })
    }

    pub fn bounds(&self) -> [f64; 4] {
        [self.x0, self.xn, self.y0, self.yn]
    }

    /// `max(xN - x0, yN - y0) / points`.
    pub fn step(&self) -> f64 {
        (self.xn - self.x0).max(self.yn - self.y0) / self.points as f64
    }
}

/// Grid nodes of a plane: `xs[k] + i ys[j]` is the seed of pixel `(j, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub step: f64,
}

impl Mesh {
    pub fn width(&self) -> usize {
        self.xs.len()
    }

    pub fn height(&self) -> usize {
        self.ys.len()
    }

    pub fn point(&self, j: usize, k: usize) -> Complex64 {
        Complex64::new(self.xs[k], self.ys[j])
    }

    /// Pixel whose node is nearest to `z`, if inside the grid.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let k = ((z.re - self.xs[0]) / self.step).round();
        let j = ((z.im - self.ys[0]) / self.step).round();
        if !(k >= 0.0 && j >= 0.0) || k as usize >= self.width() || j as usize >= self.height() {
            return None;
        }
        Some((j as usize, k as usize))
    }
}

/// `start:step:end` with colon semantics. The upper half is measured back
/// from the last node, and a last node within rounding of `end` is snapped
/// onto it, so a symmetric interval gives a symmetric list.
fn colon(start: f64, step: f64, end: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-10).floor() as usize + 1;
    let mut last = start + (n - 1) as f64 * step;
    if (last - end).abs() <= 1e-9 * step {
        last = end;
    }
    (0..n)
        .map(|k| {
            if 2 * k < n {
                start + k as f64 * step
            } else {
                last - (n - 1 - k) as f64 * step
            }
        })
        .collect()
}

pub fn mesh(spec: &PlaneSpec) -> Mesh {
    let step = spec.step();
    Mesh {
        xs: colon(spec.x0, step, spec.xn),
        ys: colon(spec.y0, step, spec.yn),
        step,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_forced_odd() {
        let s = PlaneSpec::new([-1.0, 1.0, -1.0, 1.0], 4, 10).unwrap();
        assert_eq!(s.points, 5);
        assert_eq!(s.step(), 0.4);
        let m = mesh(&s);
        assert_eq!(m.xs.len(), 6);
        assert_eq!(m.xs[0], -1.0);
        assert_eq!(*m.xs.last().unwrap(), 1.0);
        assert_eq!(m.point(0, 0), Complex64::new(-1.0, -1.0));
        let s = PlaneSpec::new([0.0, 1.0, 0.0, 1.0], 2, 10).unwrap();
        assert_eq!(s.points, 3);
        assert!((s.step() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(mesh(&s).xs.len(), 4);
    }

    #[test]
    fn symmetric_bounds_give_symmetric_nodes() {
        for points in [5, 101, 401, 2001] {
            let m = mesh(&PlaneSpec::new([-1.5, 1.5, -1.5, 1.5], points, 1).unwrap());
            let n = m.ys.len();
            for j in 0..n {
                assert_eq!(m.ys[j], -m.ys[n - 1 - j]);
            }
        }
    }

    #[test]
    fn non_square_bounds_share_one_step() {
        let s = PlaneSpec::new([-50.0, 80.0, -65.0, 65.0], 201, 1).unwrap();
        let m = mesh(&s);
        assert_eq!(m.width(), 202);
        assert_eq!(m.height(), 202);
        let s = PlaneSpec::new([0.0, 2.0, 0.0, 1.0], 3, 1).unwrap();
        let m = mesh(&s);
        assert_eq!((m.width(), m.height()), (4, 2));
    }

    #[test]
    fn pixel_lookup() {
        let m = mesh(&PlaneSpec::new([-1.0, 1.0, -1.0, 1.0], 5, 1).unwrap());
        assert_eq!(m.pixel_of(Complex64::new(-1.0, -1.0)), Some((0, 0)));
        assert_eq!(m.pixel_of(Complex64::new(1.0, 0.21)), Some((3, 5)));
        assert_eq!(m.pixel_of(Complex64::new(1.3, 0.0)), None);
        assert_eq!(m.pixel_of(Complex64::new(f64::NAN, 0.0)), None);
    }

    #[test]
    fn invalid_specs() {
        assert!(PlaneSpec::new([1.0, 0.0, 0.0, 1.0], 5, 1).is_err());
        assert!(PlaneSpec::new([0.0, 1.0, 0.0, f64::INFINITY], 5, 1).is_err());
        assert_eq!(
            PlaneSpec::new([0.0, 1.0, 0.0, 1.0], 1, 1),
            Err(SpecError::Points(1))
        );
        assert_eq!(
            PlaneSpec::new([0.0, 1.0, 0.0, 1.0], 3, 0),
            Err(SpecError::Maxiter(0))
        );
    }
}
