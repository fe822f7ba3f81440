use super::{Grid2D, ScalarField2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Bilinear,
    /// Catmull–Rom cubic convolution in each axis.
    Bicubic,
    /// Bicubic clipped to the range of the four surrounding nodes.
    BicubicClamped,
}

/// Out-of-grid handling per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wrap {
    /// Points are clamped onto the grid; stencils reaching past an edge use
    /// cubic extrapolation so accuracy does not drop next to walls.
    Clamp,
    /// The first and last node coincide; period is `max - min`.
    Periodic,
}

/// Continuous reconstruction of a sampled scalar field.
#[derive(Debug, Clone, Copy)]
pub struct Interpolator<'a> {
    grid: Grid2D,
    values: &'a [f64],
    method: Method,
    wrap: [Wrap; 2],
}

#[inline]
fn cubic_weights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

#[inline]
fn cubic_dweights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    [
        0.5 * (-3.0 * t2 + 4.0 * t - 1.0),
        0.5 * (9.0 * t2 - 10.0 * t),
        0.5 * (-9.0 * t2 + 8.0 * t + 1.0),
        0.5 * (3.0 * t2 - 2.0 * t),
    ]
}

impl<'a> Interpolator<'a> {
    pub fn new(field: &'a ScalarField2D, method: Method) -> Self {
        Self::from_slice(*field.grid(), field.values(), method)
    }

    pub fn from_slice(grid: Grid2D, values: &'a [f64], method: Method) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self {
            grid,
            values,
            method,
            wrap: [Wrap::Clamp; 2],
        }
    }

    pub fn with_wrap(mut self, wrap: [Wrap; 2]) -> Self {
        self.wrap = wrap;
        self
    }

    /// Cell index and fractional offset along one axis.
    #[inline]
    fn locate(&self, z: f64, axis: usize) -> (isize, f64) {
        let (min, h, n, wrap) = if axis == 0 {
            (self.grid.min1(), self.grid.h1(), self.grid.n1(), self.wrap[0])
        } else {
            (self.grid.min2(), self.grid.h2(), self.grid.n2(), self.wrap[1])
        };
        let last = (n - 1) as f64;
        let mut u = (z - min) / h;
        match wrap {
            Wrap::Clamp => u = u.clamp(0.0, last),
            Wrap::Periodic => {
                u = u.rem_euclid(last);
            }
        }
        let c = (u.floor() as isize).min(n as isize - 2);
        (c, u - c as f64)
    }

    #[inline]
    fn raw(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n2() + j]
    }

    /// Node value with wrapping or cubic ghost extrapolation.
    fn fetch(&self, i: isize, j: isize) -> f64 {
        let (n1, n2) = (self.grid.n1() as isize, self.grid.n2() as isize);
        let i = match self.wrap[0] {
            Wrap::Periodic => i.rem_euclid(n1 - 1),
            Wrap::Clamp if i < 0 => {
                return 3.0 * self.fetch(i + 1, j) - 3.0 * self.fetch(i + 2, j)
                    + self.fetch(i + 3, j)
            }
            Wrap::Clamp if i >= n1 => {
                return 3.0 * self.fetch(i - 1, j) - 3.0 * self.fetch(i - 2, j)
                    + self.fetch(i - 3, j)
            }
            Wrap::Clamp => i,
        };
        let j = match self.wrap[1] {
            Wrap::Periodic => j.rem_euclid(n2 - 1),
            Wrap::Clamp if j < 0 => {
                return 3.0 * self.fetch(i, j + 1) - 3.0 * self.fetch(i, j + 2)
                    + self.fetch(i, j + 3)
            }
            Wrap::Clamp if j >= n2 => {
                return 3.0 * self.fetch(i, j - 1) - 3.0 * self.fetch(i, j - 2)
                    + self.fetch(i, j - 3)
            }
            Wrap::Clamp => j,
        };
        self.raw(i as usize, j as usize)
    }

    pub fn sample(&self, z: [f64; 2]) -> f64 {
        let (ci, ti) = self.locate(z[0], 0);
        let (cj, tj) = self.locate(z[1], 1);
        match self.method {
            Method::Bilinear => {
                let f00 = self.fetch(ci, cj);
                let f01 = self.fetch(ci, cj + 1);
                let f10 = self.fetch(ci + 1, cj);
                let f11 = self.fetch(ci + 1, cj + 1);
                (1.0 - ti) * ((1.0 - tj) * f00 + tj * f01) + ti * ((1.0 - tj) * f10 + tj * f11)
            }
            Method::Bicubic | Method::BicubicClamped => {
                let wi = cubic_weights(ti);
                let wj = cubic_weights(tj);
                let v = self.tensor(ci, cj, &wi, &wj);
                if self.method == Method::BicubicClamped {
                    let c = [
                        self.fetch(ci, cj),
                        self.fetch(ci, cj + 1),
                        self.fetch(ci + 1, cj),
                        self.fetch(ci + 1, cj + 1),
                    ];
                    let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    v.clamp(lo, hi)
                } else {
                    v
                }
            }
        }
    }

    fn tensor(&self, ci: isize, cj: isize, wi: &[f64; 4], wj: &[f64; 4]) -> f64 {
        let mut acc = 0.0;
        for (a, wa) in wi.iter().enumerate() {
            let mut row = 0.0;
            for (b, wb) in wj.iter().enumerate() {
                row += wb * self.fetch(ci - 1 + a as isize, cj - 1 + b as isize);
            }
            acc += wa * row;
        }
        acc
    }

    /// Gradient of the reconstruction (unclamped cubic or bilinear).
    pub fn gradient(&self, z: [f64; 2]) -> [f64; 2] {
        let (ci, ti) = self.locate(z[0], 0);
        let (cj, tj) = self.locate(z[1], 1);
        let (h1, h2) = (self.grid.h1(), self.grid.h2());
        match self.method {
            Method::Bilinear => {
                let f00 = self.fetch(ci, cj);
                let f01 = self.fetch(ci, cj + 1);
                let f10 = self.fetch(ci + 1, cj);
                let f11 = self.fetch(ci + 1, cj + 1);
                [
                    ((1.0 - tj) * (f10 - f00) + tj * (f11 - f01)) / h1,
                    ((1.0 - ti) * (f01 - f00) + ti * (f11 - f10)) / h2,
                ]
            }
            _ => {
                let wi = cubic_weights(ti);
                let wj = cubic_weights(tj);
                let di = cubic_dweights(ti);
                let dj = cubic_dweights(tj);
                [
                    self.tensor(ci, cj, &di, &wj) / h1,
                    self.tensor(ci, cj, &wi, &dj) / h2,
                ]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_cubics() {
        let g = Grid2D::new((0.0, 2.0), (-1.0, 1.0), 9, 11).unwrap();
        let f = ScalarField2D::from_fn(g, |a, b| a * a * a - 2.0 * a * b + b * b * b).unwrap();
        let it = Interpolator::new(&f, Method::Bicubic);
        for (i, j, z) in g.nodes() {
            assert!((it.sample(z) - f.at(i, j)).abs() < 1e-12);
        }
        // Catmull-Rom reproduces quadratics exactly, including at clamped edges.
        let q = ScalarField2D::from_fn(g, |a, b| a * a + a * b - 3.0 * b * b).unwrap();
        let it = Interpolator::new(&q, Method::Bicubic);
        for z in [[0.03, -0.97], [1.97, 0.99], [1.1, 0.1]] {
            let exact = z[0] * z[0] + z[0] * z[1] - 3.0 * z[1] * z[1];
            assert!((it.sample(z) - exact).abs() < 1e-12);
            let g = it.gradient(z);
            assert!((g[0] - (2.0 * z[0] + z[1])).abs() < 1e-10);
            assert!((g[1] - (z[0] - 6.0 * z[1])).abs() < 1e-10);
        }
    }

    #[test]
    fn bilinear_is_exact_on_bilinear() {
        let g = Grid2D::square(0.0, 1.0, 5).unwrap();
        let f = ScalarField2D::from_fn(g, |a, b| 1.0 + 2.0 * a - b + 3.0 * a * b).unwrap();
        let it = Interpolator::new(&f, Method::Bilinear);
        let z = [0.37, 0.61];
        assert!((it.sample(z) - (1.0 + 0.74 - 0.61 + 3.0 * 0.37 * 0.61)).abs() < 1e-14);
    }

    #[test]
    fn periodic_wrap() {
        let g = Grid2D::new((0.0, 1.0), (0.0, 1.0), 17, 5).unwrap();
        let f = ScalarField2D::from_fn(g, |a, _| (std::f64::consts::TAU * a).sin()).unwrap();
        let it = Interpolator::new(&f, Method::Bicubic).with_wrap([Wrap::Periodic, Wrap::Clamp]);
        assert!((it.sample([1.25, 0.5]) - it.sample([0.25, 0.5])).abs() < 1e-14);
        assert!((it.sample([-0.25, 0.5]) + 1.0).abs() < 1e-2);
    }
}
