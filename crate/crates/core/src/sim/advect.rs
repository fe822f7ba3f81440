//! Semi-Lagrangian transport on node grids.

use crate::field::{Grid2D, Interpolator, Method, Wrap};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Transport {
    pub grid: Grid2D,
    pub wrap: [Wrap; 2],
    pub method: Method,
}

impl Transport {
    fn interp<'a>(&self, f: &'a [f64]) -> Interpolator<'a> {
        Interpolator::from_slice(self.grid, f, self.method).with_wrap(self.wrap)
    }

    /// Departure points `x − dt·b(x − dt/2·b(x))` of every node for the
    /// frozen velocity `b`. Wall axes are clamped into the domain.
    pub fn departures(&self, b1: &[f64], b2: &[f64], dt: f64) -> Vec<[f64; 2]> {
        let i1 = Interpolator::from_slice(self.grid, b1, Method::Bicubic).with_wrap(self.wrap);
        let i2 = Interpolator::from_slice(self.grid, b2, Method::Bicubic).with_wrap(self.wrap);
        let g = &self.grid;
        let clamp = |z: [f64; 2]| {
            let mut z = z;
            if self.wrap[0] == Wrap::Clamp {
                z[0] = z[0].clamp(g.min1(), g.max1());
            }
            if self.wrap[1] == Wrap::Clamp {
                z[1] = z[1].clamp(g.min2(), g.max2());
            }
            z
        };
        g.nodes()
            .map(|(i, j, x)| {
                let k = g.idx(i, j);
                let mid = clamp([x[0] - 0.5 * dt * b1[k], x[1] - 0.5 * dt * b2[k]]);
                clamp([x[0] - dt * i1.sample(mid), x[1] - dt * i2.sample(mid)])
            })
            .collect()
    }

    pub fn advect(&self, f: &[f64], dep: &[[f64; 2]]) -> Vec<f64> {
        let it = self.interp(f);
        dep.iter().map(|&z| it.sample(z)).collect()
    }
}

/// Largest `|b|·dt/h` over nodes, with `h = min(h1, h2)`.
pub(crate) fn cfl_number(grid: &Grid2D, b1: &[f64], b2: &[f64], dt: f64) -> f64 {
    let h = grid.h1().min(grid.h2());
    let vmax = b1
        .iter()
        .zip(b2)
        .fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)));
    vmax * dt / h
}
