//! Direct solver for `ψ_pp + ψ_ww + c(w) ψ_w = f` on a channel that is
//! periodic in one grid axis and bounded by two walls in the other, with
//! constant Dirichlet values on each wall.
//!
//! The periodic direction is diagonalised by an FFT over the `n − 1` distinct
//! nodes; each Fourier mode is then a tridiagonal system across the channel.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::SimError;
use crate::field::Grid2D;

/// Residual accepted after a solve, relative to `1 + max|f|`.
pub const POISSON_TOL: f64 = 1e-8;

pub struct ChannelPoisson {
    grid: Grid2D,
    periodic_axis: usize,
    drift: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for ChannelPoisson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChannelPoisson")
            .field("grid", &self.grid)
            .field("periodic_axis", &self.periodic_axis)
            .finish()
    }
}

impl ChannelPoisson {
    /// `periodic_axis` is 0 for `z¹`, 1 for `z²`. `drift[w]` is the
    /// coefficient of the first derivative across the channel at wall index `w`.
    pub fn new(grid: Grid2D, periodic_axis: usize, drift: Option<Vec<f64>>) -> Self {
        let (np, nw) = Self::dims(&grid, periodic_axis);
        let drift = drift.unwrap_or_else(|| vec![0.0; nw]);
        assert_eq!(drift.len(), nw);
        let mut planner = FftPlanner::new();
        Self {
            grid,
            periodic_axis,
            drift,
            forward: planner.plan_fft_forward(np - 1),
            inverse: planner.plan_fft_inverse(np - 1),
        }
    }

    fn dims(grid: &Grid2D, periodic_axis: usize) -> (usize, usize) {
        if periodic_axis == 0 {
            (grid.n1(), grid.n2())
        } else {
            (grid.n2(), grid.n1())
        }
    }

    fn spacings(&self) -> (f64, f64) {
        if self.periodic_axis == 0 {
            (self.grid.h1(), self.grid.h2())
        } else {
            (self.grid.h2(), self.grid.h1())
        }
    }

    #[inline]
    fn flat(&self, p: usize, w: usize) -> usize {
        if self.periodic_axis == 0 {
            self.grid.idx(p, w)
        } else {
            self.grid.idx(w, p)
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// Solves with `ψ = walls[0]` on the first wall and `walls[1]` on the last.
    pub fn solve(&self, rhs: &[f64], walls: [f64; 2]) -> Result<Vec<f64>, SimError> {
        let (np, nw) = Self::dims(&self.grid, self.periodic_axis);
        let (hp, hw) = self.spacings();
        let n = np - 1;
        let mut spec = vec![vec![Complex::new(0.0, 0.0); n]; nw];
        let mut buf = vec![Complex::new(0.0, 0.0); n];
        for (w, row) in spec.iter_mut().enumerate().take(nw - 1).skip(1) {
            for (p, b) in buf.iter_mut().enumerate() {
                *b = Complex::new(rhs[self.flat(p, w)], 0.0);
            }
            self.forward.process(&mut buf);
            row.copy_from_slice(&buf);
        }
        spec[0][0] = Complex::new(walls[0] * n as f64, 0.0);
        spec[nw - 1][0] = Complex::new(walls[1] * n as f64, 0.0);

        let inv_hw2 = 1.0 / (hw * hw);
        let m_int = nw - 2;
        let lower: Vec<f64> = (1..nw - 1)
            .map(|w| inv_hw2 - self.drift[w] / (2.0 * hw))
            .collect();
        let upper: Vec<f64> = (1..nw - 1)
            .map(|w| inv_hw2 + self.drift[w] / (2.0 * hw))
            .collect();
        let zero = Complex::new(0.0, 0.0);
        let mut cp = vec![0.0; m_int];
        let mut dp = vec![zero; m_int];
        for m in 0..n {
            let lam = -(2.0 - 2.0 * (std::f64::consts::TAU * m as f64 / n as f64).cos()) / (hp * hp);
            let diag = -2.0 * inv_hw2 + lam;
            // Thomas sweep over the interior rows.
            for k in 0..m_int {
                let mut d = spec[k + 1][m];
                if k == 0 {
                    d -= spec[0][m] * lower[0];
                }
                if k == m_int - 1 {
                    d -= spec[nw - 1][m] * upper[k];
                }
                let (a, pc, pd) = if k == 0 {
                    (0.0, 0.0, zero)
                } else {
                    (lower[k], cp[k - 1], dp[k - 1])
                };
                let denom = diag - a * pc;
                cp[k] = upper[k] / denom;
                dp[k] = (d - pd * a) / denom;
            }
            let mut x = zero;
            for k in (0..m_int).rev() {
                x = dp[k] - x * cp[k];
                spec[k + 1][m] = x;
            }
        }

        let mut psi = vec![0.0; self.grid.len()];
        for (w, row) in spec.iter().enumerate() {
            buf.copy_from_slice(row);
            self.inverse.process(&mut buf);
            for p in 0..n {
                psi[self.flat(p, w)] = buf[p].re / n as f64;
            }
            psi[self.flat(n, w)] = psi[self.flat(0, w)];
        }
        for p in 0..np {
            psi[self.flat(p, 0)] = walls[0];
            psi[self.flat(p, nw - 1)] = walls[1];
        }
        let res = self.residual(&psi, rhs);
        let scale = 1.0 + rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(res <= POISSON_TOL * scale) {
            return Err(SimError::PoissonNotConverged { residual: res });
        }
        Ok(psi)
    }

    /// Max-norm residual of the discrete operator over interior rows.
    pub fn residual(&self, psi: &[f64], rhs: &[f64]) -> f64 {
        let (np, nw) = Self::dims(&self.grid, self.periodic_axis);
        let (hp, hw) = self.spacings();
        let n = np - 1;
        let mut worst: f64 = 0.0;
        for w in 1..nw - 1 {
            for p in 0..n {
                let pm = if p == 0 { n - 1 } else { p - 1 };
                let pp = if p + 1 == n { 0 } else { p + 1 };
                let c = psi[self.flat(p, w)];
                let lp = (psi[self.flat(pp, w)] - 2.0 * c + psi[self.flat(pm, w)]) / (hp * hp);
                let up = psi[self.flat(p, w + 1)];
                let dn = psi[self.flat(p, w - 1)];
                let lw = (up - 2.0 * c + dn) / (hw * hw) + self.drift[w] * (up - dn) / (2.0 * hw);
                let r = lp + lw - rhs[self.flat(p, w)];
                if !r.is_finite() {
                    return f64::INFINITY;
                }
                worst = worst.max(r.abs());
            }
        }
        worst
    }
}
