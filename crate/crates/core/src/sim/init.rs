//! Seeded smooth random initial data.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AxiState, Euler2DState, SimError, Walls};
use crate::field::{Grid2D, ScalarField2D};

const MODES: usize = 3;

/// Sum of `MODES × MODES` low modes, sine across the walled axis and
/// Fourier along the periodic one, with coefficients decaying like `1/(m+k)`.
fn low_modes(grid: Grid2D, rng: &mut ChaCha8Rng, walled_axis: usize) -> Result<ScalarField2D, SimError> {
    let mut terms = Vec::new();
    for m in 0..MODES {
        for k in 0..MODES {
            let a: f64 = rng.random_range(-1.0..1.0) / (1 + m + k) as f64;
            let phase: f64 = rng.random_range(0.0..2.0 * PI);
            terms.push((m, k, a, phase));
        }
    }
    let (lo_w, hi_w, lo_p, hi_p) = if walled_axis == 0 {
        (grid.min1(), grid.max1(), grid.min2(), grid.max2())
    } else {
        (grid.min2(), grid.max2(), grid.min1(), grid.max1())
    };
    Ok(ScalarField2D::from_fn(grid, |z1, z2| {
        let (w, p) = if walled_axis == 0 { (z1, z2) } else { (z2, z1) };
        let s = (w - lo_w) / (hi_w - lo_w);
        let q = (p - lo_p) / (hi_p - lo_p);
        terms
            .iter()
            .map(|&(m, k, a, ph)| a * (PI * (m as f64 + 0.5) * s + ph).cos() * (2.0 * PI * k as f64 * q + ph).cos())
            .sum()
    })?)
}

/// Smooth random axisymmetric data on `[r_min, 1] × [0, 1)`.
pub fn smooth_random_axisym(grid: Grid2D, seed: u64) -> Result<AxiState, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = low_modes(grid, &mut rng, 0)?;
    let omega = low_modes(grid, &mut rng, 0)?;
    let r = ScalarField2D::from_fn(grid, |r, _| r)?;
    let vtheta = gamma.zip_with(&r, |g, r| g / r)?;
    AxiState::from_vorticity(&omega, &vtheta, 0.0)
}

/// Smooth random vorticity for the planar Euler stepper.
pub fn smooth_random_euler2d(grid: Grid2D, walls: Walls, seed: u64) -> Result<Euler2DState, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let walled = match walls {
        Walls::AcrossZ2 => 1,
        Walls::AcrossZ1 => 0,
    };
    let omega = low_modes(grid, &mut rng, walled)?.map(|w| 4.0 * w)?;
    Euler2DState::from_vorticity(&omega, walls, 0.0)
}
