//! Discrete parabolic Hölder norms.
//!
//! The seminorm is a maximum of `|u(a) − u(b)| / d(a, b)^γ` over node pairs
//! with `d = |x − y| + √|t − s|`. When the number of pairs exceeds the budget,
//! pairs are drawn from a ChaCha stream seeded by the grid shape and
//! stratified over dyadic index separations. The stream is consumed in a fixed
//! order, so a larger budget evaluates a superset of pairs.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FieldError, ScalarField2D, TimeSeries};
use crate::numeric::fnv1a;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderEstimate {
    pub exponent: f64,
    pub sup_norm: f64,
    pub seminorm: f64,
    pub pairs: u64,
    pub exhaustive: bool,
}

impl HolderEstimate {
    /// `sup + seminorm`, the usual `C^γ` norm.
    pub fn norm(&self) -> f64 {
        self.sup_norm + self.seminorm
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderOptions {
    pub budget: u64,
}

impl Default for HolderOptions {
    fn default() -> Self {
        Self { budget: 200_000 }
    }
}

pub fn holder_norm(
    series: &TimeSeries<ScalarField2D>,
    gamma: f64,
) -> Result<HolderEstimate, FieldError> {
    holder_norm_with(series, gamma, HolderOptions::default())
}

pub fn holder_norm_with(
    series: &TimeSeries<ScalarField2D>,
    gamma: f64,
    opts: HolderOptions,
) -> Result<HolderEstimate, FieldError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(FieldError::InvalidExponent(gamma));
    }
    let g = *series.grid();
    let (n1, n2, nt) = (g.n1(), g.n2(), series.len());
    let sup_norm = series
        .snapshots()
        .iter()
        .map(|s| s.sup_norm())
        .fold(0.0, f64::max);
    let value = |i: usize, j: usize, k: usize| series.snapshots()[k].at(i, j);
    let ratio = |a: (usize, usize, usize), b: (usize, usize, usize)| {
        let dx = g.z1(a.0) - g.z1(b.0);
        let dy = g.z2(a.1) - g.z2(b.1);
        let dt = series.times()[a.2] - series.times()[b.2];
        let d = dx.hypot(dy) + dt.abs().sqrt();
        (value(a.0, a.1, a.2) - value(b.0, b.1, b.2)).abs() / d.powf(gamma)
    };

    let npts = (n1 * n2 * nt) as u64;
    let all_pairs = npts * (npts - 1) / 2;
    let mut seminorm: f64 = 0.0;
    if all_pairs <= opts.budget {
        let pts: Vec<(usize, usize, usize)> = (0..nt)
            .flat_map(|k| (0..n1).flat_map(move |i| (0..n2).map(move |j| (i, j, k))))
            .collect();
        for (a, &pa) in pts.iter().enumerate() {
            for &pb in &pts[a + 1..] {
                seminorm = seminorm.max(ratio(pa, pb));
            }
        }
        return Ok(HolderEstimate {
            exponent: gamma,
            sup_norm,
            seminorm,
            pairs: all_pairs,
            exhaustive: true,
        });
    }

    let mut key = Vec::with_capacity(24);
    for n in [n1, n2, nt] {
        key.extend_from_slice(&(n as u64).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(fnv1a(&key));
    let dims = [n1, n2, nt];
    let span = dims.iter().copied().max().unwrap_or(1) - 1;
    let bands = (usize::BITS - span.leading_zeros()) as usize;
    let mut pairs = 0u64;
    let mut m = 0usize;
    while pairs < opts.budget {
        let band = m % bands;
        m += 1;
        let lo = 1usize << band;
        let hi = (lo << 1).min(span + 1);
        let a = [
            rng.random_range(0..n1),
            rng.random_range(0..n2),
            rng.random_range(0..nt),
        ];
        let lead = rng.random_range(0..3usize);
        let mut b = a;
        for (ax, n) in dims.iter().copied().enumerate() {
            if n == 1 {
                continue;
            }
            let mag = if ax == lead {
                rng.random_range(lo..hi)
            } else {
                rng.random_range(0..hi)
            };
            let up = rng.random_bool(0.5);
            let reach = |from: usize, up: bool| {
                if up {
                    (from + mag).min(n - 1)
                } else {
                    from.saturating_sub(mag)
                }
            };
            let mut t = reach(a[ax], up);
            if t == a[ax] {
                t = reach(a[ax], !up);
            }
            b[ax] = t;
        }
        pairs += 1;
        if a != b {
            seminorm = seminorm.max(ratio((a[0], a[1], a[2]), (b[0], b[1], b[2])));
        }
    }
    Ok(HolderEstimate {
        exponent: gamma,
        sup_norm,
        seminorm,
        pairs,
        exhaustive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid2D;

    #[test]
    fn constant_series() {
        let g = Grid2D::square(0.0, 1.0, 5).unwrap();
        let c = ScalarField2D::constant(g, -3.0).unwrap();
        let s = TimeSeries::new(vec![0.0, 1.0], vec![c.clone(), c]).unwrap();
        let h = holder_norm(&s, 0.5).unwrap();
        assert_eq!(h.seminorm, 0.0);
        assert_eq!(h.sup_norm, 3.0);
    }

    #[test]
    fn linear_profile_half_exponent() {
        let g = Grid2D::new((0.0, 1.0), (0.0, 1e-9), 11, 3).unwrap();
        let u = ScalarField2D::from_fn(g, |x, _| x).unwrap();
        let h = holder_norm(&TimeSeries::single(u), 0.5).unwrap();
        assert!(h.exhaustive);
        assert!((h.seminorm - 1.0).abs() < 1e-6, "{}", h.seminorm);
    }

    #[test]
    fn rejects_bad_exponent() {
        let g = Grid2D::square(0.0, 1.0, 3).unwrap();
        let s = TimeSeries::single(ScalarField2D::zeros(g));
        assert!(holder_norm(&s, 1.0).is_err());
        assert!(holder_norm(&s, 0.0).is_err());
    }

    #[test]
    fn sampled_never_exceeds_exhaustive_and_grows_with_budget() {
        let g = Grid2D::square(0.0, 1.0, 24).unwrap();
        let u = ScalarField2D::from_fn(g, |x, y| (5.0 * x).sin() * (3.0 * y).cos()).unwrap();
        let s = TimeSeries::single(u);
        let full = holder_norm_with(&s, 0.3, HolderOptions { budget: u64::MAX }).unwrap();
        let mut last = 0.0;
        for b in [10, 100, 1000, 10_000] {
            let e = holder_norm_with(&s, 0.3, HolderOptions { budget: b }).unwrap();
            assert!(e.seminorm >= last);
            assert!(e.seminorm <= full.seminorm);
            last = e.seminorm;
        }
    }
}
