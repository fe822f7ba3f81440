//! Weak-form Euler residual against divergence-free test fields.
//!
//! For `ζ = ∇⊥f` with `f` compactly supported in space-time the pressure
//! integrates out, leaving `∫∫ (v·∇v + ∂_t v)·ζ dz dt`, which vanishes for
//! genuine Euler trajectories.

use super::SimError;
use crate::field::{d1, d2, Edge, TimeSeries, VectorField2D};
use crate::numeric::bump;

pub trait TestField {
    /// `∇⊥f = (−∂₂f, ∂₁f)` at `(z, t)`.
    fn zeta(&self, z: [f64; 2], t: f64) -> [f64; 2];
    /// Closed box containing the support: `[z¹ range, z² range, t range]`.
    fn support(&self) -> [(f64, f64); 3];
}

/// `f = A·φ((z¹−c¹)/a¹)·φ((z²−c²)/a²)·φ((t−c_t)/a_t)` with the smooth bump
/// `φ(s) = exp(−1/(1−s²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeBump {
    pub center: [f64; 3],
    pub radius: [f64; 3],
    pub amplitude: f64,
}

impl TestField for SpaceTimeBump {
    fn zeta(&self, z: [f64; 2], t: f64) -> [f64; 2] {
        let s = [
            (z[0] - self.center[0]) / self.radius[0],
            (z[1] - self.center[1]) / self.radius[1],
            (t - self.center[2]) / self.radius[2],
        ];
        let (p1, dp1) = bump(s[0]);
        let (p2, dp2) = bump(s[1]);
        let (p3, _) = bump(s[2]);
        let a = self.amplitude * p3;
        [-a * p1 * dp2 / self.radius[1], a * dp1 * p2 / self.radius[0]]
    }
    fn support(&self) -> [(f64, f64); 3] {
        let r = |k: usize| (self.center[k] - self.radius[k], self.center[k] + self.radius[k]);
        [r(0), r(1), r(2)]
    }
}

/// Space-time quadrature of `(v·∇v + ∂_t v)·∇⊥f` over the sampled window.
pub fn weak_residual(
    series: &TimeSeries<VectorField2D>,
    f: &dyn TestField,
) -> Result<f64, SimError> {
    let g = *series.grid();
    let t = series.times();
    if t.len() < 3 {
        return Err(SimError::Domain("weak residual needs at least three snapshots".into()));
    }
    let [s1, s2, st] = f.support();
    let nt = t.len();
    let inside = s1.0 >= g.min1() + g.h1()
        && s1.1 <= g.max1() - g.h1()
        && s2.0 >= g.min2() + g.h2()
        && s2.1 <= g.max2() - g.h2()
        && st.0 >= t[1]
        && st.1 <= t[nt - 2];
    if !inside {
        return Err(SimError::SupportTouchesBoundary);
    }
    let snaps = series.snapshots();
    let mut slices = vec![0.0; nt];
    for k in 1..nt - 1 {
        if t[k] < st.0 || t[k] > st.1 {
            continue;
        }
        let (u, w) = snaps[k].split();
        let (u1, u2) = (d1(&u, Edge::OneSided)?, d2(&u, Edge::OneSided)?);
        let (w1, w2) = (d1(&w, Edge::OneSided)?, d2(&w, Edge::OneSided)?);
        let dt = t[k + 1] - t[k - 1];
        let mut acc = 0.0;
        for (i, j, z) in g.nodes() {
            if z[0] < s1.0 || z[0] > s1.1 || z[1] < s2.0 || z[1] > s2.1 {
                continue;
            }
            let [a, b] = snaps[k].at(i, j);
            let [ap, bp] = snaps[k + 1].at(i, j);
            let [am, bm] = snaps[k - 1].at(i, j);
            let r1 = a * u1.at(i, j) + b * u2.at(i, j) + (ap - am) / dt;
            let r2 = a * w1.at(i, j) + b * w2.at(i, j) + (bp - bm) / dt;
            let zeta = f.zeta(z, t[k]);
            acc += r1 * zeta[0] + r2 * zeta[1];
        }
        slices[k] = acc * g.h1() * g.h2();
    }
    let mut total = 0.0;
    for k in 0..nt - 1 {
        total += 0.5 * (t[k + 1] - t[k]) * (slices[k] + slices[k + 1]);
    }
    Ok(total)
}

/// Root-sum-square of [`weak_residual`] over a family of test fields.
pub fn weak_residual_rss(
    series: &TimeSeries<VectorField2D>,
    fields: &[&dyn TestField],
) -> Result<f64, SimError> {
    let mut s = 0.0;
    for f in fields {
        let r = weak_residual(series, *f)?;
        s += r * r;
    }
    Ok(s.sqrt())
}
