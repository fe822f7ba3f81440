//! Dimension-reduction diagnostics on three-dimensional rescaled windows.
//!
//! A window point `x̃` maps to `X = c + s·x̃` in the rotated frame
//! `(ζ, ζ⊥, e₃)` with `c = (r₀ cos θ₀, r₀ sin θ₀, x³₀)`. Velocities are kept in
//! cylindrical components `(ṽ^r, ṽ^θ, ṽ^(3))` while derivatives are Cartesian
//! in `x̃`. With `∂_r = cos θ ∂₁ + sin θ ∂₂` the radial and axial momentum
//! equations split as
//!
//! `E_r + S + O_r = 0`, `E_3 + O_3 = 0`,
//!
//! where `E` is the planar Euler residual in `(x̃¹, x̃³)`,
//! `S = (ṽ^θ)² / (Q^{1/α−1} r)` and the `O` terms collect everything carrying
//! `1 − cos θ`, `sin θ` or an `x̃²` derivative:
//!
//! `O_r = ṽ^r ∂₁ṽ^r (1−cos θ) − ṽ^r ∂₂ṽ^r sin θ + ∂₁p̃ (1−cos θ) − ∂₂p̃ sin θ`,
//! `O_3 = ṽ^r ∂₁ṽ^(3) (1−cos θ) − ṽ^r ∂₂ṽ^(3) sin θ`.

use serde::Serialize;

use super::map::scales;
use super::sequence::check_alpha;
use super::RescaleError;

/// Cylindrical velocity and, optionally, the Cartesian pressure gradient of a
/// three-dimensional flow at `(X, t)`.
pub trait Source3 {
    fn velocity(&self, x: [f64; 3], t: f64) -> [f64; 3];
    fn pressure_gradient(&self, _x: [f64; 3], _t: f64) -> Option<[f64; 3]> {
        None
    }
}

/// Wraps a meridian flow `(r, x³, t) ↦ (v^r, v^θ, v^(3))` with optional
/// `(∂_r p, ∂₃p)`.
pub struct Axisymmetric<V, P> {
    pub velocity: V,
    pub pressure: Option<P>,
}

impl<V, P> Source3 for Axisymmetric<V, P>
where
    V: Fn(f64, f64, f64) -> [f64; 3],
    P: Fn(f64, f64, f64) -> [f64; 2],
{
    fn velocity(&self, x: [f64; 3], t: f64) -> [f64; 3] {
        (self.velocity)(x[0].hypot(x[1]), x[2], t)
    }
    fn pressure_gradient(&self, x: [f64; 3], t: f64) -> Option<[f64; 3]> {
        let p = self.pressure.as_ref()?;
        let r = x[0].hypot(x[1]);
        let [pr, p3] = p(r, x[2], t);
        Some([pr * x[0] / r, pr * x[1] / r, p3])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Window3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub n: [usize; 3],
    pub times: Vec<f64>,
}

impl Window3 {
    pub fn cube(half: f64, n: usize, times: Vec<f64>) -> Self {
        Self {
            lo: [-half; 3],
            hi: [half; 3],
            n: [n; 3],
            times,
        }
    }

    fn h(&self, a: usize) -> f64 {
        (self.hi[a] - self.lo[a]) / (self.n[a] - 1) as f64
    }

    fn point(&self, i: [usize; 3]) -> [f64; 3] {
        std::array::from_fn(|a| self.lo[a] + i[a] as f64 * self.h(a))
    }

    fn idx(&self, i: [usize; 3]) -> usize {
        (i[0] * self.n[1] + i[1]) * self.n[2] + i[2]
    }

    fn len(&self) -> usize {
        self.n.iter().product()
    }

    fn validate(&self) -> Result<(), RescaleError> {
        if self.n.iter().any(|&n| n < 3) || (0..3).any(|a| !(self.hi[a] > self.lo[a])) {
            return Err(RescaleError::InvalidParameter(
                "window needs at least 3 nodes and positive extent per axis".into(),
            ));
        }
        if self.times.len() < 3 || self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(RescaleError::InvalidParameter(
                "window needs at least 3 increasing times".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RescaledField3 {
    pub q: f64,
    pub alpha: f64,
    /// Center in the rotated Cartesian frame.
    pub center: [f64; 3],
    pub t: f64,
    pub window: Window3,
    /// Cylindrical `(ṽ^r, ṽ^θ, ṽ^(3))`, indexed `[time][node]`.
    pub velocity: Vec<Vec<[f64; 3]>>,
    /// Cartesian `∇̃p̃`, when the source supplies a pressure.
    pub pressure: Option<Vec<Vec<[f64; 3]>>>,
}

/// Samples a three-dimensional source around a center at radius `r0`,
/// longitude `theta0` and height `x3`.
pub fn rescale_3d(
    src: &dyn Source3,
    r0: f64,
    theta0: f64,
    x3: f64,
    t: f64,
    q: f64,
    alpha: f64,
    window: &Window3,
) -> Result<RescaledField3, RescaleError> {
    check_alpha(alpha)?;
    window.validate()?;
    if !(r0 > 0.0) {
        return Err(RescaleError::OffAxis(format!("center radius must be positive, got {r0}")));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(RescaleError::InvalidParameter(format!("Q must be positive, got {q}")));
    }
    let center = [r0 * theta0.cos(), r0 * theta0.sin(), x3];
    let (s, st) = scales(q, alpha);
    // ∇̃p̃ = Q^{−1−1/α} ∇p
    let pscale = q.powf(-1.0 - 1.0 / alpha);
    let mut velocity = Vec::with_capacity(window.times.len());
    let mut pressure: Option<Vec<Vec<[f64; 3]>>> = Some(Vec::new());
    for &tt in &window.times {
        let time = t + st * tt;
        let mut vs = vec![[0.0; 3]; window.len()];
        let mut ps = vec![[0.0; 3]; window.len()];
        let mut have_p = true;
        for i in 0..window.n[0] {
            for j in 0..window.n[1] {
                for k in 0..window.n[2] {
                    let z = window.point([i, j, k]);
                    let x: [f64; 3] = std::array::from_fn(|a| center[a] + s * z[a]);
                    if x[0].hypot(x[1]) <= 0.0 {
                        return Err(RescaleError::OffAxis("window reaches the axis".into()));
                    }
                    let n = window.idx([i, j, k]);
                    let v = src.velocity(x, time);
                    vs[n] = [v[0] / q, v[1] / q, v[2] / q];
                    match src.pressure_gradient(x, time) {
                        Some(g) => ps[n] = [g[0] * pscale, g[1] * pscale, g[2] * pscale],
                        None => have_p = false,
                    }
                }
            }
        }
        velocity.push(vs);
        match (&mut pressure, have_p) {
            (Some(p), true) => p.push(ps),
            _ => pressure = None,
        }
    }
    Ok(RescaledField3 {
        q,
        alpha,
        center,
        t,
        window: window.clone(),
        velocity,
        pressure,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedResidual {
    /// `max |E_r|`, `max |E_3|` over interior nodes.
    pub euler_r: f64,
    pub euler_3: f64,
    /// `max (ṽ^θ)² / (Q^{1/α−1} r)`.
    pub swirl_term: f64,
    /// `max (|O_r| + |O_3|)`.
    pub o_terms: f64,
    /// `max |∂₂ṽ|` over the meridian components.
    pub transverse: f64,
    /// `max |E_r + S + O_r|, |E_3 + O_3|`; discretisation error only for
    /// genuine solutions.
    pub identity_defect: f64,
    pub max_tan_theta: f64,
    /// True when `∇p̃` was recovered from the axisymmetric momentum balance.
    pub pressure_recovered: bool,
}

struct Geometry {
    r: f64,
    cos: f64,
    sin: f64,
}

fn geometry(f: &RescaledField3, z: [f64; 3]) -> Geometry {
    let s = scales(f.q, f.alpha).0;
    let x1 = f.center[0] + s * z[0];
    let x2 = f.center[1] + s * z[1];
    let r = x1.hypot(x2);
    Geometry {
        r,
        cos: x1 / r,
        sin: x2 / r,
    }
}

/// Central differences of component `c` at interior node `i`, time `m`.
fn grads(f: &RescaledField3, m: usize, i: [usize; 3], c: usize) -> [f64; 4] {
    let w = &f.window;
    let v = |m: usize, i: [usize; 3]| f.velocity[m][w.idx(i)][c];
    let mut g = [0.0; 4];
    for a in 0..3 {
        let (mut p, mut q) = (i, i);
        p[a] += 1;
        q[a] -= 1;
        g[a] = (v(m, p) - v(m, q)) / (2.0 * w.h(a));
    }
    g[3] = (v(m + 1, i) - v(m - 1, i)) / (w.times[m + 1] - w.times[m - 1]);
    g
}

pub fn reduced_residual(f: &RescaledField3) -> Result<ReducedResidual, RescaleError> {
    check_alpha(f.alpha)?;
    let r0 = f.center[0].hypot(f.center[1]);
    if !(r0 > 0.0) {
        return Err(RescaleError::OffAxis(format!("r0 must be positive, got {r0}")));
    }
    let w = &f.window;
    let curv = f.q.powf(1.0 / f.alpha - 1.0);
    let mut out = ReducedResidual {
        euler_r: 0.0,
        euler_3: 0.0,
        swirl_term: 0.0,
        o_terms: 0.0,
        transverse: 0.0,
        identity_defect: 0.0,
        max_tan_theta: 0.0,
        pressure_recovered: f.pressure.is_none(),
    };
    for m in 1..w.times.len() - 1 {
        for i in 1..w.n[0] - 1 {
            for j in 1..w.n[1] - 1 {
                for k in 1..w.n[2] - 1 {
                    let node = [i, j, k];
                    let geo = geometry(f, w.point(node));
                    let [vr, vt, v3] = f.velocity[m][w.idx(node)];
                    let gr = grads(f, m, node, 0);
                    let g3 = grads(f, m, node, 2);
                    let s = vt * vt / (curv * geo.r);
                    let dr = |g: &[f64; 4]| geo.cos * g[0] + geo.sin * g[1];
                    let (p1, p2, p3) = match &f.pressure {
                        Some(p) => {
                            let g = p[m][w.idx(node)];
                            (g[0], g[1], g[2])
                        }
                        None => {
                            let pr = -gr[3] - (vr * dr(&gr) + v3 * gr[2]) + s;
                            let pz = -g3[3] - (vr * dr(&g3) + v3 * g3[2]);
                            (geo.cos * pr, geo.sin * pr, pz)
                        }
                    };
                    let one_c = 1.0 - geo.cos;
                    let e_r = -(vr * gr[0] + v3 * gr[2]) - p1 - gr[3];
                    let e_3 = -(vr * g3[0] + v3 * g3[2]) - p3 - g3[3];
                    let o_r = vr * gr[0] * one_c - vr * gr[1] * geo.sin + p1 * one_c - p2 * geo.sin;
                    let o_3 = vr * g3[0] * one_c - vr * g3[1] * geo.sin;
                    out.euler_r = out.euler_r.max(e_r.abs());
                    out.euler_3 = out.euler_3.max(e_3.abs());
                    out.swirl_term = out.swirl_term.max(s);
                    out.o_terms = out.o_terms.max(o_r.abs() + o_3.abs());
                    out.transverse = out.transverse.max(gr[1].abs()).max(g3[1].abs());
                    out.identity_defect = out
                        .identity_defect
                        .max((e_r + s + o_r).abs())
                        .max((e_3 + o_3).abs());
                    out.max_tan_theta = out.max_tan_theta.max((geo.sin / geo.cos).abs());
                }
            }
        }
    }
    Ok(out)
}

/// Exponent `1/α − 1` of `Q` in the swirl-term denominator; the term vanishes
/// along the sequence iff `Q^{1/α−1} → ∞`.
pub fn swirl_term_vanishes(alpha: f64, q_to_infinity: bool) -> bool {
    let e = 1.0 / alpha - 1.0;
    if q_to_infinity {
        e > 0.0
    } else {
        e < 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TanThetaCollapse {
    /// `max |∂₂ṽ − tan θ ∂₁ṽ|` over components and interior nodes.
    pub defect: f64,
    /// `max |∂₂ṽ|`; scales like `tan θ` for axisymmetric parents.
    pub transverse: f64,
    pub max_tan_theta: f64,
    /// Defect above `tol·(1 + max|∇̃ṽ|)`.
    pub flagged: bool,
}

pub fn tan_theta_collapse(f: &RescaledField3, tol: f64) -> TanThetaCollapse {
    let w = &f.window;
    let mut defect: f64 = 0.0;
    let mut transverse: f64 = 0.0;
    let mut grad: f64 = 0.0;
    let mut tan_max: f64 = 0.0;
    let m = w.times.len() / 2;
    let m = m.clamp(1, w.times.len() - 2);
    for i in 1..w.n[0] - 1 {
        for j in 1..w.n[1] - 1 {
            for k in 1..w.n[2] - 1 {
                let node = [i, j, k];
                let geo = geometry(f, w.point(node));
                let tan = geo.sin / geo.cos;
                tan_max = tan_max.max(tan.abs());
                for c in 0..3 {
                    let g = grads(f, m, node, c);
                    defect = defect.max((g[1] - tan * g[0]).abs());
                    transverse = transverse.max(g[1].abs());
                    grad = grad.max(g[0].abs()).max(g[1].abs()).max(g[2].abs());
                }
            }
        }
    }
    TanThetaCollapse {
        defect,
        transverse,
        max_tan_theta: tan_max,
        flagged: defect > tol * (1.0 + grad),
    }
}
