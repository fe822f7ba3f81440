//! The profile equations restricted to the base `z² = 0`:
//!
//! ```text
//! a·(H²)′ + (1+α)·H² = 0,    a·W′ + W − (H²)′ = 0,    a = V¹(z) + (1−α)z
//! ```
//!
//! With `Φ(z) = ∫_{z_a}^z 1/a` the solution is
//! `H² = H²(z_a)·e^{−(1+α)Φ}` and
//! `W = e^{−Φ}·[W(z_a) − (1+α)H²(z_a)·∫_{z_a}^z e^{−αΦ}/a²]`.

use serde::{Deserialize, Serialize};

use super::ProfileError;
use crate::numeric::{adaptive_gauss, gauss_fixed, gauss_legendre, linear_fit, rk4_step};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseOdeSpec {
    pub alpha: f64,
    /// `H²(z_a)` at the left end of the range.
    pub c: f64,
    /// `W(z_a)`; defaults to `(1+α)·c/((1−α)·z_a)`, the value on the power
    /// law `H² ∝ z^{−(1+α)/(1−α)}` when `V¹ ≡ 0`.
    pub w0: Option<f64>,
    pub z_range: (f64, f64),
    pub steps: usize,
}

impl BaseOdeSpec {
    pub fn w_start(&self) -> f64 {
        let (a, za) = (self.alpha, self.z_range.0);
        self.w0.unwrap_or((1.0 + a) * self.c / ((1.0 - a) * za))
    }
}

/// Quadrature evaluation of the closed form.
pub struct ClosedFormBase<'a> {
    pub v1: &'a dyn Fn(f64) -> f64,
    pub alpha: f64,
    pub za: f64,
    pub h2a: f64,
    pub wa: f64,
}

impl ClosedFormBase<'_> {
    fn a(&self, z: f64) -> f64 {
        (self.v1)(z) + (1.0 - self.alpha) * z
    }

    fn phi(&self, z: f64) -> f64 {
        adaptive_gauss(&|s| 1.0 / self.a(s), self.za, z, 1e-16)
    }

    fn assemble(&self, phi: f64, inner: f64) -> [f64; 2] {
        let al = self.alpha;
        [
            self.h2a * (-(1.0 + al) * phi).exp(),
            (-phi).exp() * (self.wa - (1.0 + al) * self.h2a * inner),
        ]
    }

    /// `(H², W)` at `z`, each integral by adaptive quadrature.
    pub fn eval(&self, z: f64) -> [f64; 2] {
        let al = self.alpha;
        let inner = adaptive_gauss(
            &|s| {
                let a = self.a(s);
                (-al * self.phi(s)).exp() / (a * a)
            },
            self.za,
            z,
            1e-16,
        );
        self.assemble(self.phi(z), inner)
    }

    /// `(H², W)` along increasing `zs` starting at `z_a`, accumulating both
    /// integrals interval by interval.
    pub fn along(&self, zs: &[f64]) -> Vec<[f64; 2]> {
        let rule = gauss_legendre(10);
        let al = self.alpha;
        let (mut phi, mut inner, mut prev) = (0.0, 0.0, self.za);
        let mut out = Vec::with_capacity(zs.len());
        for &z in zs {
            let phi0 = phi;
            let z0 = prev;
            inner += gauss_fixed(
                &|s| {
                    let a = self.a(s);
                    let p = phi0 + gauss_fixed(&|u| 1.0 / self.a(u), z0, s, &rule);
                    (-al * p).exp() / (a * a)
                },
                z0,
                z,
                &rule,
            );
            phi += gauss_fixed(&|u| 1.0 / self.a(u), z0, z, &rule);
            prev = z;
            out.push(self.assemble(phi, inner));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseOdeSolution {
    pub z: Vec<f64>,
    pub h2: Vec<f64>,
    pub w: Vec<f64>,
    pub h2_closed: Vec<f64>,
    pub w_closed: Vec<f64>,
    /// Pointwise relative difference, worst over both components.
    pub max_rel_discrepancy: f64,
}

impl BaseOdeSolution {
    /// Slope of `log H²` against `log z`, when `H² > 0` and `z > 0` throughout.
    pub fn growth_exponent(&self) -> Option<f64> {
        if self.h2.iter().chain(&self.z).any(|&v| !(v > 0.0)) {
            return None;
        }
        let x: Vec<f64> = self.z.iter().map(|z| z.ln()).collect();
        let y: Vec<f64> = self.h2.iter().map(|h| h.ln()).collect();
        Some(linear_fit(&x, &y).0)
    }

    /// Indices where `H²` or `W` vanish or change sign.
    pub fn zeros(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for f in [&self.h2, &self.w] {
            for k in 0..f.len() {
                let hit = f[k] == 0.0 || (k > 0 && f[k].signum() != f[k - 1].signum());
                if hit && !out.contains(&k) {
                    out.push(k);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn rel(x: f64, y: f64, scale: f64) -> f64 {
    let d = (x - y).abs();
    if d == 0.0 {
        0.0
    } else {
        d / y.abs().max(1e-14 * scale).max(f64::MIN_POSITIVE)
    }
}

/// RK4 integration and the closed form on the same nodes.
pub fn base_ode_solve(v1: &dyn Fn(f64) -> f64, spec: &BaseOdeSpec) -> Result<BaseOdeSolution, ProfileError> {
    let (za, zb) = spec.z_range;
    if !(za.is_finite() && zb.is_finite() && zb > za) || spec.steps == 0 {
        return Err(ProfileError::InvalidParameter(format!(
            "need za < zb and steps > 0, got ({za}, {zb}) with {} steps",
            spec.steps
        )));
    }
    if !(spec.alpha < 1.0) {
        return Err(ProfileError::InvalidExponents(format!("alpha must be below 1, got {}", spec.alpha)));
    }
    let al = spec.alpha;
    let a = |z: f64| v1(z) + (1.0 - al) * z;
    let h = (zb - za) / spec.steps as f64;
    for k in 0..=2 * spec.steps {
        let z = za + 0.5 * h * k as f64;
        if !(a(z) > 0.0) {
            return Err(ProfileError::SingularOde { z });
        }
    }
    let rhs = |z: f64, y: &[f64; 2]| {
        let az = a(z);
        let dh = -(1.0 + al) * y[0] / az;
        [dh, (dh - y[1]) / az]
    };
    let w0 = spec.w_start();
    let mut y = [spec.c, w0];
    let mut z = vec![za];
    let mut h2 = vec![y[0]];
    let mut w = vec![y[1]];
    for k in 0..spec.steps {
        let zk = za + h * k as f64;
        y = rk4_step(&rhs, zk, &y, h);
        z.push(za + h * (k + 1) as f64);
        h2.push(y[0]);
        w.push(y[1]);
    }
    let cf = ClosedFormBase {
        v1,
        alpha: al,
        za,
        h2a: spec.c,
        wa: w0,
    };
    let closed = cf.along(&z);
    let h2_closed: Vec<f64> = closed.iter().map(|p| p[0]).collect();
    let w_closed: Vec<f64> = closed.iter().map(|p| p[1]).collect();
    let sh = h2_closed.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sw = w_closed.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for k in 0..z.len() {
        worst = worst
            .max(rel(h2[k], h2_closed[k], sh))
            .max(rel(w[k], w_closed[k], sw));
    }
    Ok(BaseOdeSolution {
        z,
        h2,
        w,
        h2_closed,
        w_closed,
        max_rel_discrepancy: worst,
    })
}
