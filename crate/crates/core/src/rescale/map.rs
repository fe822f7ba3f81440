//! The blow-up rescaling `ṽ(x̃, t̃) = Q⁻¹ v(Q^{−(1−α)/α} x̃ + x_k, Q^{−1/α} t̃ + t_k)`.

use serde::Serialize;

use super::sequence::{check_alpha, BlowupCenter};
use super::RescaleError;
use crate::field::{
    holder_norm, Grid2D, HolderEstimate, Interpolator, Method, ScalarField2D, TimeSeries,
};

/// Velocity `(v^r, v^θ, v^(3))` on the meridian plane; planar sources leave
/// the middle slot zero.
pub trait VelocitySource {
    fn sample(&self, x: [f64; 2], t: f64) -> [f64; 3];
    fn contains(&self, x: [f64; 2], t: f64) -> bool;
}

/// Closed-form velocity on a space-time box.
pub struct Analytic<F> {
    pub f: F,
    /// `[min1, max1, min2, max2]`.
    pub domain: [f64; 4],
    pub times: (f64, f64),
}

impl<F: Fn([f64; 2], f64) -> [f64; 3]> VelocitySource for Analytic<F> {
    fn sample(&self, x: [f64; 2], t: f64) -> [f64; 3] {
        (self.f)(x, t)
    }
    fn contains(&self, x: [f64; 2], t: f64) -> bool {
        let d = self.domain;
        x[0] >= d[0] && x[0] <= d[1] && x[1] >= d[2] && x[1] <= d[3] && t >= self.times.0 && t <= self.times.1
    }
}

/// Snapshots on a grid: bicubic in space, linear in time.
pub struct Gridded {
    series: TimeSeries<ScalarField2D>,
    components: [Vec<ScalarField2D>; 3],
}

impl Gridded {
    /// `components[c][k]` is component `c` at `times[k]`.
    pub fn new(times: Vec<f64>, components: [Vec<ScalarField2D>; 3]) -> Result<Self, RescaleError> {
        let n = times.len();
        if components.iter().any(|c| c.len() != n) {
            return Err(RescaleError::InvalidParameter(
                "every component needs one field per time".into(),
            ));
        }
        let series = TimeSeries::new(times, components[0].clone())?;
        for c in &components[1..] {
            for f in c {
                series.grid().ensure_same(f.grid())?;
            }
        }
        Ok(Self { series, components })
    }

    pub fn grid(&self) -> &Grid2D {
        self.series.grid()
    }
}

impl VelocitySource for Gridded {
    fn sample(&self, x: [f64; 2], t: f64) -> [f64; 3] {
        let times = self.series.times();
        let k = times.partition_point(|&s| s <= t).clamp(1, times.len().max(2) - 1);
        let at = |c: usize, k: usize| Interpolator::new(&self.components[c][k], Method::Bicubic).sample(x);
        if times.len() == 1 {
            return [at(0, 0), at(1, 0), at(2, 0)];
        }
        let w = ((t - times[k - 1]) / (times[k] - times[k - 1])).clamp(0.0, 1.0);
        std::array::from_fn(|c| (1.0 - w) * at(c, k - 1) + w * at(c, k))
    }
    fn contains(&self, x: [f64; 2], t: f64) -> bool {
        let times = self.series.times();
        self.grid().contains(x) && t >= times[0] && t <= times[times.len() - 1]
    }
}

/// Rescaled window: a uniform `(x̃¹, x̃²)` grid and a list of `t̃`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Window {
    pub grid: Grid2D,
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RescaledField {
    pub center: BlowupCenter,
    pub alpha: f64,
    pub window: Window,
    /// Indexed `[time][node]`.
    pub values: Vec<Vec<[f64; 3]>>,
}

impl RescaledField {
    /// Value at the window node nearest `(x̃, t̃) = (0, 0)`.
    pub fn at_origin(&self) -> [f64; 3] {
        let g = &self.window.grid;
        let near = |lo: f64, h: f64, n: usize| (((-lo) / h).round().max(0.0) as usize).min(n - 1);
        let i = near(g.min1(), g.h1(), g.n1());
        let j = near(g.min2(), g.h2(), g.n2());
        let k = self
            .window
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(k, _)| k)
            .unwrap_or(0);
        self.values[k][g.idx(i, j)]
    }

    /// Component `c` as a time series over the window.
    pub fn component(&self, c: usize) -> Result<TimeSeries<ScalarField2D>, RescaleError> {
        let snaps = self
            .values
            .iter()
            .map(|v| ScalarField2D::new(self.window.grid, v.iter().map(|x| x[c]).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TimeSeries::new(self.window.times.clone(), snaps)?)
    }
}

/// `(space, time)` scale factors `(Q^{−(1−α)/α}, Q^{−1/α})`.
pub fn scales(q: f64, alpha: f64) -> (f64, f64) {
    (q.powf(-(1.0 - alpha) / alpha), q.powf(-1.0 / alpha))
}

/// Maps a rescaled point to original variables.
pub fn to_original(center: &BlowupCenter, alpha: f64, xt: [f64; 2], tt: f64) -> ([f64; 2], f64) {
    let (s, st) = scales(center.q, alpha);
    ([s * xt[0] + center.x[0], s * xt[1] + center.x[1]], st * tt + center.t)
}

pub fn rescale_field(
    src: &dyn VelocitySource,
    center: BlowupCenter,
    alpha: f64,
    window: &Window,
) -> Result<RescaledField, RescaleError> {
    check_alpha(alpha)?;
    if !(center.q > 0.0 && center.q.is_finite()) {
        return Err(RescaleError::InvalidParameter(format!("Q must be positive, got {}", center.q)));
    }
    if window.times.is_empty() {
        return Err(RescaleError::InvalidParameter("window has no times".into()));
    }
    let g = &window.grid;
    let (t_lo, t_hi) = window
        .times
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));
    for tt in [t_lo, t_hi] {
        for x1 in [g.min1(), g.max1()] {
            for x2 in [g.min2(), g.max2()] {
                let (x, t) = to_original(&center, alpha, [x1, x2], tt);
                if !src.contains(x, t) {
                    return Err(RescaleError::WindowOutsideDomain {
                        corner: [x1, x2, tt],
                        mapped: [x[0], x[1], t],
                    });
                }
            }
        }
    }
    let values = window
        .times
        .iter()
        .map(|&tt| {
            g.nodes()
                .map(|(_, _, z)| {
                    let (x, t) = to_original(&center, alpha, z, tt);
                    let v = src.sample(x, t);
                    [v[0] / center.q, v[1] / center.q, v[2] / center.q]
                })
                .collect()
        })
        .collect();
    Ok(RescaledField {
        center,
        alpha,
        window: window.clone(),
        values,
    })
}

/// `v = (1−t)^{−α} V(x / (1−t)^{1−α})` for a profile `V` and `t < 1`.
pub struct SelfSimilar<P> {
    pub profile: P,
    pub alpha: f64,
}

impl<P: Fn([f64; 2]) -> [f64; 3]> SelfSimilar<P> {
    pub fn eval(&self, x: [f64; 2], t: f64) -> [f64; 3] {
        let tau = 1.0 - t;
        let l = tau.powf(1.0 - self.alpha);
        let a = tau.powf(-self.alpha);
        let v = (self.profile)([x[0] / l, x[1] / l]);
        [a * v[0], a * v[1], a * v[2]]
    }

    /// `(1−t̃)^{−α} V((x̃ + z_k) / (1−t̃)^{1−α})` with `z_k = x_k Q^{(1−α)/α}`.
    pub fn rescaled(&self, center: &BlowupCenter, xt: [f64; 2], tt: f64) -> [f64; 3] {
        let m = center.q.powf((1.0 - self.alpha) / self.alpha);
        let z = [center.x[0] * m, center.x[1] * m];
        self.eval([xt[0] + z[0], xt[1] + z[1]], tt)
    }
}

/// `C^γ` norms of `ṽ_{k+1} − ṽ_k` on a shared window, largest over components.
pub fn successive_holder(
    fields: &[RescaledField],
    gamma: f64,
) -> Result<Vec<HolderEstimate>, RescaleError> {
    let mut out = Vec::new();
    for pair in fields.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.window != b.window {
            return Err(RescaleError::InvalidParameter("windows differ between k and k+1".into()));
        }
        let mut best: Option<HolderEstimate> = None;
        for c in 0..3 {
            let snaps = a
                .values
                .iter()
                .zip(&b.values)
                .map(|(u, v)| {
                    ScalarField2D::new(a.window.grid, u.iter().zip(v).map(|(p, q)| q[c] - p[c]).collect())
                })
                .collect::<Result<Vec<_>, _>>()?;
            let est = holder_norm(&TimeSeries::new(a.window.times.clone(), snaps)?, gamma)?;
            if best.as_ref().is_none_or(|b| est.norm() > b.norm()) {
                best = Some(est);
            }
        }
        out.push(best.expect("three components"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::bump;

    fn profile(y: [f64; 2]) -> [f64; 3] {
        let b = bump((y[0] * y[0] + y[1] * y[1]).sqrt() / 2.0).0;
        [b * y[1], 0.5 * b, -b * y[0]]
    }

    fn window() -> Window {
        Window {
            grid: Grid2D::square(-1.0, 1.0, 11).unwrap(),
            times: vec![-1.0, -0.5, 0.0],
        }
    }

    #[test]
    fn unit_magnitude_at_origin_is_identity() {
        let src = Analytic {
            f: |x: [f64; 2], t: f64| [x[0] * t, x[1].sin(), t],
            domain: [-5.0, 5.0, -5.0, 5.0],
            times: (-5.0, 5.0),
        };
        let center = BlowupCenter { x: [0.0, 0.0], t: 0.0, q: 1.0 };
        for alpha in [0.5, -2.0, 0.9] {
            let r = rescale_field(&src, center, alpha, &window()).unwrap();
            for (k, &t) in r.window.times.iter().enumerate() {
                for (n, (_, _, z)) in r.window.grid.nodes().enumerate() {
                    assert_eq!(r.values[k][n], src.sample(z, t));
                }
            }
        }
    }

    #[test]
    fn exact_self_similar_matches_closed_form() {
        let alpha = 0.5;
        let sss = SelfSimilar { profile, alpha };
        let src = Analytic {
            f: |x, t| sss.eval(x, t),
            domain: [-10.0, 10.0, -10.0, 10.0],
            times: (-10.0, 1.0 - 1e-300),
        };
        for k in 4..10 {
            let t = 1.0 - 2f64.powi(-k);
            let l = (1.0 - t).powf(1.0 - alpha);
            let center = BlowupCenter { x: [0.5 * l, 0.25 * l], t, q: (1.0 - t).powf(-alpha) };
            let r = rescale_field(&src, center, alpha, &window()).unwrap();
            assert!(r.at_origin()[1] > 0.1);
            for (m, &tt) in r.window.times.iter().enumerate() {
                for (n, (_, _, z)) in r.window.grid.nodes().enumerate() {
                    let want = sss.rescaled(&center, z, tt);
                    for c in 0..3 {
                        assert!((r.values[m][n][c] - want[c]).abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn negative_alpha_window_shrinks_like_q_to_three_halves() {
        let alpha = -2.0;
        for q in [0.1, 0.01, 0.001] {
            let center = BlowupCenter { x: [1.0, 0.0], t: 0.5, q };
            let (x, _) = to_original(&center, alpha, [1.0, 0.0], 0.0);
            let want = q.powf(1.5);
            assert!(((x[0] - 1.0) - want).abs() <= 1e-15 * (1.0 + want));
        }
    }

    #[test]
    fn escaping_window_reports_corner() {
        let src = Analytic {
            f: |_, _| [0.0; 3],
            domain: [0.0, 1.0, 0.0, 1.0],
            times: (0.0, 1.0),
        };
        let center = BlowupCenter { x: [0.5, 0.5], t: 0.5, q: 1.0 };
        match rescale_field(&src, center, 0.5, &window()) {
            Err(RescaleError::WindowOutsideDomain { corner, .. }) => assert_eq!(corner, [-1.0, -1.0, -1.0]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gridded_source_reproduces_grid_values() {
        let g = Grid2D::square(0.0, 1.0, 9).unwrap();
        let f = ScalarField2D::from_fn(g, |x, y| x + 2.0 * y).unwrap();
        let src = Gridded::new(vec![0.0, 1.0], [vec![f.clone(), f.clone()], vec![f.clone(), f.clone()], vec![f.clone(), f]]).unwrap();
        let v = src.sample([0.25, 0.5], 0.3);
        assert!((v[0] - 1.25).abs() < 1e-12 && (v[2] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn successive_differences_vanish_for_exact_self_similar() {
        let alpha = 0.5;
        let sss = SelfSimilar { profile, alpha };
        let src = Analytic {
            f: |x, t| sss.eval(x, t),
            domain: [-10.0, 10.0, -10.0, 10.0],
            times: (-10.0, 1.0 - 1e-300),
        };
        let fields: Vec<RescaledField> = (4..7)
            .map(|k| {
                let t = 1.0 - 2f64.powi(-k);
                let center = BlowupCenter { x: [0.0, 0.0], t, q: (1.0 - t).powf(-alpha) };
                rescale_field(&src, center, alpha, &window()).unwrap()
            })
            .collect();
        for e in successive_holder(&fields, 0.5).unwrap() {
            assert!(e.norm() < 1e-12);
        }
    }
}
