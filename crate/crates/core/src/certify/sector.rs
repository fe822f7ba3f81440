//! Weighted `W^p` identity on a polar sector.
//!
//! Multiplying the `W` profile equation by `W^p` and integrating over
//! `D = {l₁ ≤ |z| ≤ l₂, θ₁ ≤ arg z ≤ θ₂}` gives `T₁ + T₂ − T₃ + T₄ − T₅ = 0`:
//!
//! ```text
//! T₁ = ∫_D [(1 − 2(1−α)/(p+1))·W − ∂₁H²]·W^p
//! T₂ = 1/(p+1) ∫_{θ₁}^{θ₂} (V_r·l₂ + (1−α)·l₂²)·W^{p+1}(l₂, θ) dθ      (T₃ likewise at l₁)
//! T₄ = 1/(p+1) ∫_{l₁}^{l₂} V·(−sin θ₂, cos θ₂)·W^{p+1}(r, θ₂) dr     (T₅ likewise at θ₁)
//! ```
//!
//! Under the sign and maximum hypotheses `T₁ > 0` and `T₄ > T₅` once `p` is
//! large, so a strictly positive total contradicts the identity. All terms
//! are computed for `Ŵ = W/M` with `M` the sector maximum, which divides the
//! identity by `M^{p+1}` and keeps `W^{p}` representable.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{
    decay_check, sample, sample_d1, sampling_grid, strict_max, worst_violation, CertificateReport,
    CertifyError, HypothesisCheck, PropositionId, Traces, Verdict, Witness,
};
use crate::field::{quadrature, Grid2D, Region, ScalarField2D, Sector};
use crate::profile::{names, SelfSimilarAnsatz, NONTRIVIAL_TOL};

pub const DEFAULT_P_LADDER: [f64; 4] = [25.0, 50.0, 100.0, 200.0];

fn default_ladder() -> Vec<f64> {
    DEFAULT_P_LADDER.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    pub theta1: f64,
    pub theta2: f64,
    pub l1: f64,
    /// `None` for an infinite sector, truncated where the outer arc leaves
    /// the grid.
    pub l2: Option<f64>,
    #[serde(default = "default_ladder")]
    pub p_ladder: Vec<f64>,
}

impl SectorSpec {
    pub fn new(theta1: f64, theta2: f64, l1: f64, l2: Option<f64>) -> Self {
        Self {
            theta1,
            theta2,
            l1,
            l2,
            p_ladder: default_ladder(),
        }
    }

    fn validate(&self, alpha: f64) -> Result<(), CertifyError> {
        let bad = |m: String| Err(CertifyError::InvalidSpec(m));
        let (t1, t2) = (self.theta1, self.theta2);
        if !(t1 > 0.0 && t1 < t2 && t2 < FRAC_PI_2) {
            return bad(format!("angles must satisfy 0 < theta1 < theta2 < pi/2, got ({t1}, {t2})"));
        }
        if !(self.l1 >= 0.0 && self.l1.is_finite()) {
            return bad(format!("l1 must be finite and non-negative, got {}", self.l1));
        }
        if let Some(l2) = self.l2 {
            if !(l2.is_finite() && l2 > self.l1) {
                return bad(format!("l2 must be finite and exceed l1, got {l2}"));
            }
        }
        let ps = &self.p_ladder;
        if ps.is_empty() || ps.iter().any(|p| !p.is_finite()) || ps.windows(2).any(|w| w[1] <= w[0]) {
            return bad("p_ladder must be a non-empty increasing list of finite values".into());
        }
        if ps[0] <= 1.0 - 2.0 * alpha {
            return bad(format!(
                "p_ladder: every p must exceed 1 - 2*alpha = {}, got {}",
                1.0 - 2.0 * alpha,
                ps[0]
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SectorOptions {
    /// Sampling grid for analytic profiles.
    pub grid: Option<Grid2D>,
    /// Strict-maximum margin over the 8 neighbours.
    pub max_margin: f64,
    /// Required `W(z₀) − ∂₁H²(z₀)` at the maximum.
    pub zero_set_margin: f64,
    /// Relative tolerance below which the two ray suprema count as equal.
    pub tie_tol: f64,
    /// Relative quadrature tolerance attached to each inequality.
    pub rel_tol: f64,
    /// Odd number of samples per ray and per arc.
    pub ray_samples: usize,
    /// Allowed growth of the decay-scaled maximum between radial shells.
    pub growth_factor: f64,
}

impl Default for SectorOptions {
    fn default() -> Self {
        Self {
            grid: None,
            max_margin: 1e-12,
            zero_set_margin: 0.0,
            tie_tol: 1e-6,
            rel_tol: 1e-3,
            ray_samples: 4001,
            growth_factor: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorRung {
    pub p: f64,
    /// `[T₁, T₂, T₃, T₄, T₅]`, divided by `M^{p+1}`.
    pub t: [f64; 5],
    pub total: f64,
    /// Truncation bound, 0 for finite sectors.
    pub tail: f64,
    pub bulk_tol: f64,
    pub ray_tol: f64,
    pub total_tol: f64,
    /// `M·T₁^{1/(p+1)}`.
    pub root_bulk: Option<f64>,
    /// `M·((p+1)·T)^{1/(p+1)}` for `T₂, T₃, T₄, T₅`.
    pub root_outer_arc: Option<f64>,
    pub root_inner_arc: Option<f64>,
    pub root_ray2: Option<f64>,
    pub root_ray1: Option<f64>,
    /// `(T₄ − T₅)/(T₄ + T₅)`.
    pub relative_gap: f64,
    pub bulk_positive: bool,
    pub ray_gap_positive: bool,
    pub total_positive: bool,
}

fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len();
    debug_assert!(n % 2 == 1 && n >= 3);
    let mut s = y[0] + y[n - 1];
    for (k, v) in y.iter().enumerate().take(n - 1).skip(1) {
        s += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// `(W, weight)` samples along a ray or an arc.
struct Curve {
    w: Vec<f64>,
    weight: Vec<f64>,
    h: f64,
}

impl Curve {
    fn sup(&self) -> f64 {
        self.w.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `1/(p+1) ∫ weight·Ŵ^{p+1}`.
    fn term(&self, p: f64, m: f64) -> f64 {
        let y: Vec<f64> = self
            .w
            .iter()
            .zip(&self.weight)
            .map(|(w, g)| g * (w / m).max(0.0).powf(p + 1.0))
            .collect();
        simpson(&y, self.h) / (p + 1.0)
    }
}

struct Profiles<'a> {
    alpha: f64,
    ansatz: &'a SelfSimilarAnsatz,
}

impl Profiles<'_> {
    fn eval(&self, name: &str, z: [f64; 2]) -> f64 {
        self.ansatz.profiles[name].eval(z)
    }

    fn ray(&self, theta: f64, l1: f64, l2: f64, n: usize) -> Curve {
        let (s, c) = theta.sin_cos();
        let h = (l2 - l1) / (n - 1) as f64;
        let mut out = Curve {
            w: Vec::with_capacity(n),
            weight: Vec::with_capacity(n),
            h,
        };
        for k in 0..n {
            let r = l1 + h * k as f64;
            let z = [r * c, r * s];
            out.w.push(self.eval(names::W, z));
            out.weight
                .push(-self.eval(names::V1, z) * s + self.eval(names::V2, z) * c);
        }
        out
    }

    fn arc(&self, l: f64, t1: f64, t2: f64, n: usize) -> Curve {
        let h = (t2 - t1) / (n - 1) as f64;
        let mut out = Curve {
            w: Vec::with_capacity(n),
            weight: Vec::with_capacity(n),
            h,
        };
        for k in 0..n {
            let (s, c) = (t1 + h * k as f64).sin_cos();
            let z = [l * c, l * s];
            let vr = self.eval(names::V1, z) * c + self.eval(names::V2, z) * s;
            out.w.push(self.eval(names::W, z));
            out.weight.push(vr * l + (1.0 - self.alpha) * l * l);
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Ordering {
    Holds,
    Tie,
    Reversed,
}

/// Bound on the part of the rays and the bulk beyond the truncation radius,
/// from `|W| ≤ C_f (1+r)^{e_w}` and `|V| ≤ C_g (1+r)^{e_v}` fitted on the
/// outer shell. Infinite when the declared exponents do not make the tails
/// integrable.
#[allow(clippy::too_many_arguments)]
fn tail_bound(
    p: f64,
    m: f64,
    r: f64,
    dtheta: f64,
    e_w: f64,
    e_v: f64,
    c_f: f64,
    c_g: f64,
    k_bulk: f64,
) -> f64 {
    let k = e_v + (p + 1.0) * e_w;
    let kb = (p + 1.0) * e_w + 1.0;
    if k + 1.0 >= 0.0 || kb + 1.0 >= 0.0 {
        return f64::INFINITY;
    }
    let ln1r = (1.0 + r).ln();
    let ray = (c_g.ln() + (p + 1.0) * (c_f / m).ln() + (k + 1.0) * ln1r - (-(k + 1.0)).ln() - (p + 1.0).ln()).exp();
    let bulk = dtheta * (k_bulk / m) * ((p * (c_f / m).ln() + (kb + 1.0) * ln1r).exp()) / (-(kb + 1.0));
    2.0 * ray + bulk
}

pub fn sector_integral_test(
    ansatz: &SelfSimilarAnsatz,
    spec: &SectorSpec,
    opts: &SectorOptions,
) -> Result<CertificateReport, CertifyError> {
    let alpha = ansatz.alpha;
    spec.validate(alpha)?;
    if opts.ray_samples < 3 || opts.ray_samples.is_multiple_of(2) {
        return Err(CertifyError::InvalidSpec("ray_samples must be odd and at least 3".into()));
    }
    let used = [names::V1, names::V2, names::W, names::H2];
    let g = sampling_grid(ansatz, &used, opts.grid.as_ref())?;
    let (t1, t2, l1) = (spec.theta1, spec.theta2, spec.l1);
    let l2 = match spec.l2 {
        Some(l) => l,
        None => (g.max1() / t1.cos()).min(g.max2() / t2.sin()) * (1.0 - 1e-12),
    };
    let corners = [
        [l1 * t1.cos(), l1 * t1.sin()],
        [l1 * t2.cos(), l1 * t2.sin()],
        [l2 * t1.cos(), l2 * t1.sin()],
        [l2 * t2.cos(), l2 * t2.sin()],
    ];
    if l2 <= l1 || corners.iter().any(|&c| !g.contains(c)) {
        return Err(CertifyError::InvalidSpec(format!(
            "sector [{l1}, {l2}] x [{t1}, {t2}] is not contained in the grid"
        )));
    }

    let w = sample(ansatz, names::W, &g)?;
    let v1 = sample(ansatz, names::V1, &g)?;
    let v2 = sample(ansatz, names::V2, &g)?;
    let dh = sample_d1(ansatz, names::H2, &g)?;
    let nodes: Vec<(usize, usize)> = g
        .nodes()
        .filter(|&(_, _, z)| {
            let (r, th) = (z[0].hypot(z[1]), z[1].atan2(z[0]));
            r > 0.0 && r >= l1 && r <= l2 && th >= t1 && th <= t2
        })
        .map(|(i, j, _)| (i, j))
        .collect();
    if nodes.is_empty() {
        return Err(CertifyError::InvalidSpec("no grid node lies inside the sector".into()));
    }

    let pr = Profiles { alpha, ansatz };
    let n = opts.ray_samples;
    let ray1 = pr.ray(t1, l1, l2, n);
    let ray2 = pr.ray(t2, l1, l2, n);
    let outer = pr.arc(l2, t1, t2, n);
    let inner = (l1 > 0.0).then(|| pr.arc(l1, t1, t2, n));
    let (sup1, sup2) = (ray1.sup(), ray2.sup());

    let mut hyps = Vec::new();
    let w_sup = nodes.iter().map(|&(i, j)| w.at(i, j).abs()).fold(0.0, f64::max);
    hyps.push(HypothesisCheck::from_witness(
        "nontrivial",
        (w_sup <= NONTRIVIAL_TOL).then_some(Witness::Comparison {
            lhs: w_sup,
            rhs: NONTRIVIAL_TOL,
        }),
    ));
    hyps.push(HypothesisCheck::from_witness(
        "v1-negative",
        worst_violation(&v1, &nodes, |v| v < 0.0, |v| v),
    ));
    hyps.push(HypothesisCheck::from_witness(
        "v2-positive",
        worst_violation(&v2, &nodes, |v| v > 0.0, |v| -v),
    ));
    hyps.push(HypothesisCheck::from_witness(
        "d1h2-positive",
        worst_violation(&dh, &nodes, |v| v > 0.0, |v| -v),
    ));
    hyps.push(decay_check(
        "decay",
        &[(names::W, &w), (names::V1, &v1), (names::V2, &v2)],
        ansatz,
        &nodes,
        opts.growth_factor,
    ));
    let tie = opts.tie_tol * sup1.abs().max(sup2.abs()).max(f64::MIN_POSITIVE);
    let ordering = if sup2 - sup1 > tie {
        Ordering::Holds
    } else if sup1 - sup2 > tie {
        Ordering::Reversed
    } else {
        Ordering::Tie
    };
    let cmp = Witness::Comparison { lhs: sup2, rhs: sup1 };
    hyps.push(if ordering == Ordering::Holds {
        HypothesisCheck::passed("ray-sup-ordering", Some(cmp))
    } else {
        HypothesisCheck::failed("ray-sup-ordering", cmp)
    });
    hyps.push(HypothesisCheck::from_witness(
        "w-nonnegative",
        worst_violation(&w, &nodes, |v| v >= 0.0, |v| -v),
    ));
    let z0 = strict_max(&w, &nodes, opts.max_margin);
    hyps.push(match &z0 {
        Ok(n0) => HypothesisCheck::passed("strict-maximum", Some(Witness::node(&w, *n0))),
        Err(wit) => HypothesisCheck::failed("strict-maximum", wit.clone()),
    });
    if let Ok((i, j)) = z0 {
        let d = w.at(i, j) - dh.at(i, j);
        let cmp = Witness::Comparison {
            lhs: d,
            rhs: opts.zero_set_margin,
        };
        hyps.push(if d > opts.zero_set_margin {
            HypothesisCheck::passed("max-above-forcing", Some(cmp))
        } else {
            HypothesisCheck::failed("max-above-forcing", cmp)
        });
    }

    let node_max = nodes.iter().map(|&(i, j)| w.at(i, j)).fold(f64::NEG_INFINITY, f64::max);
    let mut m = node_max.max(sup1).max(sup2).max(outer.sup());
    if let Some(a) = &inner {
        m = m.max(a.sup());
    }
    if !(m > 0.0) {
        m = 1.0;
    }

    let decl = |k: &str| ansatz.decay_exponents.get(k).copied();
    let tail_inputs = match (spec.l2, decl(names::W), decl(names::V1), decl(names::V2)) {
        (None, Some(ew), Some(a), Some(b)) => {
            let ev = a.max(b);
            let (mut cf, mut cg) = (0.0f64, 0.0f64);
            for &(i, j) in &nodes {
                let z = g.node(i, j);
                let r = z[0].hypot(z[1]);
                if r >= 0.5 * l2 {
                    cf = cf.max(w.at(i, j).abs() * (1.0 + r).powf(-ew));
                    cg = cg.max(v1.at(i, j).hypot(v2.at(i, j)) * (1.0 + r).powf(-ev));
                }
            }
            Some((ew, ev, cf, cg))
        }
        (None, ..) => None,
        _ => Some((0.0, 0.0, 0.0, 0.0)),
    };

    let region = Region::Sector(Sector::new(l1, l2, t1, t2)?);
    let mut rungs = Vec::new();
    for &p in &spec.p_ladder {
        let cp = 1.0 - 2.0 * (1.0 - alpha) / (p + 1.0);
        let integrand = |abs: bool| {
            let vals: Vec<f64> = g
                .nodes()
                .map(|(i, j, _)| {
                    let wh = (w.at(i, j) / m).max(0.0);
                    if wh == 0.0 {
                        return 0.0;
                    }
                    let f = (cp * wh - dh.at(i, j) / m) * wh.powf(p);
                    if abs {
                        f.abs()
                    } else {
                        f
                    }
                })
                .collect();
            ScalarField2D::new(g, vals)
        };
        let tt1 = quadrature(&integrand(false)?, region)?;
        let tt1_abs = quadrature(&integrand(true)?, region)?;
        let tt2 = outer.term(p, m);
        let tt3 = inner.as_ref().map_or(0.0, |a| a.term(p, m));
        let tt4 = ray2.term(p, m);
        let tt5 = ray1.term(p, m);
        let total = tt1 + tt2 - tt3 + tt4 - tt5;
        let tail = match tail_inputs {
            Some((ew, ev, cf, cg)) if spec.l2.is_none() => {
                let mut kb = 0.0f64;
                for &(i, j) in &nodes {
                    let z = g.node(i, j);
                    let r = z[0].hypot(z[1]);
                    if r >= 0.5 * l2 {
                        kb = kb.max((cp * w.at(i, j) - dh.at(i, j)).abs() * (1.0 + r).powf(-ew));
                    }
                }
                tail_bound(p, m, l2, t2 - t1, ew, ev, cf, cg, kb)
            }
            Some(_) => 0.0,
            None => f64::INFINITY,
        };
        let rel = opts.rel_tol;
        let bulk_tol = rel * tt1_abs + tail;
        let ray_tol = rel * (tt4.abs() + tt5.abs()) + tail;
        let total_tol = rel * (tt1_abs + tt2.abs() + tt3.abs() + tt4.abs() + tt5.abs()) + tail;
        let root = |x: f64| (x > 0.0).then(|| m * x.powf(1.0 / (p + 1.0)));
        let q = p + 1.0;
        rungs.push(SectorRung {
            p,
            t: [tt1, tt2, tt3, tt4, tt5],
            total,
            tail,
            bulk_tol,
            ray_tol,
            total_tol,
            root_bulk: root(tt1),
            root_outer_arc: root(q * tt2),
            root_inner_arc: root(q * tt3),
            root_ray2: root(q * tt4),
            root_ray1: root(q * tt5),
            relative_gap: if tt4 + tt5 != 0.0 { (tt4 - tt5) / (tt4 + tt5) } else { 0.0 },
            bulk_positive: tt1 > bulk_tol,
            ray_gap_positive: tt4 - tt5 > ray_tol,
            total_positive: total > total_tol,
        });
    }

    let decisive = &rungs[rungs.len().saturating_sub(2)..];
    let holds = decisive
        .iter()
        .all(|r| r.bulk_positive && r.ray_gap_positive && r.total_positive);
    let trend = decisive.len() < 2 || decisive[1].relative_gap >= decisive[0].relative_gap - 1e-12;
    let established = holds && trend;

    let mut tr = Traces::default();
    tr.put("sector", spec);
    tr.put("l2_used", l2);
    tr.put("truncated", spec.l2.is_none());
    tr.put("scale", m);
    tr.put("ray_sup", serde_json::json!({ "theta1": sup1, "theta2": sup2 }));
    tr.put(
        "arc_sup",
        serde_json::json!({ "outer": outer.sup(), "inner": inner.as_ref().map(|a| a.sup()) }),
    );
    tr.put("rungs", &rungs);
    tr.put("decisive_rungs", decisive.iter().map(|r| r.p).collect::<Vec<_>>());
    tr.put("trend_consistent", trend);
    tr.put("mechanism_established", established);

    let others_fail = hyps.iter().any(|h| !h.pass && h.name != "ray-sup-ordering");
    let verdict = if others_fail || ordering == Ordering::Reversed {
        Verdict::HypothesesNotMet
    } else if ordering == Ordering::Tie {
        Verdict::Inconclusive
    } else if established {
        Verdict::ContradictionFound
    } else {
        Verdict::Inconclusive
    };
    Ok(CertificateReport::with_verdict(PropositionId::NoSectorMaximum, verdict, hyps, tr))
}
