//! Non-crossing of the curve where `∂₁W` vanishes.
//!
//! On `{∂₁W ≠ 0}` the vorticity equation makes `W` (after dividing out the
//! forcing) constant along the backward flow of
//!
//! ```text
//! F = (V¹ + ∂₁H²/∂₁W + (1−α)z¹,  V² + (1−α)z²)
//! ```
//!
//! The forcing ratio blows up across the curve `L = {∂₁W = 0}` with the sign
//! that pushes flow lines away from it, so lines seeded off the curve never
//! reach it. Lines that run into the axes or last the whole parameter range
//! carry `W` to where it vanishes, contradicting a nontrivial profile.

use serde::{Deserialize, Serialize};

use super::{
    decay_check, parity_check, sample, sample_d1, sampling_grid, trace_flow, worst_violation,
    CertificateReport, CertifyError, FlowLine, HypothesisCheck, PropositionId, StepCheck, Termination,
    Traces, Witness,
};
use crate::field::Grid2D;
use crate::profile::{names, Parity, Profile, SelfSimilarAnsatz, NONTRIVIAL_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SingularOptions {
    /// Sampling grid for analytic profiles.
    pub grid: Option<Grid2D>,
    /// Seed lattice `(columns, rows)` in `[0, Z] × [0, l₀)`.
    pub seeds: (usize, usize),
    /// Backward range of the self-similar time.
    pub tau_limit: f64,
    pub step: f64,
    pub max_halvings: u32,
    /// Offset of the collar points from the curve, in units of `h₁`.
    pub collar_fraction: f64,
    pub collar_points: usize,
    /// Reflection tolerance; `None` picks 1e-10 for analytic and 1e-6 for
    /// gridded data, relative to the sup norm.
    pub parity_tol: Option<f64>,
    /// `|V²| ≤ base_tol·‖V²‖∞` on the base.
    pub base_tol: f64,
    /// Allowed growth of the decay-scaled maximum between radial shells.
    pub growth_factor: f64,
    /// Polyline points kept per flow line in the traces.
    pub trace_points: usize,
}

impl Default for SingularOptions {
    fn default() -> Self {
        Self {
            grid: None,
            seeds: (8, 5),
            tau_limit: 12.0,
            step: 0.02,
            max_halvings: 30,
            collar_fraction: 0.05,
            collar_points: 10,
            parity_tol: None,
            base_tol: 1e-10,
            growth_factor: 2.0,
            trace_points: 100,
        }
    }
}

/// Sign changes of `∂₁W` along one row, each refined by bisection.
fn row_crossings(p: &Profile, z2: f64, z1s: &[f64]) -> Vec<(usize, f64)> {
    let d1 = |z1: f64| p.grad([z1, z2])[0];
    let vals: Vec<f64> = z1s.iter().map(|&a| d1(a)).collect();
    let mut out = Vec::new();
    for k in 0..z1s.len().saturating_sub(1) {
        let (a, b) = (vals[k], vals[k + 1]);
        if b == 0.0 {
            out.push((k, z1s[k + 1]));
            continue;
        }
        if a == 0.0 {
            // A zero at an inner node was counted with the previous interval.
            if k == 0 {
                out.push((0, z1s[0]));
            }
            continue;
        }
        if a * b > 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (z1s[k], z1s[k + 1]);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if d1(mid) * a > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push((k, 0.5 * (lo + hi)));
    }
    out
}

/// Piecewise-linear curve `z¹ = L(z²)` through rows that carry a crossing.
struct Curve {
    pts: Vec<(f64, f64)>,
}

impl Curve {
    fn at(&self, z2: f64) -> Option<f64> {
        let k = self.pts.windows(2).position(|w| z2 >= w[0].0 && z2 <= w[1].0)?;
        let ((a, la), (b, lb)) = (self.pts[k], self.pts[k + 1]);
        Some(la + (lb - la) * (z2 - a) / (b - a))
    }

    fn side(&self, z: [f64; 2]) -> f64 {
        self.at(z[1]).map_or(0.0, |l| (z[0] - l).signum())
    }
}

#[derive(Serialize)]
struct CollarPoint {
    z2: f64,
    curve: f64,
    left: f64,
    right: f64,
}

#[derive(Serialize)]
struct SeedSummary {
    seed: [f64; 2],
    end: [f64; 2],
    termination: Termination,
    samples: usize,
    w_seed: f64,
}

fn thin(line: &FlowLine, keep: usize) -> Vec<[f64; 2]> {
    let n = line.z.len();
    if n <= keep || keep < 2 {
        return line.z.clone();
    }
    let mut out: Vec<[f64; 2]> = (0..keep - 1).map(|k| line.z[k * (n - 1) / (keep - 1)]).collect();
    out.push(line.end());
    out
}

pub fn singular_flowline_test(
    ansatz: &SelfSimilarAnsatz,
    l0: f64,
    opts: &SingularOptions,
) -> Result<CertificateReport, CertifyError> {
    let alpha = ansatz.alpha;
    let has_h = ansatz.profiles.contains_key(names::H);
    let used = [names::V1, names::V2, names::W, names::H2];
    let g = sampling_grid(ansatz, &used, opts.grid.as_ref())?;
    let eps = 1e-9 * g.h1().min(g.h2());
    if !(l0 > 0.0 && l0.is_finite()) || g.min2() > eps || l0 > g.max2() + eps || g.min1() > eps || l0 > g.max1() + eps {
        return Err(CertifyError::InvalidSpec(format!(
            "strip [0, {l0}] x [0, {l0}] is not contained in the grid"
        )));
    }
    if opts.seeds.0 == 0 || opts.seeds.1 == 0 || !(opts.step > 0.0 && opts.tau_limit > 0.0) {
        return Err(CertifyError::InvalidSpec("seed lattice, step and tau_limit must be positive".into()));
    }

    let w = sample(ansatz, names::W, &g)?;
    let v1 = sample(ansatz, names::V1, &g)?;
    let v2 = sample(ansatz, names::V2, &g)?;
    let h2 = sample(ansatz, names::H2, &g)?;
    let dw = sample_d1(ansatz, names::W, &g)?;
    let dh = sample_d1(ansatz, names::H2, &g)?;
    let pw = ansatz.profile(names::W)?;
    let ph2 = ansatz.profile(names::H2)?;
    let (pv1, pv2) = (ansatz.profile(names::V1)?, ansatz.profile(names::V2)?);

    let gridded = used.iter().any(|n| ansatz.profiles[*n].is_gridded());
    let rel = opts.parity_tol.unwrap_or(if gridded { 1e-6 } else { 1e-10 });
    let ptol = |f: &crate::field::ScalarField2D| rel * f.sup_norm().max(1.0);

    let mut hyps = Vec::new();
    let w_sup = w.sup_norm();
    hyps.push(HypothesisCheck::from_witness(
        "nontrivial",
        (w_sup <= NONTRIVIAL_TOL).then_some(Witness::Comparison {
            lhs: w_sup,
            rhs: NONTRIVIAL_TOL,
        }),
    ));
    hyps.push(parity_check("v1-odd", &v1, 1, Parity::Odd, ptol(&v1)));
    hyps.push(parity_check("v2-even", &v2, 1, Parity::Even, ptol(&v2)));
    if has_h {
        let h = sample(ansatz, names::H, &g)?;
        hyps.push(parity_check("h-odd", &h, 1, Parity::Odd, ptol(&h)));
    } else {
        hyps.push(parity_check("h2-even", &h2, 1, Parity::Even, ptol(&h2)));
    }
    hyps.push(parity_check("w-odd", &w, 1, Parity::Odd, ptol(&w)));

    let base_row = (0..g.n2()).find(|&j| g.z2(j).abs() <= eps);
    hyps.push(match base_row {
        None => HypothesisCheck::failed("v2-zero-on-base", Witness::note("grid has no row at z2 = 0")),
        Some(j) => {
            let tol = opts.base_tol * v2.sup_norm();
            let nodes: Vec<_> = (0..g.n1()).map(|i| (i, j)).collect();
            HypothesisCheck::from_witness(
                "v2-zero-on-base",
                worst_violation(&v2, &nodes, |v| v.abs() <= tol, f64::abs),
            )
        }
    });
    let strip_rows: Vec<usize> = (0..g.n2()).filter(|&j| g.z2(j) >= -eps && g.z2(j) <= l0 + eps).collect();
    let outer_cols: Vec<(usize, usize)> = strip_rows.iter().flat_map(|&j| [(0, j), (g.n1() - 1, j)]).collect();
    hyps.push(HypothesisCheck::from_witness(
        "h2-positive-far",
        worst_violation(&h2, &outer_cols, |v| v > 0.0, |v| -v),
    ));
    let top = (0..g.n1())
        .filter(|&i| g.z1(i) >= -eps)
        .map(|i| {
            let z = [g.z1(i), l0];
            (z, pv2.eval(z))
        })
        .filter(|&(_, v)| v < 0.0)
        .min_by(|a, b| a.1.total_cmp(&b.1));
    hyps.push(HypothesisCheck::from_witness(
        "v2-nonnegative-top",
        top.map(|(z, value)| Witness::Point { z, value }),
    ));

    // The curve: at most one crossing, from + to −, per strip row.
    let strip_cols: Vec<usize> = (0..g.n1()).filter(|&i| g.z1(i) >= -eps && g.z1(i) <= l0 + eps).collect();
    let strip_z1: Vec<f64> = strip_cols.iter().map(|&i| g.z1(i)).collect();
    let mut curve_pts = Vec::new();
    let mut brackets = Vec::new();
    let mut bad_row = None;
    for &j in &strip_rows {
        let z2 = g.z2(j);
        let cr = row_crossings(pw, z2, &strip_z1);
        let downward = cr
            .first()
            .is_some_and(|&(k, _)| pw.grad([strip_z1[k], z2])[0] > 0.0 || pw.grad([strip_z1[k + 1], z2])[0] < 0.0);
        if cr.len() > 1 || (cr.len() == 1 && !downward) {
            bad_row.get_or_insert(Witness::Row {
                row: j,
                z2,
                crossings: cr.iter().map(|c| c.1).collect(),
            });
            continue;
        }
        if let Some(&(k, l)) = cr.first() {
            curve_pts.push((z2, l));
            let i = strip_cols[k];
            for ii in i.saturating_sub(1)..=(i + 2).min(g.n1() - 1) {
                brackets.push((ii, j));
            }
        }
    }
    hyps.push(HypothesisCheck::from_witness("single-curve", bad_row));
    hyps.push(HypothesisCheck::from_witness(
        "d1h2-nonnegative-near-curve",
        worst_violation(&dh, &brackets, |v| v >= 0.0, |v| -v),
    ));
    let curve = Curve { pts: curve_pts };

    // Sub-linear forcing ratio away from the curve.
    let half_cols: Vec<usize> = (0..g.n1()).filter(|&i| g.z1(i) >= -eps).collect();
    let half_z1: Vec<f64> = half_cols.iter().map(|&i| g.z1(i)).collect();
    let mut excluded = Vec::new();
    for j in (0..g.n2()).filter(|&j| g.z2(j) >= -eps) {
        for (k, _) in row_crossings(pw, g.z2(j), &half_z1) {
            excluded.push((half_cols[k], j));
        }
    }
    let near = |i: usize, j: usize| excluded.iter().any(|&(a, b)| b == j && a.abs_diff(i) <= 2);
    let upper: Vec<(usize, usize)> = g
        .nodes()
        .filter(|&(i, j, z)| z[0] >= -eps && z[1] >= -eps && dw.at(i, j) != 0.0 && !near(i, j))
        .map(|(i, j, _)| (i, j))
        .collect();
    let ratio = dh.zip_with(&dw, |h, d| if d == 0.0 { 0.0 } else { (h / d).abs() })?;
    let mut lin = ansatz.clone();
    lin.decay_exponents.insert("forcing-ratio".into(), 1.0);
    hyps.push(decay_check("forcing-ratio-sublinear", &[("forcing-ratio", &ratio)], &lin, &upper, 1.0));
    let hname = if has_h { names::H } else { names::H2 };
    let hfield = if has_h { sample(ansatz, names::H, &g)? } else { h2.clone() };
    let upper_all: Vec<(usize, usize)> = g
        .nodes()
        .filter(|&(_, _, z)| z[0] >= -eps && z[1] >= -eps)
        .map(|(i, j, _)| (i, j))
        .collect();
    hyps.push(decay_check(
        "decay",
        &[(names::V1, &v1), (names::V2, &v2), (hname, &hfield)],
        ansatz,
        &upper_all,
        opts.growth_factor,
    ));

    // Collar drift signs.
    let drift = |z: [f64; 2]| {
        let d = pw.grad(z)[0];
        let f1 = pv1.eval(z) + ph2.grad(z)[0] / d + (1.0 - alpha) * z[0];
        [f1, pv2.eval(z) + (1.0 - alpha) * z[1]]
    };
    let delta = opts.collar_fraction * g.h1();
    let mut collar = Vec::new();
    if let (Some(&(a, _)), Some(&(b, _))) = (curve.pts.first(), curve.pts.last()) {
        for k in 0..opts.collar_points {
            let z2 = a + (b - a) * (k as f64 + 0.5) / opts.collar_points as f64;
            let guess = curve.at(z2).unwrap_or(curve.pts[0].1);
            let span: Vec<f64> = (0..=8).map(|s| guess - 2.0 * g.h1() + 0.5 * g.h1() * s as f64).collect();
            let l = row_crossings(pw, z2, &span).first().map_or(guess, |c| c.1);
            collar.push(CollarPoint {
                z2,
                curve: l,
                left: drift([l - delta, z2])[0],
                right: drift([l + delta, z2])[0],
            });
        }
    }
    let collar_ok = collar.iter().all(|c| c.left > 0.0 && c.right < 0.0);

    // Backward flow lines from the seed lattice.
    let zmax = l0.min(g.max1());
    let (ns1, ns2) = opts.seeds;
    let carried = |z: [f64; 2]| (pw.eval(z), Some(ph2.eval(z)));
    let max_move = 0.5 * g.h1().min(g.h2());
    let mut lines = Vec::new();
    for a in 0..ns1 {
        for b in 0..ns2 {
            let seed = [zmax * (a + 1) as f64 / (ns1 + 1) as f64, l0 * b as f64 / ns2 as f64];
            if curve.at(seed[1]).is_some_and(|l| (seed[0] - l).abs() < 2.0 * delta.max(eps)) {
                continue;
            }
            let mut check = |from: [f64; 2], to: [f64; 2]| {
                if to[0] <= 0.0 {
                    return StepCheck::Stop(Termination::ReachedBoundary);
                }
                if to[1] < -eps || to[0] > zmax || to[1] > l0 + eps {
                    return StepCheck::Stop(Termination::LeftWindow);
                }
                let (sa, sb) = (curve.side(from), curve.side(to));
                if (sa != 0.0 && sb != 0.0 && sa != sb) || (to[0] - from[0]).hypot(to[1] - from[1]) > max_move {
                    return StepCheck::Refine;
                }
                StepCheck::Accept
            };
            let line = trace_flow(&drift, &carried, seed, -opts.step, -opts.tau_limit, opts.max_halvings, &mut check);
            lines.push(line);
        }
    }
    let closes = |t: Termination| matches!(t, Termination::ReachedBoundary | Termination::ParameterLimit);
    let all_close = !lines.is_empty() && lines.iter().all(|l| closes(l.termination));
    let established = collar_ok && all_close;

    let mut traces = Traces::default();
    traces.put("l0", l0);
    traces.put("curve", &curve.pts);
    traces.put("collar", &collar);
    traces.put("collar_ok", collar_ok);
    traces.put(
        "seeds",
        lines
            .iter()
            .map(|l| SeedSummary {
                seed: l.seed(),
                end: l.end(),
                termination: l.termination,
                samples: l.z.len(),
                w_seed: l.w[0],
            })
            .collect::<Vec<_>>(),
    );
    traces.put("flow_lines", lines.iter().map(|l| thin(l, opts.trace_points)).collect::<Vec<_>>());
    if let Some(l) = lines.iter().find(|l| !closes(l.termination)) {
        traces.put(
            "open_line",
            Witness::FlowLine {
                seed: l.seed(),
                end: l.end(),
                termination: l.termination,
                samples: l.z.len(),
            },
        );
    }
    traces.put("mechanism_established", established);
    Ok(CertificateReport::assemble(PropositionId::SingularFlowNonCrossing, hyps, established, traces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::Verdict;

    fn damped(z: [f64; 2]) -> f64 {
        (1.0 + z[0] * z[0] + z[1] * z[1]).sqrt()
    }

    fn plant(w: fn([f64; 2]) -> f64, h2: fn([f64; 2]) -> f64) -> (SelfSimilarAnsatz, SingularOptions) {
        let a = SelfSimilarAnsatz::new(-2.0, 1.5, 1.0)
            .unwrap()
            .with_profile(names::W, Profile::analytic(w))
            .with_profile(names::H2, Profile::analytic(h2))
            .with_profile(names::V1, Profile::analytic(|z| -0.3 * z[0] / damped(z)))
            .with_profile(names::V2, Profile::analytic(|z| 0.3 * z[1] / damped(z)))
            .with_decay(names::V1, 2.0 / 3.0)
            .with_decay(names::V2, 2.0 / 3.0)
            .with_decay(names::H2, 1.0 / 3.0);
        let opts = SingularOptions {
            grid: Some(Grid2D::new((-6.0, 6.0), (0.0, 6.0), 121, 61).unwrap()),
            ..Default::default()
        };
        (a, opts)
    }

    fn q(z2: f64) -> f64 {
        1.0 / (1.0 + z2 * z2)
    }

    #[test]
    fn monotone_profile_closes_every_line() {
        let (a, o) = plant(|z| z[0].tanh() * q(z[1]), |z| 0.5 * z[0].tanh().powi(2) * q(z[1]));
        let r = singular_flowline_test(&a, 3.0, &o).unwrap();
        assert_eq!(r.verdict, Verdict::ContradictionFound, "{:#?}", r.hypotheses);
        assert_eq!(r.traces["curve"].as_array().unwrap().len(), 0);
        assert_eq!(r.traces["seeds"].as_array().unwrap().len(), 40);
    }

    #[test]
    fn collar_repels_from_planted_curve() {
        let (a, o) = plant(
            |z| z[0] * (-0.5 * z[0] * z[0]).exp() * q(z[1]),
            |z| 0.5 * (1.0 - (-z[0] * z[0]).exp()) * q(z[1]),
        );
        let r = singular_flowline_test(&a, 3.0, &o).unwrap();
        assert_eq!(r.verdict, Verdict::ContradictionFound, "{:#?}", r.hypotheses);
        let collar = r.traces["collar"].as_array().unwrap();
        assert_eq!(collar.len(), 10);
        for c in collar {
            assert!((c["curve"].as_f64().unwrap() - 1.0).abs() < 1e-6);
            assert!(c["left"].as_f64().unwrap() > 0.0 && c["right"].as_f64().unwrap() < 0.0);
        }
        // The lattice column at z1 = 1 sits on the curve and is skipped.
        assert_eq!(r.traces["seeds"].as_array().unwrap().len(), 35);
    }

    #[test]
    fn wrong_forcing_sign_fails() {
        let (a, o) = plant(
            |z| z[0] * (-0.5 * z[0] * z[0]).exp() * q(z[1]),
            |z| 0.5 * (1.0 + (-z[0] * z[0]).exp()) * q(z[1]),
        );
        let r = singular_flowline_test(&a, 3.0, &o).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesesNotMet);
        assert!(!r.hypothesis("d1h2-nonnegative-near-curve").unwrap().pass);
    }

    #[test]
    fn several_crossings_name_a_row() {
        let (a, o) = plant(
            |z| (3.0 * z[0]).sin() * (-z[0] * z[0] / 8.0).exp() * q(z[1]),
            |z| 0.5 * z[0].tanh().powi(2) * q(z[1]),
        );
        let r = singular_flowline_test(&a, 3.0, &o).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesesNotMet);
        let h = r.hypothesis("single-curve").unwrap();
        assert!(matches!(&h.witness, Some(Witness::Row { crossings, .. }) if crossings.len() > 1));
    }

    #[test]
    fn strip_outside_grid_is_rejected() {
        let (a, o) = plant(|z| z[0].tanh(), |z| z[0].tanh().powi(2));
        assert!(matches!(singular_flowline_test(&a, 9.0, &o), Err(CertifyError::InvalidSpec(_))));
    }
}
