//! Sign of `W` on and above the base `z² = 0`.
//!
//! On the base the profile equations reduce to a linear ODE along
//! `a = V¹ + (1−α)z¹ > 0`, whose solution keeps the sign of `W` once `H²` is
//! positive and non-decreasing. A zero of `W` on the base, or a negative value
//! in the open quadrant reached backward from the axes, contradicts that.

use serde::{Deserialize, Serialize};

use super::{
    sample, sample_d1, sampling_grid, trace_flow, worst_violation, CertificateReport, CertifyError,
    HypothesisCheck, PropositionId, StepCheck, Termination, Traces, Witness,
};
use crate::field::Grid2D;
use crate::profile::{names, Profile, SelfSimilarAnsatz};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaseSignOptions {
    /// Sampling grid for analytic profiles.
    pub grid: Option<Grid2D>,
    /// `|W| ≤ zero_tol` counts as an exact zero.
    pub zero_tol: f64,
    /// Base nodes with `z¹ ≤ origin_margin` are ignored.
    pub origin_margin: f64,
    /// Added to local node indices in the traces, matching file labels.
    pub offset: (usize, usize),
    /// Negative nodes listed in the traces.
    pub max_listed: usize,
    /// Flow step as a fraction of the smaller spacing over the drift speed.
    pub step_fraction: f64,
    pub max_steps: usize,
}

impl Default for BaseSignOptions {
    fn default() -> Self {
        Self {
            grid: None,
            zero_tol: 0.0,
            origin_margin: 0.0,
            offset: (0, 0),
            max_listed: 20,
            step_fraction: 0.25,
            max_steps: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ZeroKind {
    Exact,
    SignChange,
}

#[derive(Serialize)]
struct BaseZero {
    node: (usize, usize),
    z1: f64,
    kind: ZeroKind,
}

#[derive(Serialize)]
struct NegativeNode {
    node: (usize, usize),
    z: [f64; 2],
    value: f64,
}

pub fn base_sign_tests(ansatz: &SelfSimilarAnsatz, opts: &BaseSignOptions) -> Result<CertificateReport, CertifyError> {
    let alpha = ansatz.alpha;
    let used = [names::V1, names::W, names::H2];
    let g = sampling_grid(ansatz, &used, opts.grid.as_ref())?;
    let eps = 1e-9 * g.h1().min(g.h2());
    let w = sample(ansatz, names::W, &g)?;
    let v1 = sample(ansatz, names::V1, &g)?;
    let h2 = sample(ansatz, names::H2, &g)?;
    let dh = sample_d1(ansatz, names::H2, &g)?;
    let label = |(i, j): (usize, usize)| (i + opts.offset.0, j + opts.offset.1);

    let mut hyps = Vec::new();
    let base_row = (0..g.n2()).find(|&j| g.z2(j).abs() <= eps);
    let base: Vec<(usize, usize)> = match base_row {
        Some(j) => (0..g.n1()).filter(|&i| g.z1(i) > opts.origin_margin.max(eps)).map(|i| (i, j)).collect(),
        None => Vec::new(),
    };
    hyps.push(HypothesisCheck::from_witness(
        "base-row-present",
        base.is_empty().then(|| Witness::note("grid has no base nodes with z1 > 0")),
    ));
    let drift1 = crate::field::ScalarField2D::new(
        g,
        g.nodes().map(|(i, j, z)| v1.at(i, j) + (1.0 - alpha) * z[0]).collect(),
    )?;
    hyps.push(HypothesisCheck::from_witness(
        "drift1-positive-on-base",
        worst_violation(&drift1, &base, |v| v > 0.0, |v| -v),
    ));
    hyps.push(HypothesisCheck::from_witness(
        "d1h2-nonnegative-on-base",
        worst_violation(&dh, &base, |v| v >= 0.0, |v| -v),
    ));
    hyps.push(HypothesisCheck::from_witness(
        "h2-positive-on-base",
        worst_violation(&h2, &base, |v| v > 0.0, |v| -v),
    ));

    let mut zeros = Vec::new();
    for (k, &(i, j)) in base.iter().enumerate() {
        let a = w.at(i, j);
        if a.abs() <= opts.zero_tol {
            zeros.push(BaseZero {
                node: label((i, j)),
                z1: g.z1(i),
                kind: ZeroKind::Exact,
            });
        } else if let Some(&(pi, pj)) = k.checked_sub(1).map(|p| &base[p]) {
            let b = w.at(pi, pj);
            if b.abs() > opts.zero_tol && a.signum() != b.signum() {
                let (za, zb) = (g.z1(pi), g.z1(i));
                zeros.push(BaseZero {
                    node: label((i, j)),
                    z1: za + (zb - za) * b / (b - a),
                    kind: ZeroKind::SignChange,
                });
            }
        }
    }

    let mut negative: Vec<NegativeNode> = g
        .nodes()
        .filter(|&(i, j, z)| z[0] > eps && z[1] > eps && w.at(i, j) < -opts.zero_tol)
        .map(|(i, j, z)| NegativeNode {
            node: (i, j),
            z,
            value: w.at(i, j),
        })
        .collect();
    negative.sort_by(|a, b| a.value.total_cmp(&b.value));
    let negative_count = negative.len();

    let mut traces = Traces::default();
    if let Some(first) = negative.first() {
        let (pw, pv1) = (ansatz.profile(names::W)?, ansatz.profile(names::V1)?);
        let pv2 = ansatz.profiles.get(names::V2).cloned().unwrap_or_else(Profile::zero);
        let drift = |z: [f64; 2]| [pv1.eval(z) + (1.0 - alpha) * z[0], pv2.eval(z) + (1.0 - alpha) * z[1]];
        let speed = {
            let d = drift(first.z);
            d[0].hypot(d[1]).max(f64::MIN_POSITIVE)
        };
        let step = -opts.step_fraction * g.h1().min(g.h2()) / speed;
        // The lower-left edge of the data stands in for the axes.
        let (e1, e2) = (g.min1().max(0.0), g.min2().max(0.0));
        let mut check = |_: [f64; 2], to: [f64; 2]| {
            if to[0] <= e1 || to[1] <= e2 {
                StepCheck::Stop(Termination::ReachedBoundary)
            } else if !g.contains(to) {
                StepCheck::Stop(Termination::LeftWindow)
            } else {
                StepCheck::Accept
            }
        };
        let line = trace_flow(
            &drift,
            &|z| (pw.eval(z), None),
            first.z,
            step,
            step * opts.max_steps as f64,
            0,
            &mut check,
        );
        traces.put(
            "negative_flow_line",
            Witness::FlowLine {
                seed: line.seed(),
                end: line.end(),
                termination: line.termination,
                samples: line.z.len(),
            },
        );
        traces.put("negative_flow_w", &line.w);
    }
    for n in &mut negative {
        n.node = label(n.node);
    }
    negative.truncate(opts.max_listed);
    let found = !zeros.is_empty() || negative_count > 0;
    traces.put("base_zeros", &zeros);
    traces.put("negative_count", negative_count);
    traces.put("negative_nodes", &negative);
    traces.put("mechanism_established", found);
    let mut r = CertificateReport::assemble(PropositionId::BaseSign, hyps, found, traces);
    r.relabel(opts.offset);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::Verdict;
    use crate::field::ScalarField2D;
    use crate::profile::{base_ode_solve, BaseOdeSpec};

    fn from_base(alpha: f64, c: f64, w0: f64) -> SelfSimilarAnsatz {
        let spec = BaseOdeSpec {
            alpha,
            c,
            w0: Some(w0),
            z_range: (0.5, 10.5),
            steps: 200,
        };
        let s = base_ode_solve(&|_| 0.0, &spec).unwrap();
        let g = Grid2D::new((0.5, 10.5), (0.0, 2.0), 201, 21).unwrap();
        let lift = |f: &[f64]| {
            let vals = g.nodes().map(|(i, _, p)| f[i] * (-p[1]).exp()).collect();
            ScalarField2D::new(g, vals).unwrap()
        };
        SelfSimilarAnsatz::new(alpha, 1.5, 1.0)
            .unwrap()
            .with_profile(names::W, Profile::Gridded(lift(&s.w_closed)))
            .with_profile(names::H2, Profile::Gridded(lift(&s.h2_closed)))
            .with_profile(names::V1, Profile::zero())
    }

    #[test]
    fn positive_base_solution_has_no_findings() {
        let r = base_sign_tests(&from_base(-2.0, 1.0, 0.5), &BaseSignOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive, "{:#?}", r.hypotheses);
        assert_eq!(r.traces["negative_count"], 0);
    }

    #[test]
    fn base_zero_is_a_contradiction() {
        let r = base_sign_tests(&from_base(-2.0, 1.0, -0.2), &BaseSignOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ContradictionFound, "{:#?}", r.hypotheses);
        let z = r.traces["base_zeros"].as_array().unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0]["kind"], "sign-change");
        let line = &r.traces["negative_flow_line"];
        assert_eq!(line["termination"], "reached-boundary");
    }

    #[test]
    fn decreasing_forcing_fails() {
        let a = SelfSimilarAnsatz::new(-2.0, 1.5, 1.0)
            .unwrap()
            .with_profile(names::W, Profile::analytic(|z| 1.0 / (1.0 + z[0] + z[1])))
            .with_profile(names::H2, Profile::analytic(|z| 1.0 / (1.0 + z[0])))
            .with_profile(names::V1, Profile::zero());
        let o = BaseSignOptions {
            grid: Some(Grid2D::new((0.0, 4.0), (0.0, 4.0), 41, 41).unwrap()),
            ..Default::default()
        };
        let r = base_sign_tests(&a, &o).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesesNotMet);
        assert!(!r.hypothesis("d1h2-nonnegative-on-base").unwrap().pass);
    }

    #[test]
    fn labels_carry_the_offset() {
        let g = Grid2D::new((0.0, 1.0), (0.0, 1.0), 5, 5).unwrap();
        let w = ScalarField2D::from_fn(g, |a, b| if a > 0.4 && b > 0.4 { -1e-18 } else { 1.0 }).unwrap();
        let a = SelfSimilarAnsatz::new(-2.0, 1.5, 1.0)
            .unwrap()
            .with_profile(names::W, Profile::Gridded(w))
            .with_profile(names::H2, Profile::analytic(|z| 1.0 + z[0]))
            .with_profile(names::V1, Profile::zero());
        let o = BaseSignOptions {
            offset: (1, 700),
            ..Default::default()
        };
        let r = base_sign_tests(&a, &o).unwrap();
        assert_eq!(r.verdict, Verdict::ContradictionFound);
        let n = &r.traces["negative_nodes"][0]["node"];
        assert!(n[0].as_u64().unwrap() >= 3 && n[1].as_u64().unwrap() >= 702);
    }
}
