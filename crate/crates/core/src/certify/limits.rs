//! Limits of the scaled families that are ruled out by homogeneity or parity.
//!
//! In the first family the swirl limit is homogeneous of degree `α/(1−α)`,
//! which is negative for `α < 0`: either it blows up at the origin or it is
//! bounded and hence zero. When the swirl drops out instead, the limit is a
//! planar Euler flow whose vertical component is a constant `c`; a declared
//! odd `V³` forces `c = 0`.

use serde::{Deserialize, Serialize};

use super::{parity_check, sample, sampling_grid, CertificateReport, CertifyError, HypothesisCheck, PropositionId, Traces, Verdict, Witness};
use crate::field::Grid2D;
use crate::profile::{homogeneity_check, names, HomogeneityOptions, HomogeneityVerdict, Parity, SelfSimilarAnsatz, NONTRIVIAL_TOL};

pub fn homogeneous_swirl_test(
    ansatz: &SelfSimilarAnsatz,
    grid: Option<&Grid2D>,
    opts: &HomogeneityOptions,
) -> Result<CertificateReport, CertifyError> {
    let alpha = ansatz.alpha;
    let g = sampling_grid(ansatz, &[names::THETA], grid)?;
    let theta = sample(ansatz, names::THETA, &g)?;
    let degree = alpha / (1.0 - alpha);
    let rep = homogeneity_check(&theta, degree, opts)?;

    let mut hyps = vec![HypothesisCheck::from_witness(
        "alpha-negative",
        (alpha >= 0.0).then_some(Witness::Comparison { lhs: alpha, rhs: 0.0 }),
    )];
    let sup = theta.sup_norm();
    hyps.push(HypothesisCheck::from_witness(
        "nontrivial",
        (rep.verdict == HomogeneityVerdict::Trivial).then_some(Witness::Comparison {
            lhs: sup,
            rhs: NONTRIVIAL_TOL,
        }),
    ));
    let defect = Witness::Comparison {
        lhs: rep.relative_defect,
        rhs: opts.rel_tol,
    };
    hyps.push(match rep.verdict {
        HomogeneityVerdict::HomogeneityRejected => HypothesisCheck::failed("homogeneous", defect),
        _ => HypothesisCheck::passed("homogeneous", Some(defect)),
    });
    let established = matches!(
        rep.verdict,
        HomogeneityVerdict::HomogeneousSingular | HomogeneityVerdict::Inconsistent
    );
    let mut traces = Traces::default();
    traces.put("degree", degree);
    traces.put("homogeneity", &rep);
    traces.put("mechanism_established", established);
    Ok(CertificateReport::assemble(PropositionId::HomogeneousSwirlLimit, hyps, established, traces))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlanarEulerOptions {
    /// Sampling grid for an analytic `V³`.
    pub grid: Option<Grid2D>,
    /// Reflection tolerance relative to `max(1, ‖V³‖∞)`.
    pub parity_tol: f64,
}

impl Default for PlanarEulerOptions {
    fn default() -> Self {
        Self {
            grid: None,
            parity_tol: 1e-8,
        }
    }
}

pub fn planar_euler_limit_test(
    ansatz: &SelfSimilarAnsatz,
    opts: &PlanarEulerOptions,
) -> Result<CertificateReport, CertifyError> {
    let g = sampling_grid(ansatz, &[names::V3], opts.grid.as_ref())?;
    let v3 = sample(ansatz, names::V3, &g)?;
    let sup = v3.sup_norm();
    let declared = ansatz.parities.get(names::V3).is_some_and(|p| p[1] == Parity::Odd);
    let hyps = vec![
        HypothesisCheck::from_witness(
            "v3-declared-odd",
            (!declared).then(|| Witness::note("v3 is not declared odd in z2")),
        ),
        parity_check("v3-odd", &v3, 2, Parity::Odd, opts.parity_tol * sup.max(1.0)),
        HypothesisCheck::from_witness(
            "nontrivial",
            (sup <= NONTRIVIAL_TOL).then_some(Witness::Comparison {
                lhs: sup,
                rhs: NONTRIVIAL_TOL,
            }),
        ),
    ];
    let mean = v3.values().iter().sum::<f64>() / v3.values().len() as f64;
    let mut traces = Traces::default();
    traces.put("limit_constant", mean);
    traces.put("spread", v3.max() - v3.min());
    traces.put("mechanism_established", true);
    let r = CertificateReport::assemble(PropositionId::PlanarEulerLimit, hyps, true, traces);
    debug_assert!(r.verdict != Verdict::Inconclusive);
    Ok(r)
}
