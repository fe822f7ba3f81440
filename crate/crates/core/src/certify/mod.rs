//! Contradiction certifiers.
//!
//! Each certifier samples a candidate profile, checks the hypotheses of one
//! non-existence argument node by node, then runs the argument's quantitative
//! step (weighted integral identities, backward flow lines, weak-form
//! integrals). A `ContradictionFound` verdict means the checked hypotheses and
//! the computed mechanism cannot hold together at the stated tolerances.

mod base_sign;
mod flowline;
mod limits;
mod rectangle;
mod route;
mod sector;
mod singular;
mod theta;

pub use base_sign::{base_sign_tests, BaseSignOptions};
pub use flowline::{trace_flow, FlowLine, StepCheck, Termination};
pub use limits::{homogeneous_swirl_test, planar_euler_limit_test, PlanarEulerOptions};
pub use rectangle::{
    rectangle_flowline_test, rectangle_screen, MaxLocation, Rectangle, RectangleOptions, RectangleScreen,
};
pub use route::{route_proposition, CertifierKind, Route};
pub use sector::{sector_integral_test, SectorOptions, SectorRung, SectorSpec, DEFAULT_P_LADDER};
pub use singular::{singular_flowline_test, SingularOptions};
pub use theta::{bump_basis, theta_independence_test, BasisBump, ThetaOptions};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Grid2D, ScalarField2D};
use crate::profile::{Parity, ProfileError, SelfSimilarAnsatz};

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropositionId {
    HomogeneousSwirlLimit,
    SwirlIndependence,
    SingularFlowNonCrossing,
    NoSectorMaximum,
    NoRectangleMaximum,
    BaseSign,
    PlanarEulerLimit,
}

impl PropositionId {
    pub fn slug(self) -> &'static str {
        match self {
            Self::HomogeneousSwirlLimit => "homogeneous-swirl-limit",
            Self::SwirlIndependence => "swirl-independence",
            Self::SingularFlowNonCrossing => "singular-flow-non-crossing",
            Self::NoSectorMaximum => "no-sector-maximum",
            Self::NoRectangleMaximum => "no-rectangle-maximum",
            Self::BaseSign => "base-sign",
            Self::PlanarEulerLimit => "planar-euler-limit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ContradictionFound,
    HypothesesNotMet,
    Inconclusive,
}

/// Evidence attached to a hypothesis item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Node {
        node: (usize, usize),
        z: [f64; 2],
        value: f64,
    },
    Point {
        z: [f64; 2],
        value: f64,
    },
    Row {
        row: usize,
        z2: f64,
        crossings: Vec<f64>,
    },
    Rung {
        p: f64,
        value: f64,
    },
    Comparison {
        lhs: f64,
        rhs: f64,
    },
    Basis {
        index: usize,
        center: [f64; 2],
        value: f64,
    },
    FlowLine {
        seed: [f64; 2],
        end: [f64; 2],
        termination: Termination,
        samples: usize,
    },
    Note {
        text: String,
    },
}

impl Witness {
    pub(crate) fn node(f: &ScalarField2D, (i, j): (usize, usize)) -> Self {
        Self::Node {
            node: (i, j),
            z: f.grid().node(i, j),
            value: f.at(i, j),
        }
    }

    pub(crate) fn note(text: impl Into<String>) -> Self {
        Self::Note { text: text.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl HypothesisCheck {
    /// Passes exactly when there is no counter-witness.
    pub fn from_witness(name: &str, counter: Option<Witness>) -> Self {
        Self {
            name: name.to_string(),
            pass: counter.is_none(),
            witness: counter,
        }
    }

    pub fn passed(name: &str, witness: Option<Witness>) -> Self {
        Self {
            name: name.to_string(),
            pass: true,
            witness,
        }
    }

    pub fn failed(name: &str, witness: Witness) -> Self {
        Self {
            name: name.to_string(),
            pass: false,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub proposition: PropositionId,
    pub verdict: Verdict,
    pub hypotheses: Vec<HypothesisCheck>,
    pub traces: BTreeMap<String, serde_json::Value>,
}

impl CertificateReport {
    /// Any failed item gives `HypothesesNotMet`; otherwise the mechanism
    /// decides between a contradiction and no verdict.
    pub(crate) fn assemble(
        proposition: PropositionId,
        hypotheses: Vec<HypothesisCheck>,
        established: bool,
        traces: Traces,
    ) -> Self {
        let verdict = if hypotheses.iter().any(|h| !h.pass) {
            Verdict::HypothesesNotMet
        } else if established {
            Verdict::ContradictionFound
        } else {
            Verdict::Inconclusive
        };
        Self::with_verdict(proposition, verdict, hypotheses, traces)
    }

    pub(crate) fn with_verdict(
        proposition: PropositionId,
        verdict: Verdict,
        hypotheses: Vec<HypothesisCheck>,
        traces: Traces,
    ) -> Self {
        debug_assert!(hypotheses.iter().all(|h| h.pass || h.witness.is_some()));
        debug_assert!(verdict != Verdict::ContradictionFound || hypotheses.iter().all(|h| h.pass));
        Self {
            proposition,
            verdict,
            hypotheses,
            traces: traces.0,
        }
    }

    pub fn hypothesis(&self, name: &str) -> Option<&HypothesisCheck> {
        self.hypotheses.iter().find(|h| h.name == name)
    }

    /// Shifts node witnesses by a mesh offset so they match file labels.
    pub fn relabel(&mut self, offset: (usize, usize)) {
        for h in &mut self.hypotheses {
            if let Some(Witness::Node { node, .. }) = &mut h.witness {
                node.0 += offset.0;
                node.1 += offset.1;
            }
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct Traces(BTreeMap<String, serde_json::Value>);

impl Traces {
    pub(crate) fn put(&mut self, key: &str, v: impl Serialize) {
        let v = serde_json::to_value(v).expect("trace values are plain data");
        self.0.insert(key.to_string(), v);
    }
}

/// Grid on which a certifier samples the named profiles: the grid of the
/// gridded ones, or `fallback` when all are analytic.
pub(crate) fn sampling_grid(
    ansatz: &SelfSimilarAnsatz,
    names: &[&str],
    fallback: Option<&Grid2D>,
) -> Result<Grid2D, CertifyError> {
    let mut found: Option<Grid2D> = None;
    for n in names {
        if let Some(g) = ansatz.profile(n)?.grid() {
            match found {
                Some(f) if &f != g => {
                    return Err(CertifyError::InvalidSpec(format!(
                        "gridded profile '{n}' lives on a different grid"
                    )))
                }
                _ => found = Some(*g),
            }
        }
    }
    found.or(fallback.copied()).ok_or_else(|| {
        CertifyError::InvalidSpec("analytic profiles need a sampling grid".into())
    })
}

pub(crate) fn sample(ansatz: &SelfSimilarAnsatz, name: &str, g: &Grid2D) -> Result<ScalarField2D, CertifyError> {
    Ok(ansatz.profile(name)?.sample(g)?)
}

/// `∂₁` of a profile at every node, from [`crate::profile::Profile::grad`].
pub(crate) fn sample_d1(ansatz: &SelfSimilarAnsatz, name: &str, g: &Grid2D) -> Result<ScalarField2D, CertifyError> {
    let p = ansatz.profile(name)?;
    Ok(ScalarField2D::from_fn(*g, |a, b| p.grad([a, b])[0])?)
}

/// Worst node (by `badness`) among `nodes` that violates `ok`.
pub(crate) fn worst_violation(
    f: &ScalarField2D,
    nodes: &[(usize, usize)],
    ok: impl Fn(f64) -> bool,
    badness: impl Fn(f64) -> f64,
) -> Option<Witness> {
    nodes
        .iter()
        .filter(|&&(i, j)| !ok(f.at(i, j)))
        .max_by(|a, b| badness(f.at(a.0, a.1)).total_cmp(&badness(f.at(b.0, b.1))))
        .map(|&n| Witness::node(f, n))
}

/// Largest node of `f` over `nodes` that beats every 8-neighbour also in
/// `nodes` by more than `margin`; the counter-witness names the first
/// neighbour that does not.
pub(crate) fn strict_max(
    f: &ScalarField2D,
    nodes: &[(usize, usize)],
    margin: f64,
) -> Result<(usize, usize), Witness> {
    let Some(&best) = nodes
        .iter()
        .max_by(|a, b| f.at(a.0, a.1).total_cmp(&f.at(b.0, b.1)).then(b.cmp(a)))
    else {
        return Err(Witness::note("no nodes in the region"));
    };
    let m = f.at(best.0, best.1);
    for di in -1isize..=1 {
        for dj in -1isize..=1 {
            if di == 0 && dj == 0 {
                continue;
            }
            let n = (best.0 as isize + di, best.1 as isize + dj);
            if n.0 < 0 || n.1 < 0 {
                continue;
            }
            let n = (n.0 as usize, n.1 as usize);
            if nodes.contains(&n) && f.at(n.0, n.1) >= m - margin {
                return Err(Witness::node(f, n));
            }
        }
    }
    Ok(best)
}

/// Reflection defect of `f` in `z¹` (axis 1) or `z²` (axis 2); `Err` when
/// the grid is not reflection-symmetric.
pub(crate) fn parity_defect(f: &ScalarField2D, axis: usize, parity: Parity) -> Result<(f64, (usize, usize)), String> {
    let g = f.grid();
    let symmetric = if axis == 1 { g.symmetric_in_z1() } else { g.symmetric_in_z2() };
    if !symmetric {
        return Err(format!("grid is not reflection-symmetric in z{axis}"));
    }
    let s = match parity {
        Parity::Odd => 1.0,
        Parity::Even => -1.0,
        Parity::Any => return Ok((0.0, (0, 0))),
    };
    let mut worst = (0.0, (0, 0));
    for (i, j, _) in g.nodes() {
        let (ri, rj) = if axis == 1 { (g.n1() - 1 - i, j) } else { (i, g.n2() - 1 - j) };
        let d = (f.at(i, j) + s * f.at(ri, rj)).abs();
        if d > worst.0 {
            worst = (d, (i, j));
        }
    }
    Ok(worst)
}

pub(crate) fn parity_check(
    name: &str,
    f: &ScalarField2D,
    axis: usize,
    parity: Parity,
    tol: f64,
) -> HypothesisCheck {
    match parity_defect(f, axis, parity) {
        Err(m) => HypothesisCheck::failed(name, Witness::note(m)),
        Ok((d, n)) if d > tol => HypothesisCheck::failed(name, Witness::node(f, n)),
        Ok(_) => HypothesisCheck::passed(name, None),
    }
}

/// Declared growth bound `|u| ≲ (1+|z|)^e` read as: the scaled maximum of
/// `|u|(1+|z|)^{−e}` on the outer shell `[R/2, R]` does not exceed `factor`
/// times that on `[R/4, R/2)`. `R` is the largest radius among `nodes`.
pub(crate) fn decay_check(
    name: &str,
    fields: &[(&str, &ScalarField2D)],
    ansatz: &SelfSimilarAnsatz,
    nodes: &[(usize, usize)],
    factor: f64,
) -> HypothesisCheck {
    let Some(g) = fields.first().map(|f| *f.1.grid()) else {
        return HypothesisCheck::failed(name, Witness::note("no profiles to check"));
    };
    let radius = |i: usize, j: usize| {
        let z = g.node(i, j);
        z[0].hypot(z[1])
    };
    let r_max = nodes.iter().map(|&(i, j)| radius(i, j)).fold(0.0, f64::max);
    for (pname, f) in fields {
        let Some(&e) = ansatz.decay_exponents.get(*pname) else {
            return HypothesisCheck::failed(
                name,
                Witness::note(format!("no decay exponent declared for '{pname}'")),
            );
        };
        let mut inner = 0.0f64;
        let mut outer: (f64, (usize, usize)) = (0.0, (0, 0));
        for &(i, j) in nodes {
            let r = radius(i, j);
            let q = f.at(i, j).abs() * (1.0 + r).powf(-e);
            if r >= 0.5 * r_max {
                if q > outer.0 {
                    outer = (q, (i, j));
                }
            } else if r >= 0.25 * r_max {
                inner = inner.max(q);
            }
        }
        if outer.0 > factor * inner {
            return HypothesisCheck::failed(name, Witness::node(f, outer.1));
        }
    }
    HypothesisCheck::passed(name, None)
}
