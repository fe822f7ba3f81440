//! Strict maxima of `W` on a rectangle against backward flow lines of
//! `V + (1−α)z`.
//!
//! Along `dz/ds = V + (1−α)z` the profile equation reads
//! `dW/ds = ∂₁H² − W`, which is `≤ 0` wherever `W ≥ ∂₁H²`. When both drift
//! components are positive the backward line from a maximum in the interior,
//! or on the upper or right side, enters the rectangle, so `W` could not drop
//! along it; a strict maximum makes it drop.

use serde::{Deserialize, Serialize};

use super::{
    sample, sample_d1, sampling_grid, strict_max, trace_flow, worst_violation, CertificateReport, CertifyError,
    HypothesisCheck, PropositionId, StepCheck, Termination, Traces, Witness,
};
use crate::field::{Grid2D, ScalarField2D};
use crate::profile::{names, Profile, SelfSimilarAnsatz};

/// Axis-aligned rectangle; `P₁` is the lower-left corner, then
/// counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Rectangle {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Result<Self, CertifyError> {
        if !(lo.iter().chain(&hi).all(|v| v.is_finite()) && lo[0] < hi[0] && lo[1] < hi[1]) {
            return Err(CertifyError::InvalidSpec(format!(
                "rectangle corners {lo:?}, {hi:?} are not ordered"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Accepts the four corners in any order.
    pub fn from_corners(p: &[[f64; 2]; 4]) -> Result<Self, CertifyError> {
        let lo = [p.iter().map(|q| q[0]).fold(f64::INFINITY, f64::min), p.iter().map(|q| q[1]).fold(f64::INFINITY, f64::min)];
        let hi = [
            p.iter().map(|q| q[0]).fold(f64::NEG_INFINITY, f64::max),
            p.iter().map(|q| q[1]).fold(f64::NEG_INFINITY, f64::max),
        ];
        let r = Self::new(lo, hi)?;
        for c in [lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]] {
            if !p.contains(&c) {
                return Err(CertifyError::InvalidSpec(format!(
                    "corners {p:?} do not form an axis-aligned rectangle"
                )));
            }
        }
        Ok(r)
    }

    fn eps(&self) -> f64 {
        1e-9 * (self.hi[0] - self.lo[0]).min(self.hi[1] - self.lo[1])
    }

    pub fn contains(&self, z: [f64; 2]) -> bool {
        let e = self.eps();
        (0..2).all(|k| z[k] >= self.lo[k] - e && z[k] <= self.hi[k] + e)
    }

    pub fn locate(&self, z: [f64; 2]) -> MaxLocation {
        let e = self.eps();
        if z[0] <= self.lo[0] + e || z[1] <= self.lo[1] + e {
            MaxLocation::LowerLeftSides
        } else if z[0] >= self.hi[0] - e || z[1] >= self.hi[1] - e {
            MaxLocation::UpperRightSides
        } else {
            MaxLocation::Interior
        }
    }

    fn nodes(&self, g: &Grid2D) -> Vec<(usize, usize)> {
        g.nodes()
            .filter(|&(_, _, z)| self.contains(z))
            .map(|(i, j, _)| (i, j))
            .collect()
    }
}

/// Where a maximum sits. The upper and right sides count without their far
/// ends `P₂`, `P₄`, which belong to the lower and left sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaxLocation {
    Interior,
    UpperRightSides,
    LowerLeftSides,
}

/// Geometry of the maximum of sampled `W` on a rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectangleScreen {
    pub nodes: usize,
    pub max_node: (usize, usize),
    pub z: [f64; 2],
    pub value: f64,
    /// Strict over the 8 neighbours inside the rectangle.
    pub strict: bool,
    pub location: MaxLocation,
    pub qualifies: bool,
    pub counter: Option<Witness>,
}

pub fn rectangle_screen(w: &ScalarField2D, rect: &Rectangle, margin: f64) -> Result<RectangleScreen, CertifyError> {
    let nodes = rect.nodes(w.grid());
    if nodes.len() < 4 {
        return Err(CertifyError::InvalidSpec(format!(
            "rectangle {rect:?} holds {} grid nodes, need at least 4",
            nodes.len()
        )));
    }
    let (best, counter) = match strict_max(w, &nodes, margin) {
        Ok(b) => (b, None),
        Err(c) => {
            let b = *nodes
                .iter()
                .max_by(|a, b| w.at(a.0, a.1).total_cmp(&w.at(b.0, b.1)).then(b.cmp(a)))
                .expect("non-empty");
            (b, Some(c))
        }
    };
    let z = w.grid().node(best.0, best.1);
    let location = rect.locate(z);
    let strict = counter.is_none();
    Ok(RectangleScreen {
        nodes: nodes.len(),
        max_node: best,
        z,
        value: w.at(best.0, best.1),
        strict,
        location,
        qualifies: strict && location != MaxLocation::LowerLeftSides,
        counter,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RectangleOptions {
    pub grid: Option<Grid2D>,
    pub max_margin: f64,
    /// Displacement per step as a fraction of the smaller grid spacing.
    pub step_fraction: f64,
    pub max_steps: usize,
}

impl Default for RectangleOptions {
    fn default() -> Self {
        Self {
            grid: None,
            max_margin: 1e-12,
            step_fraction: 0.25,
            max_steps: 64,
        }
    }
}

/// Projected gradient ascent from the maximal node, so the flow starts at
/// the maximum of the reconstructed profile rather than at a node next to it.
fn refine_max(p: &Profile, rect: &Rectangle, z0: [f64; 2], h: f64) -> [f64; 2] {
    let clamp = |z: [f64; 2]| [z[0].clamp(rect.lo[0], rect.hi[0]), z[1].clamp(rect.lo[1], rect.hi[1])];
    let (mut z, mut f) = (z0, p.eval(z0));
    let mut step = 0.25 * h;
    for _ in 0..400 {
        let d = p.grad(z);
        let n = d[0].hypot(d[1]);
        if !(n > 0.0) || step < 1e-12 * h {
            break;
        }
        let cand = clamp([z[0] + step * d[0] / n, z[1] + step * d[1] / n]);
        let fc = p.eval(cand);
        if fc > f {
            (z, f) = (cand, fc);
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    z
}

pub fn rectangle_flowline_test(
    ansatz: &SelfSimilarAnsatz,
    rect: &Rectangle,
    opts: &RectangleOptions,
) -> Result<CertificateReport, CertifyError> {
    let used = [names::V1, names::V2, names::W, names::H2];
    let g = sampling_grid(ansatz, &used, opts.grid.as_ref())?;
    if !g.contains(rect.lo) || !g.contains(rect.hi) {
        return Err(CertifyError::InvalidSpec(format!("rectangle {rect:?} is not inside the grid")));
    }
    let alpha = ansatz.alpha;
    let w = sample(ansatz, names::W, &g)?;
    let v2 = sample(ansatz, names::V2, &g)?;
    let dh = sample_d1(ansatz, names::H2, &g)?;
    let v1 = sample(ansatz, names::V1, &g)?;
    let drift1 = ScalarField2D::new(
        g,
        g.nodes().map(|(i, j, z)| v1.at(i, j) + (1.0 - alpha) * z[0]).collect(),
    )?;
    let gap = w.zip_with(&dh, |a, b| a - b)?;
    let screen = rectangle_screen(&w, rect, opts.max_margin)?;
    let nodes = rect.nodes(&g);
    let off_axis: Vec<_> = nodes.iter().copied().filter(|&(i, _)| g.z1(i) > 0.0).collect();

    let mut hyps = vec![
        HypothesisCheck::from_witness("w-nonnegative", worst_violation(&w, &nodes, |v| v >= 0.0, |v| -v)),
        HypothesisCheck::from_witness("w-above-forcing", worst_violation(&gap, &nodes, |v| v >= 0.0, |v| -v)),
        HypothesisCheck::from_witness("drift1-positive", worst_violation(&drift1, &off_axis, |v| v > 0.0, |v| -v)),
        HypothesisCheck::from_witness("v2-positive", worst_violation(&v2, &nodes, |v| v > 0.0, |v| -v)),
    ];
    let max_w = Witness::node(&w, screen.max_node);
    hyps.push(match (&screen.counter, screen.value > 0.0) {
        (Some(c), _) => HypothesisCheck::failed("strict-maximum", c.clone()),
        (None, false) => HypothesisCheck::failed("strict-maximum", max_w.clone()),
        (None, true) => HypothesisCheck::passed("strict-maximum", Some(max_w.clone())),
    });
    hyps.push(if screen.location == MaxLocation::LowerLeftSides {
        HypothesisCheck::failed("max-location", max_w)
    } else {
        HypothesisCheck::passed("max-location", Some(max_w))
    });

    let pw = &ansatz.profiles[names::W];
    let ph = &ansatz.profiles[names::H2];
    let pv1 = &ansatz.profiles[names::V1];
    let pv2 = &ansatz.profiles[names::V2];
    let drift = |z: [f64; 2]| [pv1.eval(z) + (1.0 - alpha) * z[0], pv2.eval(z) + (1.0 - alpha) * z[1]];
    let z0 = if screen.strict { refine_max(pw, rect, screen.z, g.h1().min(g.h2())) } else { screen.z };
    let d0 = drift(z0);
    let speed = d0[0].hypot(d0[1]);
    let mut established = false;
    let mut tr = Traces::default();
    tr.put("screen", &screen);
    tr.put("implied_lower_bound", screen.value);
    tr.put("refined_max", (z0, pw.eval(z0)));
    if speed > 0.0 && screen.strict {
        let ds = -opts.step_fraction * g.h1().min(g.h2()) / speed;
        let line = trace_flow(
            &drift,
            &|z| (pw.eval(z), Some(ph.eval(z))),
            z0,
            ds,
            ds * opts.max_steps as f64,
            0,
            &mut |_, to| {
                if to[0] <= 0.0 || to[1] <= 0.0 {
                    StepCheck::Stop(Termination::ReachedBoundary)
                } else if !rect.contains(to) {
                    StepCheck::Stop(Termination::LeftWindow)
                } else {
                    StepCheck::Accept
                }
            },
        );
        // The profile equation forces W(z(s)) ≥ W(z₀) on the part inside D.
        let drop = line.w.iter().skip(1).position(|&x| x < line.w[0]).map(|k| k + 1);
        established = line.z.len() > 1 && drop == Some(1);
        tr.put("first_drop_index", drop);
        tr.put("flow_line", &line);
    } else {
        tr.put("flow_line", Option::<()>::None);
    }
    tr.put("mechanism_established", established);
    Ok(CertificateReport::assemble(PropositionId::NoRectangleMaximum, hyps, established, tr))
}
