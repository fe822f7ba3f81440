//! Flow lines of a planar drift, integrated with RK4 and step halving.

use serde::{Deserialize, Serialize};

use crate::numeric::rk4_step;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ReachedBoundary,
    LeftWindow,
    HitSingularCurve,
    ParameterLimit,
}

/// Verdict of the caller on a proposed step `from → to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepCheck {
    Accept,
    /// Retry with half the step; after the halving budget is spent the line
    /// ends with [`Termination::HitSingularCurve`].
    Refine,
    /// End the line before `to`.
    Stop(Termination),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowLine {
    /// Strictly monotone parameter, starting at 0.
    pub s: Vec<f64>,
    pub z: Vec<[f64; 2]>,
    pub w: Vec<f64>,
    pub h2: Option<Vec<f64>>,
    pub termination: Termination,
}

impl FlowLine {
    pub fn seed(&self) -> [f64; 2] {
        self.z[0]
    }
    pub fn end(&self) -> [f64; 2] {
        *self.z.last().expect("flow lines hold their seed")
    }
}

/// Integrates `dz/ds = drift(z)` from `seed` with nominal step `step` (its
/// sign sets the direction) until `|s|` reaches `|limit|` or `check` stops the
/// line. `carried` gives `W` and optionally `H²` at each accepted point.
pub fn trace_flow(
    drift: &dyn Fn([f64; 2]) -> [f64; 2],
    carried: &dyn Fn([f64; 2]) -> (f64, Option<f64>),
    seed: [f64; 2],
    step: f64,
    limit: f64,
    max_halvings: u32,
    check: &mut dyn FnMut([f64; 2], [f64; 2]) -> StepCheck,
) -> FlowLine {
    assert!(step != 0.0 && step.signum() == limit.signum(), "step and limit must share a sign");
    let f = |_: f64, y: &[f64; 2]| drift(*y);
    let (w0, h0) = carried(seed);
    let mut line = FlowLine {
        s: vec![0.0],
        z: vec![seed],
        w: vec![w0],
        h2: h0.map(|h| vec![h]),
        termination: Termination::ParameterLimit,
    };
    let (mut s, mut z) = (0.0f64, seed);
    let mut halvings: u32 = 0;
    while s.abs() < limit.abs() {
        let mut h = step / f64::powi(2.0, halvings as i32);
        if (s + h).abs() > limit.abs() {
            h = limit - s;
        }
        let next = rk4_step(&f, s, &z, h);
        let verdict = if next.iter().all(|v| v.is_finite()) {
            check(z, next)
        } else {
            StepCheck::Refine
        };
        match verdict {
            StepCheck::Accept => {
                s += h;
                z = next;
                let (w, h2) = carried(z);
                line.s.push(s);
                line.z.push(z);
                line.w.push(w);
                if let (Some(v), Some(h2)) = (line.h2.as_mut(), h2) {
                    v.push(h2);
                }
                halvings = halvings.saturating_sub(1);
            }
            StepCheck::Refine if halvings < max_halvings => halvings += 1,
            StepCheck::Refine => {
                line.termination = Termination::HitSingularCurve;
                return line;
            }
            StepCheck::Stop(t) => {
                line.termination = t;
                return line;
            }
        }
    }
    line
}
