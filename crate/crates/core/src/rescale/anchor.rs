//! Anchor-point criterion `|ṽ_k(x̃,t̃)| ≤ λ(|x̃|² + |t̃|)·|ṽ_k(0,0)|`.

use serde::{Deserialize, Serialize};

use super::map::RescaledField;
use super::RescaleError;

/// Piecewise-linear `λ` on `s ≥ 0`, extended past the table with the last slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lambda {
    table: Vec<(f64, f64)>,
}

impl Lambda {
    /// `table` must start at `s = 0`, have increasing `s`, non-decreasing values
    /// and `λ(0) ≥ 1`.
    pub fn new(table: Vec<(f64, f64)>) -> Result<Self, RescaleError> {
        let bad = |m: &str| Err(RescaleError::InvalidParameter(format!("lambda table: {m}")));
        if table.is_empty() || table[0].0 != 0.0 {
            return bad("must start at s = 0");
        }
        if !(table[0].1 >= 1.0) {
            return bad("lambda(0) must be at least 1");
        }
        for w in table.windows(2) {
            if !(w[1].0 > w[0].0) {
                return bad("s values must increase");
            }
            if w[1].1 < w[0].1 {
                return bad("values must be non-decreasing");
            }
        }
        if table.iter().any(|(s, l)| !s.is_finite() || !l.is_finite()) {
            return bad("non-finite entry");
        }
        Ok(Self { table })
    }

    pub fn constant(value: f64) -> Result<Self, RescaleError> {
        Self::new(vec![(0.0, value)])
    }

    pub fn eval(&self, s: f64) -> f64 {
        let t = &self.table;
        if t.len() == 1 {
            return t[0].1;
        }
        let k = t.partition_point(|p| p.0 <= s).clamp(1, t.len() - 1);
        let (a, b) = (t[k - 1], t[k]);
        a.1 + (b.1 - a.1) * (s - a.0) / (b.0 - a.0)
    }
}

impl Default for Lambda {
    /// `λ(s) = 2(1 + s)`.
    fn default() -> Self {
        Self {
            table: vec![(0.0, 2.0), (1.0, 4.0)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum RadiusRule {
    /// `scale·√k`.
    Sqrt { scale: f64 },
    Constant { value: f64 },
}

impl RadiusRule {
    pub fn radius(&self, k: usize) -> f64 {
        match *self {
            Self::Sqrt { scale } => scale * (k as f64).sqrt(),
            Self::Constant { value } => value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorCriterion {
    pub lambda: Lambda,
    pub radius: RadiusRule,
}

impl Default for AnchorCriterion {
    fn default() -> Self {
        Self {
            lambda: Lambda::default(),
            radius: RadiusRule::Sqrt { scale: 4.0 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnchorCheck {
    /// Largest `|ṽ| / (λ(|x̃|²+|t̃|)·|ṽ(0,0)|)`; at most 1 for an anchor.
    pub worst_ratio: f64,
    /// `(x̃¹, x̃², t̃)` of the worst node.
    pub at: [f64; 3],
    pub nodes: usize,
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Checks the `k`-th rescaled field on `|x̃|² + |t̃| ≤ radius(k)`.
pub fn check_anchor(
    k: usize,
    field: &RescaledField,
    crit: &AnchorCriterion,
) -> Result<AnchorCheck, RescaleError> {
    let v0 = norm(field.at_origin());
    if !(v0 > 0.0) {
        return Err(RescaleError::ZeroCenterValue { k });
    }
    let radius = crit.radius.radius(k);
    let mut best = AnchorCheck {
        worst_ratio: f64::NEG_INFINITY,
        at: [0.0; 3],
        nodes: 0,
    };
    for (m, &t) in field.window.times.iter().enumerate() {
        for (n, (_, _, z)) in field.window.grid.nodes().enumerate() {
            let s = z[0] * z[0] + z[1] * z[1] + t.abs();
            if s > radius {
                continue;
            }
            best.nodes += 1;
            let ratio = norm(field.values[m][n]) / (crit.lambda.eval(s) * v0);
            if ratio > best.worst_ratio {
                best.worst_ratio = ratio;
                best.at = [z[0], z[1], t];
            }
        }
    }
    if best.nodes == 0 {
        return Err(RescaleError::InvalidParameter("anchor window is empty".into()));
    }
    Ok(best)
}
