//! Declared parity, decay and sign conditions checked on sampled profiles.

use serde::Serialize;

use super::ansatz::{Parity, SelfSimilarAnsatz, SignRule};
use super::ProfileError;
use crate::field::{Grid2D, ScalarField2D};
use crate::numeric::linear_fit;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryOptions {
    /// Overrides the default of 1e-10 (analytic) or 1e-6 (gridded).
    pub parity_tol: Option<f64>,
    /// Decay is fitted on `|z| ∈ [(1 − fraction)·R, R]`.
    pub decay_fraction: f64,
    pub decay_bins: usize,
    pub decay_tol: f64,
    /// Violations listed per profile; the count is always complete.
    pub max_listed: usize,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        Self {
            parity_tol: None,
            decay_fraction: 0.25,
            decay_bins: 8,
            decay_tol: 0.05,
            max_listed: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParityFinding {
    /// 1 or 2.
    pub axis: usize,
    pub parity: Parity,
    pub defect: f64,
    pub tol: f64,
    pub pass: bool,
    pub worst: Option<(usize, usize)>,
    pub notice: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub expected: Option<f64>,
    /// Least-squares slope of `log max|u|` against `log |z|` over radial bins.
    pub exponent: f64,
    pub residual: f64,
    pub bins: usize,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignViolation {
    pub node: (usize, usize),
    pub z: [f64; 2],
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignFinding {
    pub rule: SignRule,
    pub count: usize,
    pub violations: Vec<SignViolation>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileFindings {
    pub name: String,
    pub sup_norm: f64,
    pub parity: Vec<ParityFinding>,
    pub decay: Option<DecayFit>,
    pub decay_notice: Option<String>,
    pub sign: Option<SignFinding>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub profiles: Vec<ProfileFindings>,
    /// True when no evaluated check failed; skipped checks carry notices.
    pub pass: bool,
}

fn parity_defect(f: &ScalarField2D, axis: usize, parity: Parity, tol: f64) -> ParityFinding {
    let g = f.grid();
    let mut out = ParityFinding {
        axis,
        parity,
        defect: 0.0,
        tol,
        pass: true,
        worst: None,
        notice: None,
    };
    if parity == Parity::Any {
        return out;
    }
    let symmetric = if axis == 1 { g.symmetric_in_z1() } else { g.symmetric_in_z2() };
    if !symmetric {
        out.notice = Some(format!("grid is not reflection-symmetric in z{axis}; parity check skipped"));
        return out;
    }
    let s = if parity == Parity::Odd { 1.0 } else { -1.0 };
    for (i, j, _) in g.nodes() {
        let (ri, rj) = if axis == 1 { (g.n1() - 1 - i, j) } else { (i, g.n2() - 1 - j) };
        let d = (f.at(i, j) + s * f.at(ri, rj)).abs();
        if d > out.defect {
            out.defect = d;
            out.worst = Some((i, j));
        }
    }
    out.pass = out.defect <= tol;
    out
}

fn decay_fit(f: &ScalarField2D, expected: Option<f64>, opts: &SymmetryOptions) -> Result<DecayFit, String> {
    let g = f.grid();
    let reach = |lo: f64, hi: f64| lo.abs().max(hi.abs());
    let r_out = reach(g.min1(), g.max1()).min(reach(g.min2(), g.max2()));
    let r_in = (1.0 - opts.decay_fraction) * r_out;
    let nb = opts.decay_bins.max(2);
    let mut best: Vec<Option<(f64, f64)>> = vec![None; nb];
    for (i, j, z) in g.nodes() {
        let r = z[0].hypot(z[1]);
        if r < r_in || r > r_out || !(r > 0.0) {
            continue;
        }
        let b = (((r - r_in) / (r_out - r_in)) * nb as f64).floor().min(nb as f64 - 1.0) as usize;
        let u = f.at(i, j).abs();
        if u > 0.0 && best[b].is_none_or(|(_, m)| u > m) {
            best[b] = Some((r, u));
        }
    }
    let pts: Vec<(f64, f64)> = best.into_iter().flatten().collect();
    if pts.len() < 3 {
        return Err(format!("only {} nonzero radial bins in the outer annulus", pts.len()));
    }
    let x: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (exponent, _, residual) = linear_fit(&x, &y);
    Ok(DecayFit {
        expected,
        exponent,
        residual,
        bins: pts.len(),
        pass: expected.map(|e| (exponent - e).abs() <= opts.decay_tol),
    })
}

fn sign_check(f: &ScalarField2D, rule: SignRule, max_listed: usize) -> SignFinding {
    let mut out = SignFinding {
        rule,
        count: 0,
        violations: Vec::new(),
        pass: true,
    };
    for (i, j, z) in f.grid().nodes() {
        if z[0] > 0.0 && z[1] > 0.0 && !rule.holds(f.at(i, j)) {
            out.count += 1;
            if out.violations.len() < max_listed {
                out.violations.push(SignViolation {
                    node: (i, j),
                    z,
                    value: f.at(i, j),
                });
            }
        }
    }
    out.pass = out.count == 0;
    out
}

/// Samples each profile (gridded ones on their own grid, analytic ones on
/// `grid`) and checks every declared condition.
pub fn symmetry_decay_check(
    ansatz: &SelfSimilarAnsatz,
    grid: Option<&Grid2D>,
    opts: &SymmetryOptions,
) -> Result<SymmetryReport, ProfileError> {
    let mut profiles = Vec::new();
    let mut pass = true;
    for (name, p) in &ansatz.profiles {
        let f = match (p.grid(), grid) {
            (Some(g), _) => p.sample(g)?,
            (None, Some(g)) => p.sample(g)?,
            (None, None) => {
                return Err(ProfileError::InvalidParameter(format!(
                    "analytic profile '{name}' needs a sampling grid"
                )))
            }
        };
        let tol = opts
            .parity_tol
            .unwrap_or(if p.is_gridded() { 1e-6 } else { 1e-10 });
        let parity = match ansatz.parities.get(name) {
            Some(ps) => vec![parity_defect(&f, 1, ps[0], tol), parity_defect(&f, 2, ps[1], tol)],
            None => Vec::new(),
        };
        let expected = ansatz.decay_exponents.get(name).copied();
        let (decay, decay_notice) = match decay_fit(&f, expected, opts) {
            Ok(d) => (Some(d), None),
            Err(m) if expected.is_some() => (None, Some(m)),
            Err(_) => (None, None),
        };
        let sign = ansatz
            .signs
            .get(name)
            .map(|&r| sign_check(&f, r, opts.max_listed));
        pass &= parity.iter().all(|x| x.pass)
            && decay.as_ref().and_then(|d| d.pass).unwrap_or(true)
            && sign.as_ref().is_none_or(|s| s.pass);
        profiles.push(ProfileFindings {
            name: name.clone(),
            sup_norm: f.sup_norm(),
            parity,
            decay,
            decay_notice,
            sign,
        });
    }
    Ok(SymmetryReport { profiles, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{names, Profile};

    fn bump(z: [f64; 2]) -> f64 {
        (-(z[0] - 0.2).powi(2) - z[1] * z[1]).exp()
    }

    fn find<'a>(r: &'a SymmetryReport, n: &str) -> &'a ProfileFindings {
        r.profiles.iter().find(|p| p.name == n).unwrap()
    }

    #[test]
    fn odd_profile_has_zero_defect() {
        let g = Grid2D::square(-2.0, 2.0, 41).unwrap();
        let a = SelfSimilarAnsatz::new(-2.0, 1.5, 1.0)
            .unwrap()
            .with_profile(names::H, Profile::analytic(|z| z[0] * (-(z[0] * z[0] + z[1] * z[1])).exp()))
            .with_parity(names::H, [Parity::Odd, Parity::Even])
            .with_profile("b", Profile::analytic(bump))
            .with_parity("b", [Parity::Even, Parity::Any]);
        let r = symmetry_decay_check(&a, Some(&g), &SymmetryOptions::default()).unwrap();
        let h = find(&r, names::H);
        assert!(h.parity[0].defect < 1e-15);
        assert!(h.parity[1].pass);
        let b = find(&r, "b");
        assert!(!b.parity[0].pass);
        assert!(b.parity[0].defect > 0.1);
        assert!(!r.pass);
    }

    #[test]
    fn asymmetric_grid_skips_parity() {
        let g = Grid2D::new((0.0, 2.0), (-1.0, 1.0), 11, 11).unwrap();
        let a = SelfSimilarAnsatz::new(-2.0, 1.5, 1.0)
            .unwrap()
            .with_profile(names::H, Profile::analytic(|z| z[0]))
            .with_parity(names::H, [Parity::Odd, Parity::Even]);
        let r = symmetry_decay_check(&a, Some(&g), &SymmetryOptions::default()).unwrap();
        let h = find(&r, names::H);
        assert!(h.parity[0].notice.is_some());
        assert!(h.parity[1].pass && h.parity[1].notice.is_none());
    }

    #[test]
    fn planted_decay_exponent_is_recovered() {
        let g = Grid2D::new((0.05, 8.0), (0.05, 8.0), 160, 160).unwrap();
        let w = |z: [f64; 2]| {
            let (r, th) = (z[0].hypot(z[1]), z[1].atan2(z[0]));
            r.powf(-1.0 / 3.0) * (1.0 + 0.5 * (2.0 * th).sin())
        };
        let a = SelfSimilarAnsatz::new(-2.0, 1.5, 1.0)
            .unwrap()
            .with_profile(names::W, Profile::analytic(w))
            .with_decay(names::W, -1.0 / 3.0);
        let r = symmetry_decay_check(&a, Some(&g), &SymmetryOptions::default()).unwrap();
        let d = find(&r, names::W).decay.clone().unwrap();
        assert!((d.exponent + 1.0 / 3.0).abs() < 0.05, "{d:?}");
        assert_eq!(d.pass, Some(true));
    }

    #[test]
    fn sign_violations_are_located() {
        let g = Grid2D::square(-1.0, 1.0, 21).unwrap();
        let v2 = |z: [f64; 2]| z[1] * (-(z[0] * z[0] + z[1] * z[1])).exp();
        let a = SelfSimilarAnsatz::new(-2.0, 1.5, 1.0)
            .unwrap()
            .with_profile(names::V2, Profile::analytic(v2))
            .with_sign(names::V2, SignRule::Positive)
            .with_profile("neg", Profile::analytic(move |z| -v2(z)))
            .with_sign("neg", SignRule::Positive);
        let r = symmetry_decay_check(&a, Some(&g), &SymmetryOptions::default()).unwrap();
        assert!(find(&r, names::V2).sign.as_ref().unwrap().pass);
        let s = find(&r, "neg").sign.clone().unwrap();
        assert_eq!(s.count, 100);
        assert_eq!(s.violations[0].node, (11, 11));
        assert!(!r.pass);
    }
}
