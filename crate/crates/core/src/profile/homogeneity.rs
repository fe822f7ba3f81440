//! Homogeneity `Θ(λy) = λ^d Θ(y)` on sampled data and the boundedness
//! consequence for negative degree.

use serde::{Deserialize, Serialize};

use super::ansatz::NONTRIVIAL_TOL;
use super::ProfileError;
use crate::field::{Interpolator, Method, ScalarField2D};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityOptions {
    pub lambdas: Vec<f64>,
    /// Homogeneity is accepted when `defect ≤ rel_tol·‖Θ‖∞`.
    pub rel_tol: f64,
}

impl Default for HomogeneityOptions {
    fn default() -> Self {
        Self {
            lambdas: vec![0.5, 2.0],
            rel_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomogeneityVerdict {
    Trivial,
    /// Homogeneous of degree `d ≥ 0`.
    Homogeneous,
    /// Homogeneous of degree `d < 0` and growing toward the origin.
    HomogeneousSingular,
    HomogeneityRejected,
    /// Homogeneous of negative degree yet bounded near the origin.
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogeneityReport {
    pub degree: f64,
    pub defect: f64,
    pub relative_defect: f64,
    pub worst: Option<([f64; 2], f64)>,
    pub lambdas_used: Vec<f64>,
    pub notices: Vec<String>,
    /// Slope of `log max|Θ|` between the two innermost shells, when defined.
    pub origin_slope: Option<f64>,
    pub bounded_near_origin: bool,
    pub verdict: HomogeneityVerdict,
}

fn origin_slope(f: &ScalarField2D) -> Option<f64> {
    let r0 = f
        .grid()
        .nodes()
        .map(|(_, _, z)| z[0].hypot(z[1]))
        .filter(|&r| r > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !r0.is_finite() {
        return None;
    }
    let mut shells = [(0.0f64, 0.0f64); 2];
    for (i, j, z) in f.grid().nodes() {
        let r = z[0].hypot(z[1]);
        let k = if r >= r0 && r < 2.0 * r0 {
            0
        } else if r >= 2.0 * r0 && r < 4.0 * r0 {
            1
        } else {
            continue;
        };
        let u = f.at(i, j).abs();
        if u > shells[k].1 {
            shells[k] = (r, u);
        }
    }
    let [(ra, ua), (rb, ub)] = shells;
    (ua > 0.0 && ub > 0.0 && rb > ra).then(|| (ub / ua).ln() / (rb / ra).ln())
}

pub fn homogeneity_check(
    theta: &ScalarField2D,
    degree: f64,
    opts: &HomogeneityOptions,
) -> Result<HomogeneityReport, ProfileError> {
    if !degree.is_finite() {
        return Err(ProfileError::InvalidParameter("degree must be finite".into()));
    }
    let g = theta.grid();
    let sup = theta.sup_norm();
    let ip = Interpolator::new(theta, Method::Bicubic);
    let mut defect = 0.0f64;
    let mut worst = None;
    let mut used = Vec::new();
    let mut notices = Vec::new();
    for &lam in &opts.lambdas {
        let mut any = false;
        for (i, j, y) in g.nodes() {
            let ly = [lam * y[0], lam * y[1]];
            if !g.contains(ly) {
                continue;
            }
            any = true;
            let d = (ip.sample(ly) - lam.powf(degree) * theta.at(i, j)).abs();
            if d > defect {
                defect = d;
                worst = Some((y, lam));
            }
        }
        if any {
            used.push(lam);
        } else {
            notices.push(format!("lambda {lam} maps every node outside the grid; skipped"));
        }
    }
    if used.is_empty() {
        return Err(ProfileError::InvalidParameter(
            "no lambda maps any node inside the grid".into(),
        ));
    }
    let relative_defect = if sup > 0.0 { defect / sup } else { 0.0 };
    let slope = origin_slope(theta);
    // Growth toward the origin at least half the homogeneous rate counts as unbounded.
    let bounded = degree >= 0.0 || slope.is_none_or(|s| s > 0.5 * degree);
    let verdict = if sup <= NONTRIVIAL_TOL {
        HomogeneityVerdict::Trivial
    } else if relative_defect > opts.rel_tol {
        HomogeneityVerdict::HomogeneityRejected
    } else if degree >= 0.0 {
        HomogeneityVerdict::Homogeneous
    } else if bounded {
        HomogeneityVerdict::Inconsistent
    } else {
        HomogeneityVerdict::HomogeneousSingular
    };
    Ok(HomogeneityReport {
        degree,
        defect,
        relative_defect,
        worst,
        lambdas_used: used,
        notices,
        origin_slope: slope,
        bounded_near_origin: bounded,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid2D;

    const D: f64 = -2.0 / 3.0;

    fn grid() -> Grid2D {
        Grid2D::new((0.25, 4.0), (0.25, 4.0), 121, 121).unwrap()
    }

    #[test]
    fn power_is_homogeneous_and_singular() {
        let f = ScalarField2D::from_fn(grid(), |a, b| a.hypot(b).powf(D)).unwrap();
        let r = homogeneity_check(&f, D, &HomogeneityOptions::default()).unwrap();
        assert!(r.relative_defect < 1e-4, "{}", r.relative_defect);
        assert_eq!(r.verdict, HomogeneityVerdict::HomogeneousSingular);
        assert!((r.origin_slope.unwrap() - D).abs() < 0.1);
    }

    #[test]
    fn zero_is_trivial() {
        let f = ScalarField2D::zeros(grid());
        let r = homogeneity_check(&f, D, &HomogeneityOptions::default()).unwrap();
        assert_eq!(r.defect, 0.0);
        assert_eq!(r.verdict, HomogeneityVerdict::Trivial);
    }

    #[test]
    fn bounded_bump_is_rejected() {
        let f = ScalarField2D::from_fn(grid(), |a, b| (-(a - 1.0).powi(2) - (b - 1.0).powi(2)).exp())
            .unwrap();
        let r = homogeneity_check(&f, D, &HomogeneityOptions::default()).unwrap();
        assert!(r.relative_defect > 0.3);
        assert_eq!(r.verdict, HomogeneityVerdict::HomogeneityRejected);
    }

    #[test]
    fn out_of_range_lambda_is_noticed() {
        let f = ScalarField2D::from_fn(grid(), |a, b| a + b).unwrap();
        let opts = HomogeneityOptions {
            lambdas: vec![2.0, 100.0],
            rel_tol: 1e-3,
        };
        let r = homogeneity_check(&f, 1.0, &opts).unwrap();
        assert_eq!(r.lambdas_used, vec![2.0]);
        assert_eq!(r.notices.len(), 1);
        assert_eq!(r.verdict, HomogeneityVerdict::Homogeneous);
    }
}
