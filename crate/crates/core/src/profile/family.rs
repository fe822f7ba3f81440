//! Closed-form rescaled families of an exact ansatz.
//!
//! With `T₀ − t_k = Q_k^{−1/α}` and `y = x̃/(1−t̃)^{1−α}`, the `k`-th member is
//!
//! | variant | `ṽ^θ_k` | `ṽ^r_k`, `ṽ³_k` |
//! |---|---|---|
//! | `Lhsc` | `(1−t̃)^{−α} Θ(y)` | `Q^{−β/α} (1−t̃)^{β−α} V(y)` |
//! | `Lhsc2` | `Q^{β/α} (1−t̃)^{−α−β} Θ(y)` | `(1−t̃)^{−α} V(y)` |
//! | `CenteredBoundary` | `(1−t̃)^{−α} Θ(y)` | `(1−t̃)^{−α} V(y)` |
//!
//! and `h_k = Q^{−β/α} ṽ^θ_k`.

use serde::{Deserialize, Serialize};

use super::ansatz::{names, Profile, SelfSimilarAnsatz};
use super::ProfileError;
use crate::rescale::Window;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyVariant {
    /// Radial and vertical components carry the extra `(T₀−t)^β`.
    Lhsc,
    /// The swirl carries `(T₀−t)^{−β}` instead.
    Lhsc2,
    /// Velocity self-similarity about a boundary point, no `β` shift.
    CenteredBoundary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyMember {
    pub q: f64,
    pub t_k: f64,
    /// `[time][node]` of `(ṽ^r, ṽ^θ, ṽ³)`, matching the rescale ordering.
    pub values: Vec<Vec<[f64; 3]>>,
    /// `[time][node]` of `h_k`.
    pub h: Vec<Vec<f64>>,
}

pub fn build_scaled_family(
    ansatz: &SelfSimilarAnsatz,
    qs: &[f64],
    variant: FamilyVariant,
    window: &Window,
) -> Result<Vec<FamilyMember>, ProfileError> {
    let (alpha, beta) = (ansatz.alpha, ansatz.beta);
    match variant {
        FamilyVariant::Lhsc | FamilyVariant::Lhsc2 if alpha >= 0.0 => {
            return Err(ProfileError::InvalidExponents(format!(
                "{variant:?} needs alpha < 0, got {alpha}"
            )))
        }
        FamilyVariant::CenteredBoundary if alpha <= 0.0 => {
            return Err(ProfileError::InvalidExponents(format!(
                "centered-boundary needs alpha in (0, 1), got {alpha}"
            )))
        }
        _ => {}
    }
    if let Some(&t) = window.times.iter().find(|&&t| !(t < 1.0)) {
        return Err(ProfileError::InvalidParameter(format!(
            "rescaled time {t} is not before the blow-up at 1"
        )));
    }
    if let Some(&q) = qs.iter().find(|&&q| !(q > 0.0 && q.is_finite())) {
        return Err(ProfileError::InvalidParameter(format!("Q must be positive, got {q}")));
    }
    let zero = Profile::zero();
    let theta = match variant {
        FamilyVariant::CenteredBoundary => ansatz.profiles.get(names::THETA).unwrap_or(&zero),
        _ => ansatz.profile(names::THETA)?,
    };
    let vr = ansatz.profile(names::VR)?;
    let v3 = ansatz.profile(names::V3)?;

    let mut out = Vec::with_capacity(qs.len());
    for &q in qs {
        let qb = q.powf(-beta / alpha);
        let (c_theta, c_vel, e_theta, e_vel) = match variant {
            FamilyVariant::Lhsc => (1.0, qb, -alpha, beta - alpha),
            FamilyVariant::Lhsc2 => (1.0 / qb, 1.0, -alpha - beta, -alpha),
            FamilyVariant::CenteredBoundary => (1.0, 1.0, -alpha, -alpha),
        };
        let mut values = Vec::with_capacity(window.times.len());
        let mut h = Vec::with_capacity(window.times.len());
        for &t in &window.times {
            let s = 1.0 - t;
            let zs = s.powf(1.0 - alpha);
            let (ft, fv) = (c_theta * s.powf(e_theta), c_vel * s.powf(e_vel));
            let mut row = Vec::with_capacity(window.grid.len());
            let mut hrow = Vec::with_capacity(window.grid.len());
            for (_, _, x) in window.grid.nodes() {
                let y = [x[0] / zs, x[1] / zs];
                let vt = ft * theta.eval(y);
                row.push([fv * vr.eval(y), vt, fv * v3.eval(y)]);
                hrow.push(qb * vt);
            }
            values.push(row);
            h.push(hrow);
        }
        out.push(FamilyMember {
            q,
            t_k: ansatz.t0 - q.powf(-1.0 / alpha),
            values,
            h,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid2D;
    use crate::rescale::{rescale_field, Analytic, BlowupCenter};

    fn ansatz(alpha: f64, beta: f64) -> SelfSimilarAnsatz {
        SelfSimilarAnsatz::new(alpha, beta, 1.0)
            .unwrap()
            .with_profile(names::THETA, Profile::analytic(|y| (-(y[0] * y[0] + y[1] * y[1])).exp()))
            .with_profile(names::VR, Profile::analytic(|y| y[1] / (1.0 + y[0] * y[0])))
            .with_profile(names::V3, Profile::analytic(|y| (y[0] - 0.3 * y[1]).sin()))
    }

    fn window() -> Window {
        Window {
            grid: Grid2D::new((-0.4, 0.4), (-0.3, 0.5), 5, 5).unwrap(),
            times: vec![-0.5, 0.0],
        }
    }

    #[test]
    fn unit_q_is_the_ansatz_at_t_k() {
        let a = ansatz(-2.0, 1.5);
        let w = Window {
            grid: window().grid,
            times: vec![0.0],
        };
        for v in [FamilyVariant::Lhsc, FamilyVariant::Lhsc2] {
            let m = &build_scaled_family(&a, &[1.0], v, &w).unwrap()[0];
            assert_eq!(m.t_k, 0.0);
            for (n, (_, _, x)) in w.grid.nodes().enumerate() {
                let want = [a.profiles["vr"].eval(x), a.profiles["theta"].eval(x), a.profiles["v3"].eval(x)];
                assert_eq!(m.values[0][n], want);
            }
        }
    }

    /// Direct substitution: rescale the original-variable ansatz about the
    /// boundary point `(1, 0)`.
    #[test]
    fn lhsc_matches_rescaled_ansatz() {
        let a = ansatz(-2.0, 1.5);
        let (alpha, beta) = (a.alpha, a.beta);
        let p = [1.0, 0.0];
        let profiles = a.profiles.clone();
        let src = Analytic {
            f: move |x: [f64; 2], t: f64| {
                let s: f64 = 1.0 - t;
                let y = [(x[0] - p[0]) / s.powf(1.0 - alpha), (x[1] - p[1]) / s.powf(1.0 - alpha)];
                [
                    s.powf(beta - alpha) * profiles["vr"].eval(y),
                    s.powf(-alpha) * profiles["theta"].eval(y),
                    s.powf(beta - alpha) * profiles["v3"].eval(y),
                ]
            },
            domain: [-1e6, 1e6, -1e6, 1e6],
            times: (-10.0, 0.999),
        };
        let qs = [0.5, 0.2, 0.05];
        let w = window();
        let fam = build_scaled_family(&a, &qs, FamilyVariant::Lhsc, &w).unwrap();
        let mut checked = 0;
        for m in &fam {
            let r = rescale_field(&src, BlowupCenter { x: p, t: m.t_k, q: m.q }, alpha, &w).unwrap();
            for (k, _) in w.times.iter().enumerate() {
                for n in [0, 6, 12, 18, 24] {
                    for c in 0..3 {
                        let (x, y) = (m.values[k][n][c], r.values[k][n][c]);
                        assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()), "{x} vs {y}");
                    }
                    checked += 1;
                }
            }
            // Radial factor is Q^{−β/α} = Q^{0.75} at t̃ = 0.
            let vr0 = m.values[1][12][0];
            assert!((vr0 - m.q.powf(0.75) * a.profiles["vr"].eval([0.0, 0.1])).abs() < 1e-14);
        }
        assert_eq!(checked, 30);
    }

    #[test]
    fn lhsc2_normalized_swirl_is_k_independent() {
        let a = ansatz(-2.0, 1.5);
        let fam = build_scaled_family(&a, &[1.0, 0.1, 1e-3, 1e-6], FamilyVariant::Lhsc2, &window())
            .unwrap();
        let w = window();
        for m in &fam[1..] {
            for (k, &t) in w.times.iter().enumerate() {
                for (n, (_, _, x)) in w.grid.nodes().enumerate() {
                    let s: f64 = 1.0 - t;
                    let y = [x[0] / s.powi(3), x[1] / s.powi(3)];
                    let hinf = s.powf(0.5) * a.profiles["theta"].eval(y);
                    assert!((m.h[k][n] - hinf).abs() <= 1e-12 * (1.0 + hinf.abs()));
                    assert!((m.h[k][n] - fam[0].h[k][n]).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn variant_requirements() {
        let a = ansatz(-2.0, 1.5);
        assert!(build_scaled_family(&a, &[1.0], FamilyVariant::CenteredBoundary, &window()).is_err());
        let mut b = ansatz(0.5, 0.0);
        b.profiles.remove(names::THETA);
        assert!(build_scaled_family(&b, &[2.0], FamilyVariant::CenteredBoundary, &window()).is_ok());
        let mut c = ansatz(-2.0, 1.5);
        c.profiles.remove(names::VR);
        assert!(matches!(
            build_scaled_family(&c, &[2.0], FamilyVariant::Lhsc, &window()),
            Err(ProfileError::MissingProfile(_))
        ));
        assert!(build_scaled_family(&a, &[0.0], FamilyVariant::Lhsc, &window()).is_err());
    }
}
