//! Planted fixtures shared by the certifier property tests and the
//! acceptance suite.

#![allow(dead_code)]

use axiblow::certify::{
    base_sign_tests, rectangle_flowline_test, sector_integral_test, singular_flowline_test,
    theta_independence_test, BaseSignOptions, CertificateReport, Rectangle, RectangleOptions, SectorOptions,
    SectorSpec, SingularOptions, ThetaOptions, Verdict,
};
use axiblow::field::{Grid2D, ScalarField2D};
use axiblow::profile::{base_ode_solve, names, BaseOdeSpec, Parity, Profile, SelfSimilarAnsatz};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub certifier: &'static str,
    pub name: String,
    pub expected: Verdict,
    pub run: Box<dyn Fn() -> CertificateReport>,
}

fn fixture(
    certifier: &'static str,
    name: impl Into<String>,
    expected: Verdict,
    run: impl Fn() -> CertificateReport + 'static,
) -> Fixture {
    Fixture {
        certifier,
        name: name.into(),
        expected,
        run: Box::new(run),
    }
}

fn base(alpha: f64) -> SelfSimilarAnsatz {
    SelfSimilarAnsatz::new(alpha, (1.0 - alpha) / 2.0, 1.0).unwrap()
}

// ---------------------------------------------------------------- sector

#[derive(Clone, Copy)]
pub struct SectorPlant {
    pub angle: f64,
    pub amp: f64,
    pub width: f64,
    pub h2_coef: f64,
    pub v_sign: f64,
    pub shift: f64,
}

impl Default for SectorPlant {
    fn default() -> Self {
        Self {
            angle: 1.0,
            amp: 1.0,
            width: 0.5,
            h2_coef: 0.01,
            v_sign: 1.0,
            shift: 0.0,
        }
    }
}

/// Gaussian ridge centred at radius 1.5, velocity from the stream function
/// `0.2·z¹z²·exp(−|z|²/36)`.
pub fn sector_ansatz(p: SectorPlant) -> SelfSimilarAnsatz {
    let c = [1.5 * p.angle.cos(), 1.5 * p.angle.sin()];
    let ll = 36.0;
    let phi = move |z: [f64; 2]| (-(z[0] * z[0] + z[1] * z[1]) / ll).exp();
    let s = p.v_sign;
    base(-2.0)
        .with_profile(
            names::W,
            Profile::analytic(move |z| {
                p.amp * (-((z[0] - c[0]).powi(2) + (z[1] - c[1]).powi(2)) / p.width).exp() - p.shift
            }),
        )
        .with_profile(
            names::V1,
            Profile::analytic(move |z| -0.2 * s * z[0] * phi(z) * (1.0 - 2.0 * z[1] * z[1] / ll)),
        )
        .with_profile(
            names::V2,
            Profile::analytic(move |z| 0.2 * s * z[1] * phi(z) * (1.0 - 2.0 * z[0] * z[0] / ll)),
        )
        .with_profile(names::H2, Profile::analytic(move |z| p.h2_coef * z[0] * z[0]))
        .with_decay(names::W, -1.0 / 3.0)
        .with_decay(names::V1, 2.0 / 3.0)
        .with_decay(names::V2, 2.0 / 3.0)
}

pub fn sector_options() -> SectorOptions {
    SectorOptions {
        grid: Some(Grid2D::square(0.0, 4.0, 161).unwrap()),
        ..Default::default()
    }
}

fn sector_fixture(name: String, p: SectorPlant, expected: Verdict) -> Fixture {
    fixture("sector", name, expected, move || {
        sector_integral_test(&sector_ansatz(p), &SectorSpec::new(0.3, 1.2, 0.0, None), &sector_options()).unwrap()
    })
}

fn sector_fixtures() -> Vec<Fixture> {
    let d = SectorPlant::default();
    let mut out = Vec::new();
    for k in 0..10 {
        let p = SectorPlant {
            angle: 0.92 + 0.02 * k as f64,
            amp: 0.5 + 0.2 * k as f64,
            width: 0.4 + 0.02 * k as f64,
            ..d
        };
        out.push(sector_fixture(format!("ridge-{k}"), p, Verdict::ContradictionFound));
    }
    let neg = [
        ("zero-vorticity", SectorPlant { amp: 0.0, ..d }, Verdict::HypothesesNotMet),
        ("reversed-rays", SectorPlant { angle: 0.5, ..d }, Verdict::HypothesesNotMet),
        ("reversed-rays-wide", SectorPlant { angle: 0.55, width: 0.6, ..d }, Verdict::HypothesesNotMet),
        ("tied-rays", SectorPlant { angle: 0.75, ..d }, Verdict::Inconclusive),
        ("decreasing-forcing", SectorPlant { h2_coef: -0.01, ..d }, Verdict::HypothesesNotMet),
        ("reversed-velocity", SectorPlant { v_sign: -1.0, ..d }, Verdict::HypothesesNotMet),
        ("negative-floor", SectorPlant { shift: 0.05, ..d }, Verdict::HypothesesNotMet),
        ("forcing-dominates", SectorPlant { h2_coef: 1.0, ..d }, Verdict::HypothesesNotMet),
        ("no-forcing", SectorPlant { h2_coef: 0.0, ..d }, Verdict::HypothesesNotMet),
        ("weak-reversed", SectorPlant { angle: 0.6, amp: 0.3, ..d }, Verdict::HypothesesNotMet),
    ];
    for (n, p, v) in neg {
        out.push(sector_fixture(n.to_string(), p, v));
    }
    out
}

// ------------------------------------------------------------- rectangle

pub fn rectangle_ansatz(
    w: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static,
    v_scale: f64,
    h2_slope: f64,
) -> SelfSimilarAnsatz {
    base(-2.0)
        .with_profile(names::W, Profile::analytic(w))
        .with_profile(names::V1, Profile::analytic(move |z| v_scale * z[0]))
        .with_profile(names::V2, Profile::analytic(move |z| v_scale * z[1]))
        .with_profile(names::H2, Profile::analytic(move |z| h2_slope * z[0]))
}

pub fn rectangle_options() -> RectangleOptions {
    RectangleOptions {
        grid: Some(Grid2D::square(0.0, 3.0, 61).unwrap()),
        ..Default::default()
    }
}

fn rectangle_fixtures() -> Vec<Fixture> {
    let rect = Rectangle::new([1.0, 1.0], [2.0, 2.0]).unwrap();
    let mut out = Vec::new();
    for k in 0..10 {
        let (c1, c2) = (1.2 + 0.07 * k as f64, 1.75 - 0.05 * k as f64);
        let v = 0.05 + 0.02 * k as f64;
        let h = 0.002 * k as f64;
        let name = format!("interior-{k}");
        if k < 8 {
            out.push(fixture("rectangle", name, Verdict::ContradictionFound, move || {
                let a = rectangle_ansatz(move |z| (-(z[0] - c1).powi(2) - (z[1] - c2).powi(2)).exp(), v, h);
                rectangle_flowline_test(&a, &rect, &rectangle_options()).unwrap()
            }));
        } else {
            // Maximum inside the upper or the right side.
            let top = k == 8;
            out.push(fixture("rectangle", format!("upper-right-{k}"), Verdict::ContradictionFound, move || {
                let a = rectangle_ansatz(
                    move |z| {
                        let (along, across) = if top { (z[0], z[1]) } else { (z[1], z[0]) };
                        1.0 + across - (along - 1.5).powi(2)
                    },
                    v,
                    h,
                );
                rectangle_flowline_test(&a, &rect, &rectangle_options()).unwrap()
            }));
        }
    }
    let gauss = |c1: f64, c2: f64| move |z: [f64; 2]| (-(z[0] - c1).powi(2) - (z[1] - c2).powi(2)).exp();
    let negs: Vec<(&str, SelfSimilarAnsatz)> = vec![
        ("lower-left", rectangle_ansatz(|z| (-z[0] - z[1]).exp(), 0.1, 0.0)),
        ("left-side", rectangle_ansatz(gauss(0.5, 1.5), 0.1, 0.0)),
        ("lower-side", rectangle_ansatz(gauss(1.5, 0.4), 0.1, 0.0)),
        ("negative-w", rectangle_ansatz(|z| (-(z[0] - 1.5).powi(2) - (z[1] - 1.5).powi(2)).exp() - 0.7, 0.1, 0.0)),
        ("forcing-dominates", rectangle_ansatz(gauss(1.5, 1.5), 0.1, 2.0)),
        ("plateau", rectangle_ansatz(|_| 1.0, 0.1, 0.0)),
        ("flat-top", rectangle_ansatz(|z| if (z[0] - 1.5).abs() < 0.2 && (z[1] - 1.5).abs() < 0.2 { 1.0 } else { 0.5 }, 0.1, 0.0)),
        ("v2-negative", base(-2.0)
            .with_profile(names::W, Profile::analytic(gauss(1.5, 1.5)))
            .with_profile(names::V1, Profile::analytic(|z| 0.1 * z[0]))
            .with_profile(names::V2, Profile::analytic(|z| -0.1 * z[1]))
            .with_profile(names::H2, Profile::zero())),
        ("drift-negative", base(-2.0)
            .with_profile(names::W, Profile::analytic(gauss(1.5, 1.5)))
            .with_profile(names::V1, Profile::analytic(|z| -4.0 * z[0]))
            .with_profile(names::V2, Profile::analytic(|z| 0.1 * z[1]))
            .with_profile(names::H2, Profile::zero())),
        ("zero-w", rectangle_ansatz(|_| 0.0, 0.1, 0.0)),
    ];
    for (n, a) in negs {
        out.push(fixture("rectangle", n, Verdict::HypothesesNotMet, move || {
            rectangle_flowline_test(&a, &rect, &rectangle_options()).unwrap()
        }));
    }
    out
}

// --------------------------------------------------------------- singular

fn q(z2: f64, k: f64) -> f64 {
    1.0 / (1.0 + k * z2 * z2)
}

fn damped(z: [f64; 2]) -> f64 {
    (1.0 + z[0] * z[0] + z[1] * z[1]).sqrt()
}

pub fn singular_ansatz(
    w: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static,
    h2: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static,
    v: f64,
) -> SelfSimilarAnsatz {
    base(-2.0)
        .with_profile(names::W, Profile::analytic(w))
        .with_profile(names::H2, Profile::analytic(h2))
        .with_profile(names::V1, Profile::analytic(move |z| -v * z[0] / damped(z)))
        .with_profile(names::V2, Profile::analytic(move |z| v * z[1] / damped(z)))
        .with_decay(names::V1, 2.0 / 3.0)
        .with_decay(names::V2, 2.0 / 3.0)
        .with_decay(names::H2, 1.0 / 3.0)
}

pub fn singular_options() -> SingularOptions {
    SingularOptions {
        grid: Some(Grid2D::new((-6.0, 6.0), (0.0, 6.0), 121, 61).unwrap()),
        ..Default::default()
    }
}

/// `W = z¹·exp(−z¹²/(2σ²))·q(z²)`: `∂₁W` vanishes on `z¹ = σ`.
pub fn curve_ansatz(sigma: f64, s: f64, k: f64) -> SelfSimilarAnsatz {
    singular_ansatz(
        move |z| z[0] * (-z[0] * z[0] / (2.0 * sigma * sigma)).exp() * q(z[1], k),
        move |z| s * (1.0 - (-z[0] * z[0]).exp()) * q(z[1], k),
        0.3,
    )
}

fn singular_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for k in 0..5 {
        let (a, s, kk) = (0.6 + 0.2 * k as f64, 0.3 + 0.1 * k as f64, 0.5 + 0.25 * k as f64);
        out.push(fixture("singular", format!("monotone-{k}"), Verdict::ContradictionFound, move || {
            let an = singular_ansatz(
                move |z| (a * z[0]).tanh() * q(z[1], kk),
                move |z| s * (a * z[0]).tanh().powi(2) * q(z[1], kk),
                0.2 + 0.05 * k as f64,
            );
            singular_flowline_test(&an, 3.0, &singular_options()).unwrap()
        }));
    }
    for k in 0..5 {
        let (sigma, s) = (0.9 + 0.1 * k as f64, 0.4 + 0.05 * k as f64);
        out.push(fixture("singular", format!("curve-{k}"), Verdict::ContradictionFound, move || {
            singular_flowline_test(&curve_ansatz(sigma, s, 1.0), 3.0, &singular_options()).unwrap()
        }));
    }
    let negs: Vec<(&str, SelfSimilarAnsatz)> = vec![
        ("forcing-decreasing", singular_ansatz(
            |z| z[0] * (-0.5 * z[0] * z[0]).exp() * q(z[1], 1.0),
            |z| 0.5 * (1.0 + (-z[0] * z[0]).exp()) * q(z[1], 1.0),
            0.3,
        )),
        ("several-curves", singular_ansatz(
            |z| (3.0 * z[0]).sin() * (-z[0] * z[0] / 8.0).exp() * q(z[1], 1.0),
            |z| 0.5 * z[0].tanh().powi(2) * q(z[1], 1.0),
            0.3,
        )),
        ("rising-curve", singular_ansatz(
            |z| -z[0] * (-0.5 * z[0] * z[0]).exp() * q(z[1], 1.0),
            |z| 0.5 * (1.0 - (-z[0] * z[0]).exp()) * q(z[1], 1.0),
            0.3,
        )),
        ("w-even", singular_ansatz(|z| 1.0 + z[0].tanh().powi(2) * q(z[1], 1.0), |z| 0.5 * z[0].tanh().powi(2), 0.3)),
        ("h2-negative-far", singular_ansatz(|z| z[0].tanh() * q(z[1], 1.0), |z| 1.0 / z[0].cosh().powi(2) - 0.5, 0.3)),
        ("v1-even", base(-2.0)
            .with_profile(names::W, Profile::analytic(|z| z[0].tanh()))
            .with_profile(names::H2, Profile::analytic(|z| z[0].tanh().powi(2)))
            .with_profile(names::V1, Profile::analytic(|z| 0.1 * z[0].abs()))
            .with_profile(names::V2, Profile::analytic(|z| 0.1 * z[1]))
            .with_decay(names::V1, 1.0)
            .with_decay(names::V2, 1.0)
            .with_decay(names::H2, 0.0)),
        ("v2-on-base", base(-2.0)
            .with_profile(names::W, Profile::analytic(|z| z[0].tanh()))
            .with_profile(names::H2, Profile::analytic(|z| z[0].tanh().powi(2)))
            .with_profile(names::V1, Profile::analytic(|z| -0.1 * z[0] / damped(z)))
            .with_profile(names::V2, Profile::analytic(|z| 0.1 + 0.1 * z[1] / damped(z)))
            .with_decay(names::V1, 1.0)
            .with_decay(names::V2, 1.0)
            .with_decay(names::H2, 0.0)),
        ("v2-negative-top", base(-2.0)
            .with_profile(names::W, Profile::analytic(|z| z[0].tanh()))
            .with_profile(names::H2, Profile::analytic(|z| z[0].tanh().powi(2)))
            .with_profile(names::V1, Profile::analytic(|z| 0.1 * z[0] / damped(z)))
            .with_profile(names::V2, Profile::analytic(|z| -0.1 * z[1] / damped(z)))
            .with_decay(names::V1, 1.0)
            .with_decay(names::V2, 1.0)
            .with_decay(names::H2, 0.0)),
        ("undeclared-decay", base(-2.0)
            .with_profile(names::W, Profile::analytic(|z| z[0].tanh()))
            .with_profile(names::H2, Profile::analytic(|z| z[0].tanh().powi(2)))
            .with_profile(names::V1, Profile::analytic(|z| -0.1 * z[0] / damped(z)))
            .with_profile(names::V2, Profile::analytic(|z| 0.1 * z[1] / damped(z)))),
        ("zero-w", singular_ansatz(|_| 0.0, |z| z[0].tanh().powi(2), 0.3)),
    ];
    for (n, a) in negs {
        out.push(fixture("singular", n, Verdict::HypothesesNotMet, move || {
            singular_flowline_test(&a, 3.0, &singular_options()).unwrap()
        }));
    }
    out
}

// -------------------------------------------------------------- base sign

/// Closed-form base pair lifted off the base by `e^{−z²}`.
pub fn base_pair_ansatz(c: f64, w0: f64) -> SelfSimilarAnsatz {
    let spec = BaseOdeSpec {
        alpha: -2.0,
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
    base(-2.0)
        .with_profile(names::W, Profile::Gridded(lift(&s.w_closed)))
        .with_profile(names::H2, Profile::Gridded(lift(&s.h2_closed)))
        .with_profile(names::V1, Profile::zero())
}

fn base_grid() -> BaseSignOptions {
    BaseSignOptions {
        grid: Some(Grid2D::new((0.0, 4.0), (0.0, 4.0), 41, 41).unwrap()),
        ..Default::default()
    }
}

fn base_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for k in 0..4 {
        let w0 = -0.1 - 0.05 * k as f64;
        out.push(fixture("base-sign", format!("base-crossing-{k}"), Verdict::ContradictionFound, move || {
            base_sign_tests(&base_pair_ansatz(1.0, w0), &BaseSignOptions::default()).unwrap()
        }));
    }
    for k in 0..3 {
        let z0 = 1.5 + 0.5 * k as f64;
        out.push(fixture("base-sign", format!("planted-zero-{k}"), Verdict::ContradictionFound, move || {
            let a = base(-2.0)
                .with_profile(names::W, Profile::analytic(move |z| (z[0] - z0) * (-z[1]).exp()))
                .with_profile(names::H2, Profile::analytic(|z| 1.0 + z[0]))
                .with_profile(names::V1, Profile::zero());
            base_sign_tests(&a, &base_grid()).unwrap()
        }));
    }
    for k in 0..3 {
        let c = [1.0 + 0.8 * k as f64, 1.5 + 0.5 * k as f64];
        out.push(fixture("base-sign", format!("negative-dip-{k}"), Verdict::ContradictionFound, move || {
            let a = base(-2.0)
                .with_profile(
                    names::W,
                    Profile::analytic(move |z| 0.2 - (-(z[0] - c[0]).powi(2) - (z[1] - c[1]).powi(2)).exp()),
                )
                .with_profile(names::H2, Profile::analytic(|z| 1.0 + z[0]))
                .with_profile(names::V1, Profile::analytic(|z| 0.1 * z[0]));
            base_sign_tests(&a, &base_grid()).unwrap()
        }));
    }
    for k in 0..4 {
        let (c, w0) = (0.5 + 0.5 * k as f64, 0.1 + 0.2 * k as f64);
        out.push(fixture("base-sign", format!("positive-pair-{k}"), Verdict::Inconclusive, move || {
            base_sign_tests(&base_pair_ansatz(c, w0), &BaseSignOptions::default()).unwrap()
        }));
    }
    let negs: Vec<(&str, SelfSimilarAnsatz, Verdict)> = vec![
        ("decreasing-forcing", base(-2.0)
            .with_profile(names::W, Profile::analytic(|z| (z[0] - 2.0) * (-z[1]).exp()))
            .with_profile(names::H2, Profile::analytic(|z| 1.0 / (1.0 + z[0])))
            .with_profile(names::V1, Profile::zero()), Verdict::HypothesesNotMet),
        ("drift-negative", base(-2.0)
            .with_profile(names::W, Profile::analytic(|z| (z[0] - 2.0) * (-z[1]).exp()))
            .with_profile(names::H2, Profile::analytic(|z| 1.0 + z[0]))
            .with_profile(names::V1, Profile::analytic(|z| -4.0 * z[0])), Verdict::HypothesesNotMet),
        ("h2-vanishing", base(-2.0)
            .with_profile(names::W, Profile::analytic(|z| (z[0] - 2.0) * (-z[1]).exp()))
            .with_profile(names::H2, Profile::analytic(|z| z[0] - 2.0))
            .with_profile(names::V1, Profile::zero()), Verdict::HypothesesNotMet),
        ("positive-quadrant", base(-2.0)
            .with_profile(names::W, Profile::analytic(|z| 1.0 + z[0] + z[1]))
            .with_profile(names::H2, Profile::analytic(|z| 1.0 + z[0]))
            .with_profile(names::V1, Profile::zero()), Verdict::Inconclusive),
        ("zero-at-origin-only", base(-2.0)
            .with_profile(names::W, Profile::analytic(|z| z[0] * (-z[1]).exp()))
            .with_profile(names::H2, Profile::analytic(|z| z[0] * z[0] + 0.1))
            .with_profile(names::V1, Profile::analytic(|z| 0.2 * z[0])), Verdict::Inconclusive),
    ];
    for (n, a, v) in negs {
        out.push(fixture("base-sign", n, v, move || base_sign_tests(&a, &base_grid()).unwrap()));
    }
    out.push(fixture("base-sign", "no-base-row", Verdict::HypothesesNotMet, || {
        let a = base(-2.0)
            .with_profile(names::W, Profile::analytic(|z| (z[0] - 2.0) * (-z[1]).exp()))
            .with_profile(names::H2, Profile::analytic(|z| 1.0 + z[0]))
            .with_profile(names::V1, Profile::zero());
        let o = BaseSignOptions {
            grid: Some(Grid2D::new((0.0, 4.0), (0.5, 4.0), 41, 36).unwrap()),
            ..Default::default()
        };
        base_sign_tests(&a, &o).unwrap()
    }));
    out
}

// ------------------------------------------------------------------ theta

pub fn theta_grid() -> Grid2D {
    Grid2D::new((-1.0, 1.0), (-1.0, 1.0), 16, 16).unwrap()
}

pub fn theta_ansatz(values: ScalarField2D, odd: bool) -> SelfSimilarAnsatz {
    let a = SelfSimilarAnsatz::new(-2.0, 2.0, 1.0)
        .unwrap()
        .with_profile(names::THETA, Profile::Gridded(values));
    if odd {
        a.with_parity(names::THETA, [Parity::Any, Parity::Odd])
    } else {
        a
    }
}

/// Random field on the 16×16 grid: a polynomial in `z¹`, plus a
/// `z²`-dependent part when `dependent`.
pub fn random_theta(rng: &mut ChaCha8Rng, dependent: bool) -> ScalarField2D {
    let c: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    let d: Vec<f64> = (0..3).map(|_| rng.random_range(0.2..1.0)).collect();
    ScalarField2D::from_fn(theta_grid(), |a, b| {
        let base = 1.5 + c[0] + c[1] * a + c[2] * a * a + c[3] * a * a * a;
        if dependent {
            base + d[0] * (d[1] * 3.0 * b + d[2]).sin() * (1.0 + 0.5 * a)
        } else {
            base
        }
    })
    .unwrap()
}

fn theta_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for k in 0..10u64 {
        out.push(fixture("theta", format!("independent-{k}"), Verdict::ContradictionFound, move || {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + k);
            theta_independence_test(&theta_ansatz(random_theta(&mut rng, false), true), &ThetaOptions::default())
                .unwrap()
        }));
    }
    for k in 0..6u64 {
        out.push(fixture("theta", format!("dependent-{k}"), Verdict::HypothesesNotMet, move || {
            let mut rng = ChaCha8Rng::seed_from_u64(200 + k);
            theta_independence_test(&theta_ansatz(random_theta(&mut rng, true), true), &ThetaOptions::default())
                .unwrap()
        }));
    }
    out.push(fixture("theta", "zero", Verdict::HypothesesNotMet, || {
        theta_independence_test(&theta_ansatz(ScalarField2D::zeros(theta_grid()), true), &ThetaOptions::default())
            .unwrap()
    }));
    out.push(fixture("theta", "not-declared-odd", Verdict::HypothesesNotMet, || {
        let mut rng = ChaCha8Rng::seed_from_u64(300);
        theta_independence_test(&theta_ansatz(random_theta(&mut rng, false), false), &ThetaOptions::default())
            .unwrap()
    }));
    for (k, amp) in [(0, 1.0), (1, 0.25)] {
        out.push(fixture("theta", format!("checkerboard-{k}"), Verdict::Inconclusive, move || {
            let f = ScalarField2D::from_fn(theta_grid(), |_, b| {
                let j = ((b + 1.0) / (2.0 / 15.0)).round() as i64;
                1.0 + if j % 2 == 0 { 0.0 } else { amp }
            })
            .unwrap();
            theta_independence_test(&theta_ansatz(f, true), &ThetaOptions::default()).unwrap()
        }));
    }
    out
}

/// All planted fixtures, grouped by certifier.
pub fn classification_fixtures() -> Vec<Fixture> {
    let mut out = sector_fixtures();
    out.extend(rectangle_fixtures());
    out.extend(singular_fixtures());
    out.extend(base_fixtures());
    out.extend(theta_fixtures());
    out
}

pub struct Outcome {
    pub name: String,
    pub expected: Verdict,
    pub got: Verdict,
    pub deterministic: bool,
}

/// Runs a fixture twice and compares the serialized reports.
pub fn run_twice(f: &Fixture) -> Outcome {
    let a = (f.run)();
    let b = (f.run)();
    Outcome {
        name: format!("{}/{}", f.certifier, f.name),
        expected: f.expected,
        got: a.verdict,
        deterministic: serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap(),
    }
}
