//! Axisymmetric Euler on the meridian annulus `r ∈ [r_min, 1]`, periodic in `x³`.
//!
//! The state is carried as the swirl `Γ = r v^θ` and the azimuthal vorticity
//! `ω^θ = ∂₃v^r − ∂_r v³`. A stream function with
//! `ψ_rr − ψ_r / r + ψ_33 = −r ω^θ` gives the meridian velocity
//! `(v^r, v³) = (−∂₃ψ, ∂_rψ) / r`, which is divergence free in the measure
//! `r dr dx³`. Constant `ψ` on each wall is the no-penetration condition; the
//! jump between the walls is the conserved axial flux.
//!
//! Each step transports `Γ` and `η = ω^θ / r` along the meridian flow with a
//! second-order predictor–corrector semi-Lagrangian scheme. `η` carries the
//! source `∂₃(Γ²) / r⁴`, applied half before and half after transport.

use std::sync::Arc;

use super::advect::{cfl_number, Transport};
use super::poisson::ChannelPoisson;
use super::{SchemeOptions, SimError, CFL_MAX};
use crate::field::{
    curl2d_with, d2, perp_gradient_with, Edge, Grid2D, ScalarField2D, VectorField2D, Wrap,
};

pub const DEFAULT_R_MIN: f64 = 0.25;
const EDGES: [Edge; 2] = [Edge::OneSided, Edge::Periodic];
const WRAP: [Wrap; 2] = [Wrap::Clamp, Wrap::Periodic];

/// Snapshot of an axisymmetric flow on an `(r, x³)` grid.
#[derive(Debug, Clone)]
pub struct AxiState {
    grid: Grid2D,
    vr: ScalarField2D,
    vtheta: ScalarField2D,
    v3: ScalarField2D,
    omega: ScalarField2D,
    psi: ScalarField2D,
    flux: f64,
    time: f64,
    scheme: SchemeOptions,
    solver: Arc<ChannelPoisson>,
}

fn check_grid(grid: &Grid2D) -> Result<(), SimError> {
    if !(grid.min1() > 0.0) {
        return Err(SimError::Domain(format!(
            "r_min must be positive, got {}",
            grid.min1()
        )));
    }
    if (grid.max1() - 1.0).abs() > 1e-12 {
        return Err(SimError::Domain(format!(
            "outer radius is fixed at 1, got {}",
            grid.max1()
        )));
    }
    Ok(())
}

fn check_periodic(f: &ScalarField2D, name: &str) -> Result<(), SimError> {
    let g = f.grid();
    let tol = 1e-10 * (1.0 + f.sup_norm());
    for i in 0..g.n1() {
        let d = (f.at(i, 0) - f.at(i, g.n2() - 1)).abs();
        if d > tol {
            return Err(SimError::Domain(format!(
                "{name} is not x3-periodic at row {i}: mismatch {d}"
            )));
        }
    }
    Ok(())
}

fn radius(grid: &Grid2D) -> ScalarField2D {
    ScalarField2D::from_fn(*grid, |r, _| r).expect("finite radius")
}

fn solver_for(grid: &Grid2D) -> Arc<ChannelPoisson> {
    let drift = (0..grid.n1()).map(|i| -1.0 / grid.z1(i)).collect();
    Arc::new(ChannelPoisson::new(*grid, 1, Some(drift)))
}

impl AxiState {
    /// Projects the given components onto the discrete divergence-free space.
    /// `v^θ` is kept as given; `(v^r, v³)` are rebuilt from their vorticity and
    /// axial flux.
    pub fn from_velocity(
        vr: &ScalarField2D,
        vtheta: &ScalarField2D,
        v3: &ScalarField2D,
    ) -> Result<Self, SimError> {
        let grid = *vr.grid();
        check_grid(&grid)?;
        grid.ensure_same(vtheta.grid())?;
        grid.ensure_same(v3.grid())?;
        for (f, n) in [(vr, "v^r"), (vtheta, "v^theta"), (v3, "v^3")] {
            check_periodic(f, n)?;
        }
        let omega = curl2d_with(&VectorField2D::from_components(vr, v3)?, EDGES)?;
        // Axial flux ∫ r v³ dr, averaged over the distinct x³ nodes.
        let nz = grid.n2() - 1;
        let h = grid.h1();
        let mut flux = 0.0;
        for j in 0..nz {
            let mut s = 0.0;
            for i in 0..grid.n1() {
                let w = if i == 0 || i + 1 == grid.n1() { 0.5 } else { 1.0 };
                s += w * grid.z1(i) * v3.at(i, j);
            }
            flux += s * h;
        }
        flux /= nz as f64;
        Self::from_vorticity(&omega, vtheta, flux)
    }

    pub fn from_vorticity(
        omega: &ScalarField2D,
        vtheta: &ScalarField2D,
        flux: f64,
    ) -> Result<Self, SimError> {
        let grid = *omega.grid();
        check_grid(&grid)?;
        grid.ensure_same(vtheta.grid())?;
        let solver = solver_for(&grid);
        Self::assemble(
            grid,
            omega.clone(),
            vtheta.clone(),
            flux,
            0.0,
            SchemeOptions::default(),
            solver,
        )
    }

    fn assemble(
        grid: Grid2D,
        omega: ScalarField2D,
        vtheta: ScalarField2D,
        flux: f64,
        time: f64,
        scheme: SchemeOptions,
        solver: Arc<ChannelPoisson>,
    ) -> Result<Self, SimError> {
        let rhs: Vec<f64> = grid
            .nodes()
            .map(|(i, j, z)| -z[0] * omega.at(i, j))
            .collect();
        let psi = ScalarField2D::new(grid, solver.solve(&rhs, [0.0, flux])?)?;
        let v = perp_gradient_with(&psi, Some(&radius(&grid)), EDGES)?;
        let (vr, v3) = v.split();
        Ok(Self {
            grid,
            vr,
            vtheta,
            v3,
            omega,
            psi,
            flux,
            time,
            scheme,
            solver,
        })
    }

    pub fn with_scheme(mut self, scheme: SchemeOptions) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }
    pub fn r_min(&self) -> f64 {
        self.grid.min1()
    }
    pub fn time(&self) -> f64 {
        self.time
    }
    pub fn vr(&self) -> &ScalarField2D {
        &self.vr
    }
    pub fn vtheta(&self) -> &ScalarField2D {
        &self.vtheta
    }
    pub fn v3(&self) -> &ScalarField2D {
        &self.v3
    }
    /// Azimuthal vorticity `∂₃v^r − ∂_r v³`.
    pub fn omega(&self) -> &ScalarField2D {
        &self.omega
    }
    pub fn psi(&self) -> &ScalarField2D {
        &self.psi
    }
    pub fn flux(&self) -> f64 {
        self.flux
    }
    pub fn gamma(&self) -> ScalarField2D {
        ScalarField2D::new(
            self.grid,
            self.grid
                .nodes()
                .map(|(i, j, z)| z[0] * self.vtheta.at(i, j))
                .collect(),
        )
        .expect("finite swirl")
    }
    pub fn meridian_velocity(&self) -> VectorField2D {
        VectorField2D::from_components(&self.vr, &self.v3).expect("same grid")
    }
    /// `∂_r v^r + v^r / r + ∂₃v³`.
    pub fn divergence(&self) -> Result<ScalarField2D, SimError> {
        Ok(crate::field::weighted_divergence(
            &self.meridian_velocity(),
            &radius(&self.grid),
            EDGES,
        )?)
    }
    /// Residual of the stream-function solve behind the current velocity.
    pub fn projection_residual(&self) -> f64 {
        let rhs: Vec<f64> = self
            .grid
            .nodes()
            .map(|(i, j, z)| -z[0] * self.omega.at(i, j))
            .collect();
        self.solver.residual(self.psi.values(), &rhs)
    }
    pub fn cfl(&self, dt: f64) -> f64 {
        cfl_number(&self.grid, self.vr.values(), self.v3.values(), dt)
    }
}

/// `∂₃(Γ²) / r⁴`.
fn swirl_source(grid: &Grid2D, gamma: &[f64]) -> Result<Vec<f64>, SimError> {
    let g2 = ScalarField2D::new(*grid, gamma.iter().map(|g| g * g).collect())?;
    let d = d2(&g2, Edge::Periodic)?;
    Ok(grid
        .nodes()
        .map(|(i, j, z)| d.at(i, j) / z[0].powi(4))
        .collect())
}

fn finite(v: &[f64], grid: &Grid2D, what: &str) -> Result<(), SimError> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(k) => {
            let (i, j) = grid.ij(k);
            Err(SimError::NonFinite(format!("{what} at node ({i}, {j})")))
        }
        None => Ok(()),
    }
}

pub fn step_axisym(state: &AxiState, dt: f64) -> Result<AxiState, SimError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SimError::Domain(format!("time step must be positive, got {dt}")));
    }
    let cfl = state.cfl(dt);
    if cfl > CFL_MAX {
        return Err(SimError::Cfl { value: cfl });
    }
    let grid = state.grid;
    let tr = Transport {
        grid,
        wrap: WRAP,
        method: state.scheme.method,
    };
    let r: Vec<f64> = grid.nodes().map(|(_, _, z)| z[0]).collect();
    let gamma0 = state.gamma().into_values();
    let s0 = swirl_source(&grid, &gamma0)?;
    let eta_half: Vec<f64> = (0..grid.len())
        .map(|k| state.omega.values()[k] / r[k] + 0.5 * dt * s0[k])
        .collect();

    let transport = |dep: &[[f64; 2]]| -> Result<(Vec<f64>, Vec<f64>), SimError> {
        let gamma = tr.advect(&gamma0, dep);
        let s1 = swirl_source(&grid, &gamma)?;
        let eta = tr.advect(&eta_half, dep);
        let omega: Vec<f64> = (0..grid.len())
            .map(|k| r[k] * (eta[k] + 0.5 * dt * s1[k]))
            .collect();
        finite(&gamma, &grid, "swirl")?;
        finite(&omega, &grid, "vorticity")?;
        Ok((gamma, omega))
    };
    let build = |gamma: Vec<f64>, omega: Vec<f64>| -> Result<AxiState, SimError> {
        let vtheta: Vec<f64> = gamma.iter().zip(&r).map(|(g, r)| g / r).collect();
        AxiState::assemble(
            grid,
            ScalarField2D::new(grid, omega)?,
            ScalarField2D::new(grid, vtheta)?,
            state.flux,
            state.time + dt,
            state.scheme,
            state.solver.clone(),
        )
    };

    let dep0 = tr.departures(state.vr.values(), state.v3.values(), dt);
    let (g1, o1) = transport(&dep0)?;
    let pred = build(g1, o1)?;
    let mid1: Vec<f64> = state
        .vr
        .values()
        .iter()
        .zip(pred.vr.values())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let mid2: Vec<f64> = state
        .v3
        .values()
        .iter()
        .zip(pred.v3.values())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let dep1 = tr.departures(&mid1, &mid2, dt);
    let (g2, o2) = transport(&dep1)?;
    build(g2, o2)
}

/// Advances `steps` times with `dt = cfl·h / max|b|`, capped by `dt_max`.
/// Returns every state including the initial one.
pub fn run_axisym(
    initial: AxiState,
    steps: usize,
    cfl: f64,
    dt_max: f64,
) -> Result<Vec<AxiState>, SimError> {
    let h = initial.grid.h1().min(initial.grid.h2());
    let mut out = Vec::with_capacity(steps + 1);
    out.push(initial);
    for _ in 0..steps {
        let s = out.last().expect("non-empty");
        let vmax = s.cfl(1.0) * h;
        let dt = if vmax > 0.0 { (cfl * h / vmax).min(dt_max) } else { dt_max };
        let next = step_axisym(s, dt)?;
        out.push(next);
    }
    Ok(out)
}

fn ensure_series(series: &[AxiState]) -> Result<(), SimError> {
    if series.len() < 2 {
        return Err(SimError::Domain("need at least two snapshots".into()));
    }
    for s in series {
        series[0].grid.ensure_same(&s.grid)?;
    }
    Ok(())
}

/// `max_t | ‖Γ(t)‖∞ − ‖Γ(0)‖∞ | / ‖Γ(0)‖∞`, or the absolute drift when
/// `Γ(0) ≡ 0`.
pub fn gamma_conservation(series: &[AxiState]) -> Result<f64, SimError> {
    ensure_series(series)?;
    let g0 = series[0].gamma().sup_norm();
    let worst = series
        .iter()
        .map(|s| (s.gamma().sup_norm() - g0).abs())
        .fold(0.0, f64::max);
    Ok(if g0 > 0.0 { worst / g0 } else { worst })
}

/// `∫ |Γ|^{2n} r dr dx³` over one period.
pub fn gamma_moment(state: &AxiState, n: u32) -> f64 {
    let g = &state.grid;
    let gamma = state.gamma();
    let mut acc = 0.0;
    for i in 0..g.n1() {
        let w = if i == 0 || i + 1 == g.n1() { 0.5 } else { 1.0 };
        for j in 0..g.n2() - 1 {
            acc += w * g.z1(i) * gamma.at(i, j).abs().powi(2 * n as i32);
        }
    }
    acc * g.h1() * g.h2()
}

/// Largest relative change of [`gamma_moment`] along the series.
pub fn gamma_moment_drift(series: &[AxiState], n: u32) -> Result<f64, SimError> {
    ensure_series(series)?;
    let m0 = gamma_moment(&series[0], n);
    let worst = series
        .iter()
        .map(|s| (gamma_moment(s, n) - m0).abs())
        .fold(0.0, f64::max);
    Ok(if m0 > 0.0 { worst / m0 } else { worst })
}

/// `max (|v^θ|·r − Γ₀)` over nodes; non-positive when the swirl bound holds.
pub fn swirl_bound_check(state: &AxiState, gamma0_sup: f64) -> f64 {
    state
        .grid
        .nodes()
        .map(|(i, j, z)| state.vtheta.at(i, j).abs() * z[0] - gamma0_sup)
        .fold(f64::NEG_INFINITY, f64::max)
}
