//! Planar Euler and Boussinesq flows in a channel.
//!
//! The channel is periodic along one coordinate and bounded by walls across
//! the other. With the scalar vorticity `ω = ∂₂v¹ − ∂₁v²` and
//! `v = ∇⊥ψ = (−∂₂ψ, ∂₁ψ)` the stream function solves `Δψ = −ω`; `ψ` is
//! constant on each wall, so the normal velocity vanishes there.
//!
//! For the Boussinesq system a momentum forcing `F` built from `h²` enters
//! the vorticity equation as `∂₂F¹ − ∂₁F²`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::advect::{cfl_number, Transport};
use super::poisson::ChannelPoisson;
use super::{SchemeOptions, SimError, CFL_MAX};
use crate::field::{
    curl2d_with, d1, d2, perp_gradient_with, Edge, Grid2D, ScalarField2D, VectorField2D, Wrap,
};

/// Which coordinate is bounded by walls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Walls {
    /// Walls at `z² = min2, max2`; periodic in `z¹`.
    AcrossZ2,
    /// Walls at `z¹ = min1, max1`; periodic in `z²`.
    AcrossZ1,
}

impl Walls {
    fn edges(self) -> [Edge; 2] {
        match self {
            Walls::AcrossZ2 => [Edge::Periodic, Edge::OneSided],
            Walls::AcrossZ1 => [Edge::OneSided, Edge::Periodic],
        }
    }
    fn wrap(self) -> [Wrap; 2] {
        match self {
            Walls::AcrossZ2 => [Wrap::Periodic, Wrap::Clamp],
            Walls::AcrossZ1 => [Wrap::Clamp, Wrap::Periodic],
        }
    }
    fn periodic_axis(self) -> usize {
        match self {
            Walls::AcrossZ2 => 0,
            Walls::AcrossZ1 => 1,
        }
    }
}

/// Momentum forcing of the Boussinesq system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Forcing {
    /// `F = (0, h²)`: `ω_t + v·∇ω + ∂₁h² = 0`.
    UpwardPlus,
    /// `F = (0, −h²)`: `ω_t + v·∇ω − ∂₁h² = 0`.
    UpwardMinus,
    /// `F = (h², 0)`: `ω_t + v·∇ω − ∂₂h² = 0`.
    Sideways,
}

#[derive(Debug, Clone)]
pub struct Euler2DState {
    grid: Grid2D,
    walls: Walls,
    omega: ScalarField2D,
    psi: ScalarField2D,
    velocity: VectorField2D,
    flux: f64,
    time: f64,
    scheme: SchemeOptions,
    solver: Arc<ChannelPoisson>,
}

impl Euler2DState {
    /// `flux` is the jump of `ψ` from the first wall to the second.
    pub fn from_vorticity(omega: &ScalarField2D, walls: Walls, flux: f64) -> Result<Self, SimError> {
        let grid = *omega.grid();
        let solver = Arc::new(ChannelPoisson::new(grid, walls.periodic_axis(), None));
        Self::assemble(grid, walls, omega.clone(), flux, 0.0, SchemeOptions::default(), solver)
    }

    /// Vorticity and wall flux are taken from `v`; the velocity is then
    /// rebuilt from the stream function.
    pub fn from_velocity(v: &VectorField2D, walls: Walls) -> Result<Self, SimError> {
        let grid = *v.grid();
        let omega = curl2d_with(v, walls.edges())?;
        let flux = match walls {
            // ∂₂ψ = −v¹
            Walls::AcrossZ2 => {
                let n = grid.n1() - 1;
                (0..n)
                    .map(|i| -trapezoid((0..grid.n2()).map(|j| v.at(i, j)[0]), grid.h2()))
                    .sum::<f64>()
                    / n as f64
            }
            // ∂₁ψ = v²
            Walls::AcrossZ1 => {
                let n = grid.n2() - 1;
                (0..n)
                    .map(|j| trapezoid((0..grid.n1()).map(|i| v.at(i, j)[1]), grid.h1()))
                    .sum::<f64>()
                    / n as f64
            }
        };
        Self::from_vorticity(&omega, walls, flux)
    }

    fn assemble(
        grid: Grid2D,
        walls: Walls,
        omega: ScalarField2D,
        flux: f64,
        time: f64,
        scheme: SchemeOptions,
        solver: Arc<ChannelPoisson>,
    ) -> Result<Self, SimError> {
        let rhs: Vec<f64> = omega.values().iter().map(|w| -w).collect();
        let psi = ScalarField2D::new(grid, solver.solve(&rhs, [0.0, flux])?)?;
        let velocity = perp_gradient_with(&psi, None, walls.edges())?;
        Ok(Self {
            grid,
            walls,
            omega,
            psi,
            velocity,
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
    pub fn walls(&self) -> Walls {
        self.walls
    }
    pub fn omega(&self) -> &ScalarField2D {
        &self.omega
    }
    pub fn psi(&self) -> &ScalarField2D {
        &self.psi
    }
    pub fn velocity(&self) -> &VectorField2D {
        &self.velocity
    }
    pub fn flux(&self) -> f64 {
        self.flux
    }
    pub fn time(&self) -> f64 {
        self.time
    }
    pub fn cfl(&self, dt: f64) -> f64 {
        cfl_number(&self.grid, self.velocity.c1(), self.velocity.c2(), dt)
    }
    pub fn divergence(&self) -> Result<ScalarField2D, SimError> {
        Ok(crate::field::divergence(&self.velocity, self.walls.edges())?)
    }
    pub fn projection_residual(&self) -> f64 {
        let rhs: Vec<f64> = self.omega.values().iter().map(|w| -w).collect();
        self.solver.residual(self.psi.values(), &rhs)
    }
}

fn trapezoid(vals: impl Iterator<Item = f64>, h: f64) -> f64 {
    let v: Vec<f64> = vals.collect();
    let n = v.len();
    let inner: f64 = v[1..n - 1].iter().sum();
    h * (inner + 0.5 * (v[0] + v[n - 1]))
}

#[derive(Debug, Clone)]
pub struct BoussinesqState {
    flow: Euler2DState,
    h: ScalarField2D,
    forcing: Forcing,
}

impl BoussinesqState {
    pub fn new(flow: Euler2DState, h: ScalarField2D, forcing: Forcing) -> Result<Self, SimError> {
        flow.grid.ensure_same(h.grid())?;
        Ok(Self { flow, h, forcing })
    }
    pub fn flow(&self) -> &Euler2DState {
        &self.flow
    }
    pub fn h(&self) -> &ScalarField2D {
        &self.h
    }
    pub fn forcing(&self) -> Forcing {
        self.forcing
    }
}

fn forcing_source(h: &[f64], grid: &Grid2D, forcing: Forcing, walls: Walls) -> Result<Vec<f64>, SimError> {
    let h2 = ScalarField2D::new(*grid, h.iter().map(|x| x * x).collect())?;
    let e = walls.edges();
    Ok(match forcing {
        Forcing::UpwardPlus => d1(&h2, e[0])?.values().iter().map(|x| -x).collect(),
        Forcing::UpwardMinus => d1(&h2, e[0])?.into_values(),
        Forcing::Sideways => d2(&h2, e[1])?.into_values(),
    })
}

/// Shared predictor–corrector step. Without a scalar the vorticity is purely
/// transported; with one, the forcing is split half before and half after.
fn advance(
    flow: &Euler2DState,
    scalar: Option<(&ScalarField2D, Forcing)>,
    dt: f64,
) -> Result<(Euler2DState, Option<ScalarField2D>), SimError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SimError::Domain(format!("time step must be positive, got {dt}")));
    }
    let cfl = flow.cfl(dt);
    if cfl > CFL_MAX {
        return Err(SimError::Cfl { value: cfl });
    }
    let grid = flow.grid;
    let tr = Transport {
        grid,
        wrap: flow.walls.wrap(),
        method: flow.scheme.method,
    };
    let src0 = match scalar {
        Some((h, f)) => Some(forcing_source(h.values(), &grid, f, flow.walls)?),
        None => None,
    };
    let omega_half: Vec<f64> = match &src0 {
        Some(s) => flow
            .omega
            .values()
            .iter()
            .zip(s)
            .map(|(w, s)| w + 0.5 * dt * s)
            .collect(),
        None => flow.omega.values().to_vec(),
    };
    let transport = |dep: &[[f64; 2]]| -> Result<(Vec<f64>, Option<Vec<f64>>), SimError> {
        let mut omega = tr.advect(&omega_half, dep);
        let h = match scalar {
            Some((h, f)) => {
                let hn = tr.advect(h.values(), dep);
                let s1 = forcing_source(&hn, &grid, f, flow.walls)?;
                for (w, s) in omega.iter_mut().zip(&s1) {
                    *w += 0.5 * dt * s;
                }
                Some(hn)
            }
            None => None,
        };
        if let Some(k) = omega.iter().position(|x| !x.is_finite()) {
            let (i, j) = grid.ij(k);
            return Err(SimError::NonFinite(format!("vorticity at node ({i}, {j})")));
        }
        Ok((omega, h))
    };
    let build = |omega: Vec<f64>| {
        Euler2DState::assemble(
            grid,
            flow.walls,
            ScalarField2D::new(grid, omega)?,
            flow.flux,
            flow.time + dt,
            flow.scheme,
            flow.solver.clone(),
        )
    };
    let dep0 = tr.departures(flow.velocity.c1(), flow.velocity.c2(), dt);
    let (o1, _) = transport(&dep0)?;
    let pred = build(o1)?;
    let avg = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect() };
    let m1 = avg(flow.velocity.c1(), pred.velocity.c1());
    let m2 = avg(flow.velocity.c2(), pred.velocity.c2());
    let dep1 = tr.departures(&m1, &m2, dt);
    let (o2, h2) = transport(&dep1)?;
    let next = build(o2)?;
    let h2 = match h2 {
        Some(v) => Some(ScalarField2D::new(grid, v)?),
        None => None,
    };
    Ok((next, h2))
}

pub fn step_euler2d(state: &Euler2DState, dt: f64) -> Result<Euler2DState, SimError> {
    advance(state, None, dt).map(|(s, _)| s)
}

/// With `h ≡ 0` this takes exactly the planar Euler path.
pub fn step_boussinesq(state: &BoussinesqState, dt: f64) -> Result<BoussinesqState, SimError> {
    if state.h.values().iter().all(|&x| x == 0.0) {
        return Ok(BoussinesqState {
            flow: step_euler2d(&state.flow, dt)?,
            h: state.h.clone(),
            forcing: state.forcing,
        });
    }
    let (flow, h) = advance(&state.flow, Some((&state.h, state.forcing)), dt)?;
    Ok(BoussinesqState {
        flow,
        h: h.expect("scalar transported"),
        forcing: state.forcing,
    })
}

/// Runs `steps` planar Euler steps at fixed `dt`, keeping every state.
pub fn run_euler2d(initial: Euler2DState, steps: usize, dt: f64) -> Result<Vec<Euler2DState>, SimError> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(initial);
    for _ in 0..steps {
        let next = step_euler2d(out.last().expect("non-empty"), dt)?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn channel(n: usize) -> Grid2D {
        Grid2D::new((0.0, TAU), (0.0, PI), n, n / 2 + 1).unwrap()
    }

    #[test]
    fn shear_is_steady() {
        let g = channel(32);
        let v = VectorField2D::from_fn(g, |_, y| [y.cos() + 0.3 * y, 0.0]).unwrap();
        let s = Euler2DState::from_velocity(&v, Walls::AcrossZ2).unwrap();
        let t = step_euler2d(&s, 0.05).unwrap();
        assert!(t.omega().max_abs_diff(s.omega()).unwrap() <= 1e-10);
        assert!(t.velocity().component(1).sup_norm() <= 1e-10);
    }

    #[test]
    fn zero_scalar_boussinesq_is_euler_bitwise() {
        let g = channel(24);
        let w = ScalarField2D::from_fn(g, |x, y| x.sin() * y.sin() + 0.4 * (2.0 * x).cos() * (2.0 * y).sin())
            .unwrap();
        let s = Euler2DState::from_vorticity(&w, Walls::AcrossZ2, 0.0).unwrap();
        let b = BoussinesqState::new(s.clone(), ScalarField2D::zeros(g), Forcing::UpwardPlus).unwrap();
        let e1 = step_euler2d(&s, 0.05).unwrap();
        let b1 = step_boussinesq(&b, 0.05).unwrap();
        for (x, y) in e1.omega().values().iter().zip(b1.flow().omega().values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn forcing_generates_vorticity_with_the_declared_sign() {
        // h² increasing in z¹ near the centre: UpwardMinus gives +∂₁h² > 0.
        let g = channel(24);
        let s = Euler2DState::from_vorticity(&ScalarField2D::zeros(g), Walls::AcrossZ2, 0.0).unwrap();
        let h = ScalarField2D::from_fn(g, |x, _| 1.0 + 0.1 * x.sin()).unwrap();
        let b = BoussinesqState::new(s, h, Forcing::UpwardMinus).unwrap();
        let b1 = step_boussinesq(&b, 0.01).unwrap();
        let i = 1; // z¹ = h1, where ∂₁ sin > 0
        assert!(b1.flow().omega().at(i, 5) > 0.0);
        let b = BoussinesqState::new(b.flow().clone(), b.h().clone(), Forcing::UpwardPlus).unwrap();
        assert!(step_boussinesq(&b, 0.01).unwrap().flow().omega().at(i, 5) < 0.0);
    }

    #[test]
    fn side_walls_channel() {
        let g = Grid2D::new((-PI, 0.0), (0.0, TAU), 17, 33).unwrap();
        let w = ScalarField2D::from_fn(g, |x, y| x.sin() * y.cos()).unwrap();
        let s = Euler2DState::from_vorticity(&w, Walls::AcrossZ1, 0.0).unwrap();
        for j in 0..g.n2() {
            assert!(s.velocity().at(0, j)[0].abs() < 1e-12);
            assert!(s.velocity().at(g.n1() - 1, j)[0].abs() < 1e-12);
        }
        assert!(step_euler2d(&s, 0.05).is_ok());
    }
}
