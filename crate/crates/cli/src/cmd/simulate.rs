use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

use axiblow::field::{Grid2D, ScalarField2D};
use axiblow::profile::load_profile_csv;
use axiblow::sim::{
    gamma_conservation, gamma_moment_drift, run_axisym, run_euler2d, smooth_random_axisym, smooth_random_euler2d,
    swirl_bound_check, write_trajectory, AxiState, Euler2DState, Walls, CFL_MAX, DEFAULT_R_MIN,
};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::Output;
use crate::{existing, CliError, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum System {
    Axisym,
    Euler2d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WallsArg {
    AcrossZ2,
    AcrossZ1,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub system: System,
    /// Initial data CSV: `omega` (euler2d) or `omega,vtheta` (axisym).
    /// Without it a smooth random field is drawn from `--seed`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.4)]
    pub cfl: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dt_max: f64,
    /// Stream-function jump between the walls.
    #[arg(long, default_value_t = 0.0)]
    pub flux: f64,
    #[arg(long, value_enum, default_value_t = WallsArg::AcrossZ2)]
    pub walls: WallsArg,
    /// Snapshot stride of the dump; 0 keeps the first and last states.
    #[arg(long, default_value_t = 0)]
    pub every: usize,
}

impl SimulateArgs {
    pub(crate) fn resolve(&mut self) -> Result<(), CliError> {
        if let Some(p) = &self.input {
            self.input = Some(existing("input", p)?);
        }
        if self.input.is_none() && self.n < 8 {
            return Err(CliError::input("n", format!("must be at least 8, got {}", self.n)));
        }
        if !(self.cfl > 0.0 && self.cfl <= CFL_MAX) {
            return Err(CliError::input("cfl", format!("must lie in (0, {CFL_MAX}], got {}", self.cfl)));
        }
        if !(self.dt_max > 0.0 && self.dt_max.is_finite()) {
            return Err(CliError::input("dt-max", format!("must be positive, got {}", self.dt_max)));
        }
        if !self.flux.is_finite() {
            return Err(CliError::input("flux", "must be finite"));
        }
        Ok(())
    }
}

fn kept(len: usize, every: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = if every == 0 { vec![0] } else { (0..len).step_by(every).collect() };
    if *idx.last().expect("non-empty") != len - 1 {
        idx.push(len - 1);
    }
    idx
}

fn input_fields(a: &SimulateArgs, columns: &[&str]) -> Result<Option<Vec<ScalarField2D>>, CliError> {
    let Some(p) = &a.input else { return Ok(None) };
    let t = load_profile_csv(p, columns).map_err(|e| CliError::input("input", e))?;
    Ok(Some(columns.iter().map(|c| t.fields[*c].clone()).collect()))
}

pub fn run(a: &SimulateArgs, out: &Output) -> Result<i32, CliError> {
    let sim = |e: axiblow::sim::SimError| CliError::input("simulate", e);
    let report = match a.system {
        System::Axisym => {
            let s0 = match input_fields(a, &["omega", "vtheta"])? {
                Some(f) => AxiState::from_vorticity(&f[0], &f[1], a.flux).map_err(sim)?,
                None => {
                    let g = Grid2D::new((DEFAULT_R_MIN, 1.0), (0.0, 1.0), a.n, a.n).map_err(|e| CliError::input("n", e))?;
                    smooth_random_axisym(g, a.seed).map_err(sim)?
                }
            };
            let series = run_axisym(s0, a.steps, a.cfl, a.dt_max).map_err(sim)?;
            let snaps: Vec<_> = kept(series.len(), a.every)
                .into_iter()
                .map(|k| {
                    let s = &series[k];
                    (s.time(), vec![s.omega().clone(), s.vtheta().clone(), s.vr().clone(), s.v3().clone()])
                })
                .collect();
            let dump = write_trajectory(out.dir(), &format!("{}-trajectory", out.prefix()), &["omega", "vtheta", "vr", "v3"], &snaps)
                .map_err(|e| CliError::Output(e.to_string()))?;
            let g0 = series[0].gamma().sup_norm();
            let (drift, moments) = if series.len() > 1 {
                (
                    Some(gamma_conservation(&series).map_err(sim)?),
                    Some((1..=3).map(|n| gamma_moment_drift(&series, n)).collect::<Result<Vec<_>, _>>().map_err(sim)?),
                )
            } else {
                (None, None)
            };
            json!({
                "system": a.system,
                "steps": a.steps,
                "final_time": series.last().expect("non-empty").time(),
                "gamma_sup_drift": drift,
                "gamma_moment_drift": moments,
                "swirl_bound_excess": series.iter().map(|s| swirl_bound_check(s, g0)).fold(f64::MIN, f64::max),
                "projection_residual": series.last().expect("non-empty").projection_residual(),
                "trajectory": dump,
            })
        }
        System::Euler2d => {
            let walls = match a.walls {
                WallsArg::AcrossZ2 => Walls::AcrossZ2,
                WallsArg::AcrossZ1 => Walls::AcrossZ1,
            };
            let s0 = match input_fields(a, &["omega"])? {
                Some(f) => Euler2DState::from_vorticity(&f[0], walls, a.flux).map_err(sim)?,
                None => {
                    let g = match walls {
                        Walls::AcrossZ2 => Grid2D::new((0.0, TAU), (0.0, PI), a.n + 1, a.n / 2 + 1),
                        Walls::AcrossZ1 => Grid2D::new((0.0, PI), (0.0, TAU), a.n / 2 + 1, a.n + 1),
                    }
                    .map_err(|e| CliError::input("n", e))?;
                    smooth_random_euler2d(g, walls, a.seed).map_err(sim)?
                }
            };
            let h = s0.grid().h1().min(s0.grid().h2());
            let vmax = s0.velocity().sup_norm();
            let dt = if vmax > 0.0 { (a.cfl * h / vmax).min(a.dt_max) } else { a.dt_max };
            let series = run_euler2d(s0, a.steps, dt).map_err(sim)?;
            let snaps: Vec<_> = kept(series.len(), a.every)
                .into_iter()
                .map(|k| {
                    let s = &series[k];
                    let (v1, v2) = s.velocity().split();
                    (s.time(), vec![s.omega().clone(), s.psi().clone(), v1, v2])
                })
                .collect();
            let dump = write_trajectory(out.dir(), &format!("{}-trajectory", out.prefix()), &["omega", "psi", "v1", "v2"], &snaps)
                .map_err(|e| CliError::Output(e.to_string()))?;
            let (first, last) = (&series[0], series.last().expect("non-empty"));
            let growth = series
                .iter()
                .map(|s| (s.omega().max() - first.omega().max()).max(first.omega().min() - s.omega().min()))
                .fold(0.0f64, f64::max);
            json!({
                "system": a.system,
                "steps": a.steps,
                "dt": dt,
                "final_time": last.time(),
                "omega_range_initial": [first.omega().min(), first.omega().max()],
                "omega_range_final": [last.omega().min(), last.omega().max()],
                "extremum_growth": growth,
                "projection_residual": last.projection_residual(),
                "trajectory": dump,
            })
        }
    };
    out.write_json("simulate.json", &report)?;
    Ok(EXIT_OK)
}
