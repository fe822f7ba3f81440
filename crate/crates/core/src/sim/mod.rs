//! Semi-Lagrangian steppers and their invariant checks.

mod advect;
mod axisym;
mod dump;
mod init;
mod planar;
mod poisson;
mod weak;

pub use axisym::{
    gamma_conservation, gamma_moment, gamma_moment_drift, run_axisym, step_axisym,
    swirl_bound_check, AxiState, DEFAULT_R_MIN,
};
pub use dump::{write_trajectory, TrajectoryManifest};
pub use init::{smooth_random_axisym, smooth_random_euler2d};
pub use planar::{
    run_euler2d, step_boussinesq, step_euler2d, BoussinesqState, Euler2DState, Forcing, Walls,
};
pub use poisson::{ChannelPoisson, POISSON_TOL};
pub use weak::{weak_residual, weak_residual_rss, SpaceTimeBump, TestField};

use thiserror::Error;

use crate::field::{FieldError, Method};

/// Steps are refused above this Courant number.
pub const CFL_MAX: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeOptions {
    /// Interpolation used for transported quantities.
    /// [`Method::BicubicClamped`] turns on the extremum limiter.
    pub method: Method,
}

impl Default for SchemeOptions {
    fn default() -> Self {
        Self {
            method: Method::Bicubic,
        }
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("CFL number {value} exceeds {CFL_MAX}")]
    Cfl { value: f64 },
    #[error("non-finite value in update: {0}")]
    NonFinite(String),
    #[error("Poisson solve did not converge, residual {residual}")]
    PoissonNotConverged { residual: f64 },
    #[error("test field support touches the sampled window boundary")]
    SupportTouchesBoundary,
    #[error("{0}")]
    Domain(String),
    #[error("io: {0}")]
    Io(String),
}
