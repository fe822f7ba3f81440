//! Blow-up rescaling diagnostics and self-similar profile certifiers for
//! axisymmetric incompressible Euler flows.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: uniform grids, sampled fields, difference operators,
//!   interpolation, quadrature, discrete Hölder norms and the CSV format.
//! - [`sim`]: semi-Lagrangian steppers for the axisymmetric, planar Euler and
//!   half-plane Boussinesq systems, with conservation and weak-form checks.
//! - [`rescale`]: blow-up sequences, rescaling maps, anchor tests, domain
//!   classification and reduced-equation residuals.
//! - [`profile`]: self-similar ansätze, exponent regimes, scaled families,
//!   profile validation and the explicit base ODE.
//! - [`certify`]: contradiction certifiers that run the non-existence
//!   mechanisms against a candidate profile.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod field;
pub mod numeric;
pub mod profile;
pub mod rescale;
pub mod sim;

use thiserror::Error;

/// Umbrella error for callers that mix modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error(transparent)]
    Sim(#[from] sim::SimError),
    #[error(transparent)]
    Rescale(#[from] rescale::RescaleError),
    #[error(transparent)]
    Profile(#[from] profile::ProfileError),
    #[error(transparent)]
    Certify(#[from] certify::CertifyError),
}
