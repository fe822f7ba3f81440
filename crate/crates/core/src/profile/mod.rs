//! Self-similar ansätze: exponent regimes, scaled families, profile
//! validation, the explicit base ODE and external-data ingestion.

mod ansatz;
mod base_ode;
mod family;
mod homogeneity;
mod ingest;
mod regime;
mod symmetry;
mod vorticity;

pub use ansatz::{
    default_error_modulus, names, AnsatzManifest, Parity, Profile, SelfSimilarAnsatz, SignRule,
    NONTRIVIAL_TOL,
};
pub use base_ode::{base_ode_solve, BaseOdeSolution, BaseOdeSpec, ClosedFormBase};
pub use family::{build_scaled_family, FamilyMember, FamilyVariant};
pub use homogeneity::{homogeneity_check, HomogeneityOptions, HomogeneityReport, HomogeneityVerdict};
pub use ingest::{load_profile_csv, ProfileTable};
pub use regime::{classify_regime, RegimeClass, RegimeTag};
pub use symmetry::{
    symmetry_decay_check, DecayFit, ParityFinding, ProfileFindings, SignFinding, SymmetryOptions,
    SymmetryReport,
};
pub use vorticity::{
    vorticity_consistency, vorticity_from_derivatives, vorticity_table_check, NodeMismatch,
    PointMismatch, TableCheck, VorticityCheck,
};

use thiserror::Error;

use crate::field::FieldError;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid exponents: {0}")]
    InvalidExponents(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("profile '{0}' is required but missing")]
    MissingProfile(String),
    #[error("drift coefficient V¹ + (1−α)z vanishes or turns negative at z = {z}")]
    SingularOde { z: f64 },
    #[error("manifest: {0}")]
    Manifest(String),
}
